"""String ids for algorithms, simulators, schedulers and adversaries, and scenario loading.

A scenario is a JSON object::

    {"algorithm": {"id": "midpoint", "params": {}},
     "model": "OBLOT",
     "schedule": {"id": "fsynch", "params": {"rounds": 2}},
     "initial": {"A": ["0", "0"], "B": ["1", "0"]},
     "grid": false}

Adversary schedule ids may supply the initial configuration (and, for
``adv.dmsd``, the algorithm) themselves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional

from . import adversaries
from .engine import Configuration, Trace, run
from .exactgeom import Point
from .modelcore import Algorithm, Model
from .protocols import algorithms as algs
from .protocols import simulators as sims
from .sched import Schedule, gen_asynch, gen_fsynch, gen_rsynch, gen_ssynch


class RegistryError(KeyError):
    def __str__(self):
        return self.args[0] if self.args else "registry error"


def _q(v) -> Fraction:
    return Fraction(str(v))


ALGORITHMS: dict[str, Callable[..., Algorithm]] = {
    "midpoint": lambda: algs.go_to_midpoint(),
    "anchor": lambda: algs.anchor_midpoint(),
    "token3": lambda hop="1/4": algs.token_ring(_q(hop)),
    "single_move": lambda hop="1/4": algs.single_move(_q(hop)),
    "sro": lambda: algs.sro_oblot(),
    "cge": lambda: algs.cge_fsynch(),
    "lambda_step": lambda **kw: algs.lambda_step(_q(kw.get("lambda", "1/2"))),
    "stay": lambda: algs.stay_put(),
}

SIMULATORS = {
    "sim.collapse": lambda inner, target="FSTA": sims.fsynch_collapse(inner, target),
    "sim.handshake": lambda inner, echo_on_ack=True: sims.rsynch_handshake(inner, bool(echo_on_ack)),
    "sim.a": lambda inner: sims.sim_a(inner),
}

SCHEDULERS = {
    "fsynch": lambda rounds=4: gen_fsynch(int(rounds)),
    "rsynch": lambda prefix=0, alt=8, first="A": gen_rsynch(int(prefix), int(alt), first),
    "ssynch": lambda seed=0, rounds=10, window=3: gen_ssynch(seed, int(rounds), int(window)),
    "asynch": lambda seed=0, cycles=5, atomicity="NONE", random_frames=False: gen_asynch(
        seed, int(cycles), atomicity, random_frames=bool(random_frames)),
}

ADVERSARIES = ("adv.psi", "adv.dmsd", "adv.mirror")


def make_algorithm(spec) -> Algorithm:
    """``"midpoint"`` or ``{"id": ..., "params": {...}}``; simulators take ``params.inner``."""
    if isinstance(spec, str):
        spec = {"id": spec}
    aid, params = spec.get("id"), dict(spec.get("params") or {})
    if aid in ALGORITHMS:
        return ALGORITHMS[aid](**params)
    if aid in SIMULATORS:
        inner = params.pop("inner", None)
        if inner is None:
            raise RegistryError(f"simulator {aid} needs params.inner")
        return SIMULATORS[aid](make_algorithm(inner), **params)
    raise RegistryError(f"unknown algorithm id {aid!r}")


def _point(obj) -> Point:
    return Point.from_json(obj)


@dataclass
class Scenario:
    name: str
    algorithm: Algorithm
    model: Model
    schedule: Schedule
    init: Configuration
    grid: bool
    raw: dict
    aligned_times: tuple = ()

    def run(self) -> Trace:
        return run(self.algorithm, self.model, self.schedule, self.init, self.grid)


def _initial(raw: dict) -> Optional[Configuration]:
    ini = raw.get("initial")
    if ini is None:
        return None
    colors = ini.get("colors") or {}
    return Configuration({"A": _point(ini["A"]), "B": _point(ini["B"])},
                         {"A": colors.get("A"), "B": colors.get("B")})


def build_scenario(raw: dict) -> Scenario:
    name = raw.get("name", "scenario")
    model = Model(raw.get("model", "OBLOT"))
    grid = bool(raw.get("grid", False))
    sspec = raw.get("schedule") or {}
    sid, sparams = sspec.get("id"), dict(sspec.get("params") or {})
    init = _initial(raw)
    alg = make_algorithm(raw["algorithm"]) if raw.get("algorithm") else None
    aligned: tuple = ()
    if sid in SCHEDULERS:
        sched = SCHEDULERS[sid](**sparams)
    elif sid == "adv.psi":
        rs = sparams.get("rs", [sparams.get("r", 0)])
        sched = adversaries.psi_interleave_chain([int(r) for r in rs])
    elif sid == "adv.dmsd":
        brk = adversaries.dmsd_break(_q(sparams.get("lambda", "1/2")), _q(sparams.get("x", "1/3")))
        sched, alg = brk.schedule, alg or brk.algorithm
        init = init or brk.init
    elif sid == "adv.mirror":
        if alg is None:
            raise RegistryError("adv.mirror needs an algorithm")
        setup = adversaries.mirror_rsynch(alg, model, int(sparams.get("turns", 40)),
                                          _q(sparams.get("p", 1)))
        sched, init, aligned = setup.schedule, setup.init, setup.aligned_times
    else:
        raise RegistryError(f"unknown schedule id {sid!r}")
    if alg is None:
        raise RegistryError("scenario names no algorithm")
    if init is None:
        raise RegistryError("scenario gives no initial configuration")
    return Scenario(name, alg, model, sched, init, grid, raw, aligned)


def load_scenario(path) -> Scenario:
    raw: dict[str, Any] = json.loads(Path(path).read_text())
    return build_scenario(raw)
