"""Seeded equivalence suites: run a simulator over many schedules and check refinement."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .engine import Configuration, epochs, run
from .exactgeom import P
from .modelcore import Algorithm, Model
from .protocols.refinement import RefinementReport, compare_collapse, run_checked
from .protocols.simulators import fsynch_collapse, rsynch_handshake, sim_a
from .registry import make_algorithm
from .sched import Schedule, gen_asynch, gen_fsynch, gen_rsynch

SUITE_IDS = ("midpoint", "anchor", "token3")


def seeded_init(seed) -> Configuration:
    rng = random.Random(f"init-{seed}")
    a = P(rng.randint(-10, 10), rng.randint(-10, 10))
    b = a
    while b == a:
        b = P(rng.randint(-10, 10), rng.randint(-10, 10))
    return Configuration.of(a, b)


def rsynch_for_seed(seed: int, turns: int = 24) -> Schedule:
    """Prefix lengths 0..3 and both first movers cycle with the seed."""
    prefix = seed % 4
    first = "AB"[(seed // 4) % 2]
    return gen_rsynch(prefix, turns + seed % 5, first)


@dataclass
class EquivSummary:
    simulator: str
    algorithms: list
    seeds: int
    runs: int = 0
    failures: list = field(default_factory=list)
    max_overhead: Optional[Fraction] = None
    max_colors: dict = field(default_factory=dict)
    max_patterns: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, alg: Algorithm, seed, rep: RefinementReport) -> None:
        self.runs += 1
        if not rep.ok:
            self.failures.append({"algorithm": alg.name, "seed": seed, "problems": rep.problems[:3]})
        if rep.overhead is not None:
            self.max_overhead = rep.overhead if self.max_overhead is None else max(self.max_overhead, rep.overhead)
        self.max_colors[alg.name] = max(self.max_colors.get(alg.name, 0), rep.colors)
        self.max_patterns = max(self.max_patterns, rep.patterns)

    def to_json(self) -> dict:
        return {
            "simulator": self.simulator, "algorithms": self.algorithms, "seeds": self.seeds,
            "runs": self.runs, "ok": self.ok,
            "max_overhead": None if self.max_overhead is None else str(self.max_overhead),
            "max_colors": self.max_colors, "max_patterns": self.max_patterns,
            "failures": self.failures[:10],
        }


def equiv_suite(simulator: str, algorithm_ids: Sequence[str] = SUITE_IDS, seeds: int = 50,
                atomicity: str = "NONE", cycles: int = 12, turns: int = 24) -> EquivSummary:
    """Run ``simulator`` over ``seeds`` schedules for each inner algorithm.

    ``sim.handshake`` uses RSYNCH schedules, ``sim.a`` ASYNCH schedules of the
    given atomicity (LC-atomic ones must also project to LCM-atomic traces),
    and ``sim.collapse`` FSYNCH with both FSTA and FCOM targets.
    """
    summary = EquivSummary(simulator, list(algorithm_ids), seeds)
    for aid in algorithm_ids:
        inner = make_algorithm(aid)
        for seed in range(seeds):
            init = seeded_init(seed)
            if simulator == "sim.handshake":
                rep = run_checked(rsynch_handshake(inner), inner, rsynch_for_seed(seed, turns), init)
            elif simulator == "sim.a":
                sched = gen_asynch(seed, cycles, atomicity)
                rep = run_checked(sim_a(inner), inner, sched, init, lcm_expected=atomicity == "LC")
            elif simulator == "sim.collapse":
                rep = collapse_report(inner, 3 + seed % 6, init)
            else:
                raise KeyError(f"unknown simulator {simulator!r}")
            summary.add(inner, seed, rep)
    return summary


def collapse_report(inner: Algorithm, rounds: int, init: Configuration) -> RefinementReport:
    sched = gen_fsynch(rounds)
    original = run(inner, Model.LUMI, sched, init)
    problems, colors = [], 0
    n_epochs = len(epochs(original))
    for target in (Model.FSTA, Model.FCOM):
        sim = fsynch_collapse(inner, target)
        if sim.k != inner.k:
            problems.append(f"{target.value}: palette grew to {sim.k}")
        collapsed = run(sim, target, sched, init)
        problems += [f"{target.value}: {p}" for p in compare_collapse(original, collapsed)]
        if len(epochs(collapsed)) != n_epochs:
            problems.append(f"{target.value}: epoch count changed")
        colors = max(colors, len({c for r in "AB" for _, c in collapsed.color_changes[r]}))
    return RefinementReport(f"sim.collapse[{inner.name}]", inner.name, not problems, problems,
                            n_epochs, Fraction(1), colors, 0)
