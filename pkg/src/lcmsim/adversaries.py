"""Constructive adversarial schedules.

* ``psi_interleave``: A looks, B finishes ``r`` fresh midpoint moves, then A
  moves on its stale snapshot (CM-atomic, so DMSD survives).
* ``dmsd_break``: B looks while A is part way through its move (not atomic),
  breaking DMSD with a non-dyadic stop ratio.
* ``mirror_rsynch``: a symmetric start plus an RSYNCH schedule that keeps
  FSTA robots from breaking symmetry.
* ``rdam_cases``: one CM-atomic schedule per case of the anchor-midpoint
  analysis (simultaneous Looks, late Look, stale Look, steady ANCHOR state).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .engine import Configuration, Trace, color_at, motion_intervals, position_at, run
from .exactgeom import P, Q, sqdist
from .modelcore import ROBOTS, Algorithm, Model
from .protocols.algorithms import lambda_step
from .sched import CycleSpec, Schedule, gen_fsynch, gen_rsynch


def psi(r: int) -> Fraction:
    """Distance factor after a stale midpoint move that follows ``r`` fresh peer moves."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return Fraction(1, 2)
    return Fraction(2 ** (r - 1) - 1, 2 ** r)


def _block(start: Fraction, robot: str, idx: int, length=Fraction(1)) -> CycleSpec:
    q = length / 4
    return CycleSpec(robot, idx, start, start + q, start + 2 * q, start + 3 * q)


def psi_interleave_chain(rs: Sequence[int]) -> Schedule:
    """One stale move of A per entry of ``rs``, each preceded by that many fresh B cycles.

    For one entry ``r``: A looks at ``t``, B runs ``r`` whole cycles inside
    ``(t_L(A), t_C(A))``, then A computes and moves. A trailing B cycle keeps
    the schedule fair.
    """
    cycles = []
    idx = {r: 0 for r in ROBOTS}
    t = Fraction(0)
    for r in rs:
        if r < 0:
            raise ValueError("interleave counts must be non-negative")
        idx["A"] += 1
        look = t
        t += Fraction(1, 2)
        for _ in range(r):
            idx["B"] += 1
            cycles.append(_block(t, "B", idx["B"]))
            t += 1
        tc = t
        cycles.append(CycleSpec("A", idx["A"], look, tc, tc + Fraction(1, 4), tc + Fraction(1, 2)))
        t = tc + 1
    if idx["B"] == 0 or (rs and rs[-1] == 0):
        idx["B"] += 1
        cycles.append(_block(t, "B", idx["B"]))
        t += 1
    return Schedule(tuple(cycles), "CM", "ASYNCH", t)


def psi_interleave(r: int) -> Schedule:
    return psi_interleave_chain([r])


def stale_move_end(sched: Schedule, k: int = 1) -> Fraction:
    """End of A's ``k``-th move, the stop that follows the ``k``-th interleave."""
    return sched.cycle("A", k).t_end


def squared_ratio_at(trace: Trace, t: Fraction) -> Fraction:
    a0, b0 = trace.initial.positions["A"], trace.initial.positions["B"]
    return sqdist(position_at(trace, "A", t), position_at(trace, "B", t)) / sqdist(a0, b0)


@dataclass(frozen=True)
class DmsdBreak:
    schedule: Schedule
    algorithm: Algorithm
    init: Configuration
    expected_ratio: Fraction
    stop_time: Fraction


def dmsd_ratio(lam, x) -> Fraction:
    lam, x = Q(lam), Q(x)
    return abs(1 - 2 * lam + lam * lam * x)


def dmsd_break(lam, x) -> DmsdBreak:
    """A moves over ``[2, 4]``; B looks at 3 with A's progress pinned at ``x``; both arrive at 4."""
    lam, x = Q(lam), Q(x)
    if not 0 < lam <= 1:
        raise ValueError("lambda must lie in (0, 1]")
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1)")
    look_b = Fraction(3)
    a = CycleSpec("A", 1, Fraction(1), Fraction(3, 2), Fraction(2), Fraction(4), pins=((look_b, x),))
    b = CycleSpec("B", 1, look_b, Fraction(13, 4), Fraction(7, 2), Fraction(4))
    sched = Schedule((a, b), "NONE", "ASYNCH", Fraction(5))
    init = Configuration.of(P(0, 0), P(1, 0))
    return DmsdBreak(sched, lambda_step(lam), init, dmsd_ratio(lam, x), Fraction(4))


@dataclass(frozen=True)
class MirrorSetup:
    schedule: Schedule
    init: Configuration
    aligned_times: tuple
    mode: str


def _mirror_init(p) -> Configuration:
    p = Q(p)
    return Configuration.of(P(-p, 0), P(p, 0))


def mirror_rsynch(alg: Algorithm, model: Model | str = Model.FSTA, horizon_turns: int = 40,
                  p=1) -> MirrorSetup:
    """Symmetric start ``(-p, 0), (p, 0)`` with equal lights, and an RSYNCH schedule.

    Synchronous rounds keep the configuration point-symmetric because both
    robots see congruent views. If one such round already makes the robots
    meet, the adversary instead alternates from the start, denying the
    one-move rendezvous; otherwise it keeps the synchronous prefix for the
    whole horizon. Aligned times are the ends of rounds (or of alternation pairs).
    """
    model = Model(model)
    init = _mirror_init(p)
    probe = run(alg, model, gen_fsynch(1), init)
    meets = position_at(probe, "A", probe.horizon) == position_at(probe, "B", probe.horizon)
    if meets:
        sched = gen_rsynch(0, horizon_turns, "A")
        aligned = tuple(sched.cycle("B", k).t_end for k in range(1, horizon_turns // 2 + 1))
        return MirrorSetup(sched, init, aligned, "alternation")
    rounds = max(horizon_turns // 2, 1)
    sched = gen_fsynch(rounds)
    aligned = tuple(Fraction(k) + Fraction(3, 4) for k in range(rounds))
    return MirrorSetup(sched, init, aligned, "synchronous")


def mirror_violations(trace: Trace, times: Sequence[Fraction]) -> list:
    """Aligned times where positions are not point-symmetric or lights differ."""
    bad = []
    for t in times:
        a, b = position_at(trace, "A", t), position_at(trace, "B", t)
        if a != -b or color_at(trace, "A", t) != color_at(trace, "B", t):
            bad.append((t, a, b))
    return bad


def move_counts_at(trace: Trace, t: Fraction) -> dict:
    return {r: sum(1 for lo, _ in motion_intervals(trace, r) if lo < t) for r in ROBOTS}


def _cyc(robot: str, idx: int, tl, tc, tb, te) -> CycleSpec:
    return CycleSpec(robot, idx, Q(tl), Q(tc), Q(tb), Q(te))


def rdam_cases() -> dict[str, Schedule]:
    """The four case families for anchor-midpoint, each fair and CM-atomic."""
    simultaneous = [_cyc("A", 1, 0, "1/4", "1/2", "3/4"), _cyc("B", 1, 0, "1/4", "1/2", "3/4"),
                    _cyc("A", 2, 1, "5/4", "3/2", "7/4"), _cyc("B", 2, 2, "9/4", "5/2", "11/4")]
    # B's first Look comes after A has reached m and shows ANCHOR
    late = [_cyc("A", 1, 0, "1/4", "1/2", "3/4"), _cyc("B", 1, 2, "9/4", "5/2", "11/4"),
            _cyc("A", 2, 3, "13/4", "7/2", "15/4"), _cyc("B", 2, 4, "17/4", "9/2", "19/4")]
    # B looked before A computed; anchored A then looks while B still shows INIT
    stale = [_cyc("A", 1, 0, "1/4", "1/2", "3/4"), _cyc("B", 1, "1/8", 3, "13/4", "7/2"),
             _cyc("A", 2, 2, "9/4", "5/2", "11/4"), _cyc("A", 3, 4, "17/4", "9/2", "19/4"),
             _cyc("B", 2, 5, "21/4", "11/2", "23/4")]
    # after a symmetric start both stay ANCHOR under overlapping activations
    steady = list(simultaneous[:2])
    for k in range(2, 6):
        steady.append(_cyc("A", k, k, k + Fraction(1, 2), k + Fraction(3, 4), k + Fraction(7, 8)))
        steady.append(_cyc("B", k, k + Fraction(1, 4), k + Fraction(5, 8), k + Fraction(7, 8), k + Fraction(15, 16)))
    return {name: Schedule(tuple(cs), "CM", "ASYNCH")
            for name, cs in (("simultaneous", simultaneous), ("late", late),
                             ("stale", stale), ("steady", steady))}


__all__ = [
    "DmsdBreak", "MirrorSetup", "dmsd_break", "dmsd_ratio", "mirror_rsynch",
    "mirror_violations", "move_counts_at", "psi", "psi_interleave", "psi_interleave_chain",
    "rdam_cases",
    "squared_ratio_at", "stale_move_end",
]
