"""Trace predicates for the separator problems.

Every check is exact. Perpetual or eventual properties are judged over the
trace horizon: HOLDS means the property held on everything observable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactgeom import (
    Point, cge_step, in_diagonal_square, is_dyadic, midpoint, rational_sqrt,
    rot90cw, shrink_rot45cw, sqdist,
)
from .engine import (
    Trace, joint_stops, motion_intervals, moves_count, position_at, stop_configurations,
)
from .modelcore import ROBOTS

HOLDS, FAILS, UNDECIDED = "HOLDS", "FAILS", "UNDECIDED-AT-HORIZON"
EXIT_CODES = {HOLDS: 0, FAILS: 1, UNDECIDED: 2}


@dataclass
class PredicateReport:
    predicate: str
    verdict: str
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict == FAILS and not self.witness:
            raise ValueError("a failing report needs a witness")

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_json(self) -> dict:
        return {"predicate": self.predicate, "verdict": self.verdict,
                "witness": {k: _jsonable(v) for k, v in self.witness.items()}}


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Point):
        return v.to_json()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _initial_sqdist(trace: Trace) -> Fraction:
    return sqdist(trace.initial.positions["A"], trace.initial.positions["B"])


def _final(trace: Trace, r: str) -> Point:
    return position_at(trace, r, trace.horizon)


def _still_at_end(trace: Trace, r: str) -> bool:
    """No motion of ``r`` reaches the horizon, so it rests there."""
    ivs = motion_intervals(trace, r)
    return not ivs or ivs[-1][1] < trace.horizon


def dyadic_ratio(sq_ratio: Fraction) -> Optional[Fraction]:
    """The ratio itself if ``sq_ratio`` is the square of a dyadic rational, else None."""
    root = rational_sqrt(sq_ratio)
    if root is None or not is_dyadic(root):
        return None
    return root


def check_dmsd(trace: Trace) -> PredicateReport:
    d0 = _initial_sqdist(trace)
    if d0 == 0:
        raise ValueError("DMSD needs distinct initial positions")
    for iv, a, b in stop_configurations(trace):
        sq = sqdist(a, b) / d0
        if dyadic_ratio(sq) is None:
            root = rational_sqrt(sq)
            return PredicateReport("DMSD", FAILS, {
                "interval": [iv.lo, iv.hi], "time": iv.representative,
                "squared_ratio": sq, "ratio": root if root is not None else "irrational",
                "expected": "ratio in Z[1/2]",
            })
    return PredicateReport("DMSD", HOLDS, {"joint_stops": len(joint_stops(trace))})


def stop_ratios(trace: Trace) -> list[Fraction]:
    """Squared distance ratio at every joint stop, in time order."""
    d0 = _initial_sqdist(trace)
    return [sqdist(a, b) / d0 for _, a, b in stop_configurations(trace)]


def check_rdv1(trace: Trace) -> PredicateReport:
    counts = {r: moves_count(trace, r) for r in ROBOTS}
    fa, fb = _final(trace, "A"), _final(trace, "B")
    met = fa == fb and all(_still_at_end(trace, r) for r in ROBOTS)
    if met and counts["A"] == 1 and counts["B"] == 1:
        return PredicateReport("RDV1", HOLDS, {"meeting_point": fa, "moves": counts})
    return PredicateReport("RDV1", FAILS, {
        "moves": counts, "final": [fa, fb], "expected": "co-located and one move each",
    })


def check_am(trace: Trace) -> PredicateReport:
    counts = {r: moves_count(trace, r) for r in ROBOTS}
    for busy, lazy in (("A", "B"), ("B", "A")):
        if counts[busy] >= 2 and counts[lazy] <= 1 and _still_at_end(trace, lazy):
            return PredicateReport("AM", HOLDS, {"moves": counts, "stopped": lazy})
    return PredicateReport("AM", FAILS, {
        "moves": counts, "expected": "one robot >= 2 moves, the other <= 1 and stopped",
    })


def check_rdam(trace: Trace) -> PredicateReport:
    r1, am = check_rdv1(trace), check_am(trace)
    for rep in (r1, am):
        if rep.holds:
            return PredicateReport("RDAM", HOLDS, {"via": rep.predicate, **rep.witness})
    if UNDECIDED in (r1.verdict, am.verdict):
        return PredicateReport("RDAM", UNDECIDED, {"RDV1": r1.witness, "AM": am.witness})
    return PredicateReport("RDAM", FAILS, {"RDV1": r1.witness, "AM": am.witness})


def check_sm(trace: Trace) -> PredicateReport:
    if trace.initial.positions["A"] == trace.initial.positions["B"]:
        raise ValueError("SM needs distinct initial positions")
    for r in ROBOTS:
        ivs = motion_intervals(trace, r)
        if not ivs:
            return PredicateReport("SM", FAILS, {"robot": r, "moves": 0, "expected": "exactly one move"})
        if len(ivs) > 1:
            return PredicateReport("SM", FAILS, {"robot": r, "moves": len(ivs),
                                                 "second_move_at": ivs[1][0]})
        if _final(trace, r) == trace.initial.positions[r]:
            return PredicateReport("SM", FAILS, {"robot": r, "expected": "end away from start"})
    return PredicateReport("SM", HOLDS, {"moves": {r: 1 for r in ROBOTS}})


def _breakpoints(trace: Trace) -> list[Fraction]:
    ts = {Fraction(0), trace.horizon}
    for r in ROBOTS:
        for m in trace.moves[r]:
            ts.update(t for t, _ in m.profile.knots)
    return sorted(t for t in ts if t <= trace.horizon)


def check_mcv(trace: Trace, eps: Fraction) -> PredicateReport:
    """Distance never increases, and ends within ``eps * D0``.

    Between consecutive breakpoints both robots move linearly, so
    ``d(t) = a(t) - b(t)`` is affine and ``|d|^2`` is a convex quadratic.
    It is non-increasing on a piece iff its derivative is non-positive at
    both ends, i.e. ``d0.w <= 0`` and ``d1.w <= 0`` with ``w = d1 - d0``.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    d0sq = _initial_sqdist(trace)
    ts = _breakpoints(trace)
    diff = [position_at(trace, "A", t) - position_at(trace, "B", t) for t in ts]
    for (t0, t1), (u0, u1) in zip(zip(ts, ts[1:]), zip(diff, diff[1:])):
        w = u1 - u0
        if u0.dot(w) > 0 or u1.dot(w) > 0:
            return PredicateReport("MCv", FAILS, {
                "interval": [t0, t1], "sqdist": [u0.norm2(), u1.norm2()],
                "expected": "non-increasing distance",
            })
    final = diff[-1].norm2()
    bound = eps * eps * d0sq
    if final <= bound:
        return PredicateReport("MCv", HOLDS, {"final_sqdist": final, "bound": bound})
    return PredicateReport("MCv", UNDECIDED, {"final_sqdist": final, "bound": bound})


def _sro_step(prev2, prev, cur):
    """Which of the rotation / shrink conditions links ``prev`` to ``cur``, or None."""
    (a0, b0), (a1, b1) = prev, cur
    m = midpoint(a0, b0)
    kind = None
    if a1 == rot90cw(a0, m) and b1 == rot90cw(b0, m):
        kind = "rotate"
    elif (a1 == a0 and b1 == shrink_rot45cw(b0, a0)) or (b1 == b0 and a1 == shrink_rot45cw(a0, b0)):
        kind = "shrink"
    if kind is None:
        return None, False
    inside = prev2 is None or all(in_diagonal_square(z, *prev2) for z in cur)
    return kind, inside


def sro_configurations(trace: Trace) -> list[tuple[Point, Point]]:
    confs = []
    for _, a, b in stop_configurations(trace):
        if not confs or confs[-1] != (a, b):
            confs.append((a, b))
    return confs


def check_sro(trace: Trace) -> PredicateReport:
    confs = sro_configurations(trace)
    if confs and confs[0][0] == confs[0][1]:
        raise ValueError("SRO needs distinct initial positions")
    kinds = []
    for i in range(1, len(confs)):
        prev2 = confs[i - 2] if i >= 2 else None
        kind, inside = _sro_step(prev2, confs[i - 1], confs[i])
        if kind is None:
            return PredicateReport("SRO", FAILS, {
                "step": i, "from": list(confs[i - 1]), "to": list(confs[i]),
                "expected": "quarter turn about the midpoint or 45-degree shrink about an endpoint",
            })
        if not inside:
            return PredicateReport("SRO", FAILS, {
                "step": i, "to": list(confs[i]), "square_diagonal": list(prev2),
                "expected": "both endpoints inside the square two steps back",
            })
        kinds.append(kind)
    return PredicateReport("SRO", HOLDS, {"steps": len(kinds),
                                          "rotations": kinds.count("rotate"),
                                          "shrinks": kinds.count("shrink")})


def cge_expected(a: Point, b: Point, steps: int) -> list[tuple[Point, Point]]:
    c = midpoint(a, b)
    seq = [(a, b)]
    for _ in range(steps):
        a, b = cge_step(a, c), cge_step(b, c)
        seq.append((a, b))
    return seq


def check_cge(trace: Trace, steps: int) -> PredicateReport:
    if not trace.grid:
        raise ValueError("CGE* needs a grid-granted trace")
    a0, b0 = trace.initial.positions["A"], trace.initial.positions["B"]
    expected = cge_expected(a0, b0, steps)
    seen = []
    for _, a, b in stop_configurations(trace):
        if not seen or seen[-1] != (a, b):
            seen.append((a, b))
    want = []
    for conf in expected:
        if not want or want[-1] != conf:
            want.append(conf)
    for i, conf in enumerate(want):
        if i >= len(seen):
            return PredicateReport("CGE*", UNDECIDED, {"checked_steps": i - 1})
        if seen[i] != conf:
            return PredicateReport("CGE*", FAILS, {"step": i, "observed": list(seen[i]),
                                                   "expected": list(conf)})
    return PredicateReport("CGE*", HOLDS, {"steps": steps, "final": list(want[-1])})


PREDICATES = {
    "DMSD": check_dmsd,
    "RDV1": check_rdv1,
    "AM": check_am,
    "RDAM": check_rdam,
    "SM": check_sm,
    "MCV": check_mcv,
    "SRO": check_sro,
    "CGE": check_cge,
}
