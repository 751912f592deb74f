"""Discrete-event execution of LCM cycles and trace-derived quantities.

``run`` replays a schedule event by event. Positions are never stepped:
each robot's trajectory is the list of its rigid moves, and ``position_at``
evaluates it exactly at any rational instant.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .exactgeom import Point, interpolate
from .modelcore import (
    GLOBAL_FRAME, ROBOTS, Algorithm, Decision, Model, Snapshot,
    apply_color, build_snapshot, local_to_global, peer,
)
from .sched import CycleSpec, Profile, Schedule, check_fairness


class EngineError(RuntimeError):
    pass


LOOK, COMPUTE, MOVE_BEGIN, MOVE_END = "look", "compute", "move_begin", "move_end"

# At equal times a Compute lands before any Look, so a Look at t sees colors set at t.
_KIND_ORDER = {COMPUTE: 0, LOOK: 1, MOVE_BEGIN: 2, MOVE_END: 3}


@dataclass(frozen=True)
class Configuration:
    positions: dict
    colors: dict

    @classmethod
    def of(cls, a: Point, b: Point, color_a=None, color_b=None) -> Configuration:
        return cls({"A": a, "B": b}, {"A": color_a, "B": color_b})


@dataclass(frozen=True)
class Move:
    t_begin: Fraction
    t_end: Fraction
    p_begin: Point
    p_end: Point
    profile: Profile

    def at(self, t: Fraction) -> Point:
        return interpolate(self.p_begin, self.p_end, self.profile.at(t))

    def moving_pieces(self):
        """Closed time intervals on which the robot actually changes position."""
        if self.p_begin == self.p_end:
            return []
        return [(t0, t1) for (t0, x0), (t1, x1) in self.profile.pieces() if x1 > x0]


@dataclass(frozen=True)
class TraceEvent:
    time: Fraction
    robot: str
    kind: str
    cycle: int
    snapshot: Optional[Snapshot] = None
    decision: Optional[Decision] = None
    color: Any = None
    target: Optional[Point] = None
    position: Optional[Point] = None


@dataclass
class Trace:
    algorithm: str
    model: Model
    schedule: Schedule
    initial: Configuration
    events: list
    grid: bool = False
    moves: dict = field(default_factory=dict)
    color_changes: dict = field(default_factory=dict)

    @property
    def horizon(self) -> Fraction:
        return self.schedule.horizon

    def of_kind(self, kind: str, robot: Optional[str] = None):
        return [e for e in self.events if e.kind == kind and (robot is None or e.robot == robot)]


def _position(initial: Point, moves: list, t: Fraction) -> Point:
    pos = initial
    for m in moves:
        if t < m.t_begin:
            break
        pos = m.at(t) if t <= m.t_end else m.p_end
    return pos


def run(alg: Algorithm, model: Model | str, sched: Schedule, init: Configuration,
        grid: bool = False, check_fair: bool = True) -> Trace:
    model = Model(model)
    if check_fair and not check_fairness(sched):
        raise EngineError("schedule is not fair at its horizon")
    colors = {r: (init.colors.get(r) if init.colors.get(r) is not None else alg.initial_color)
              for r in ROBOTS}
    for r, c in colors.items():
        if c not in alg.palette:
            raise EngineError(f"initial color {c!r} of {r} not in palette")
    positions0 = {r: init.positions[r] for r in ROBOTS}
    colors0 = dict(colors)
    moves = {r: [] for r in ROBOTS}
    changes = {r: [(Fraction(0), colors[r])] for r in ROBOTS}

    agenda = []
    for c in sched.cycles:
        for kind, t in zip((LOOK, COMPUTE, MOVE_BEGIN, MOVE_END), c.times):
            agenda.append((t, _KIND_ORDER[kind], c.robot, c.index, kind, c))
    agenda.sort(key=lambda e: e[:4])

    pending: dict[tuple, Any] = {}
    events = []

    def pos(r, t):
        return _position(positions0[r], moves[r], t)

    for t, _, r, i, kind, cyc in agenda:
        cyc: CycleSpec
        if kind == LOOK:
            here = {x: pos(x, t) for x in ROBOTS}
            frame = GLOBAL_FRAME if grid else cyc.frame
            snap = build_snapshot(here, colors, r, model, frame, grid)
            pending[(r, i)] = (snap, here, frame)
            events.append(TraceEvent(t, r, LOOK, i, snapshot=snap))
        elif kind == COMPUTE:
            snap, here, frame = pending.pop((r, i))
            decision = alg.decide(snap)
            if not isinstance(decision, Decision):
                raise EngineError(f"{alg.name} returned {decision!r}, not a Decision")
            new = apply_color(colors[r], decision.color)
            if new not in alg.palette:
                raise EngineError(f"{alg.name} chose color {new!r} outside its palette")
            colors[r] = new
            if new != changes[r][-1][1]:
                changes[r].append((t, new))
            target = local_to_global(decision.destination, frame, here[r], here[peer(r)] - here[r])
            pending[(r, i)] = target
            events.append(TraceEvent(t, r, COMPUTE, i, decision=decision, color=new, target=target))
        elif kind == MOVE_BEGIN:
            target = pending.pop((r, i))
            start = pos(r, t)
            moves[r].append(Move(cyc.t_begin, cyc.t_end, start, target, cyc.profile))
            events.append(TraceEvent(t, r, MOVE_BEGIN, i, position=start, target=target))
        else:
            events.append(TraceEvent(t, r, MOVE_END, i, position=moves[r][-1].p_end))

    return Trace(alg.name, model, sched, Configuration(positions0, colors0), events, grid, moves, changes)


# --- derived quantities ---------------------------------------------------

def position_at(trace: Trace, r: str, t: Fraction) -> Point:
    t = Fraction(t)
    if not 0 <= t <= trace.horizon:
        raise EngineError(f"time {t} outside [0, {trace.horizon}]")
    return _position(trace.initial.positions[r], trace.moves[r], t)


def color_at(trace: Trace, r: str, t: Fraction):
    changes = trace.color_changes[r]
    k = bisect_right([c[0] for c in changes], Fraction(t))
    return changes[max(k - 1, 0)][1]


def motion_intervals(trace: Trace, r: str) -> list[tuple[Fraction, Fraction]]:
    """Maximal closed intervals whose interior is the robot's moving-time set."""
    merged: list[list[Fraction]] = []
    for m in trace.moves[r]:
        for t0, t1 in m.moving_pieces():
            if merged and merged[-1][1] == t0:
                merged[-1][1] = t1
            else:
                merged.append([t0, t1])
    return [(a, b) for a, b in merged]


def moves_count(trace: Trace, r: str) -> int:
    return len(motion_intervals(trace, r))


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool

    @property
    def representative(self) -> Fraction:
        if self.lo == self.hi:
            return self.lo
        return (self.lo + self.hi) / 2

    def __contains__(self, t) -> bool:
        return ((self.lo < t or (self.lo_closed and t == self.lo))
                and (t < self.hi or (self.hi_closed and t == self.hi)))


def joint_stops(trace: Trace) -> list[Interval]:
    """Maximal intervals of ``[0, H]`` where both robots satisfy the two-sided Stop predicate.

    Motion boundaries are excluded: a robot about to start (or just finished)
    moving has no constant two-sided neighbourhood there.
    """
    busy = sorted(iv for r in ROBOTS for iv in motion_intervals(trace, r))
    merged: list[list[Fraction]] = []
    for a, b in busy:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    out, cursor, closed = [], Fraction(0), True
    for a, b in merged:
        if cursor < a:
            out.append(Interval(cursor, a, closed, False))
        cursor, closed = b, False
    if cursor < trace.horizon:
        out.append(Interval(cursor, trace.horizon, closed, True))
    elif cursor == trace.horizon and closed:
        out.append(Interval(cursor, cursor, True, True))
    return out


def move_end_times(trace: Trace, r: str) -> list[Fraction]:
    return [e.time for e in trace.events if e.kind == MOVE_END and e.robot == r]


def epochs(trace: Trace, t0: Fraction = Fraction(0)) -> list[Fraction]:
    """Epoch boundaries ``T_1 < T_2 < ...`` after ``t0`` from Move-end counters."""
    ends = {r: move_end_times(trace, r) for r in ROBOTS}
    bounds, cur = [], Fraction(t0)
    while True:
        nxt = []
        for r in ROBOTS:
            mu = bisect_right(ends[r], cur)
            if mu >= len(ends[r]):
                return bounds
            nxt.append(ends[r][mu])
        cur = max(nxt)
        bounds.append(cur)


def stop_configurations(trace: Trace) -> list[tuple[Interval, Point, Point]]:
    return [(iv, position_at(trace, "A", iv.representative), position_at(trace, "B", iv.representative))
            for iv in joint_stops(trace)]


def cycle_records(trace: Trace) -> dict:
    """Group events per ``(robot, cycle)`` for projection and inspection."""
    out: dict[tuple, dict] = {}
    for e in trace.events:
        out.setdefault((e.robot, e.cycle), {})[e.kind] = e
    return out
