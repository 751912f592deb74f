"""Timed activation schedules for two robots.

A schedule lists every LCM cycle with its four instants
``t_look < t_compute < t_begin < t_end``. Synchronous schedulers are laid
out as unit-length round blocks; asynchronous ones are drawn at random on a
dyadic time grid. Atomicity is never assumed: ``validate_atomicity`` checks
the quantified window condition over every pair of cycles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exactgeom import format_q
from .modelcore import ROBOTS, UNIT_FRAME, FrameChoice, peer

ATOMICITY_CLASSES = ("NONE", "LC", "M", "CM", "LCM")
SYNCHRONY_CLASSES = ("FSYNCH", "RSYNCH", "SSYNCH", "ASYNCH")

# Round block layout: Look, Compute, Move-begin, Move-end at these offsets.
_ROUND_OFFSETS = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class Profile:
    """Monotone piecewise-linear progress map from ``[t_begin, t_end]`` onto ``[0, 1]``."""

    knots: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        ks = self.knots
        if len(ks) < 2 or ks[0][1] != 0 or ks[-1][1] != 1:
            raise ScheduleError("progress profile must run from 0 to 1")
        for (t0, x0), (t1, x1) in zip(ks, ks[1:]):
            if not t0 < t1 or x1 < x0:
                raise ScheduleError(f"progress profile not monotone at {t0}..{t1}")

    def at(self, t: Fraction) -> Fraction:
        ks = self.knots
        if t <= ks[0][0]:
            return Fraction(0)
        if t >= ks[-1][0]:
            return Fraction(1)
        for (t0, x0), (t1, x1) in zip(ks, ks[1:]):
            if t0 <= t <= t1:
                return x0 + (x1 - x0) * (t - t0) / (t1 - t0)
        raise AssertionError("unreachable")

    def pieces(self):
        return list(zip(self.knots, self.knots[1:]))


@dataclass(frozen=True)
class CycleSpec:
    robot: str
    index: int
    t_look: Fraction
    t_compute: Fraction
    t_begin: Fraction
    t_end: Fraction
    frame: FrameChoice = UNIT_FRAME
    pins: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        if self.robot not in ROBOTS:
            raise ScheduleError(f"unknown robot {self.robot!r}")
        if not (self.t_look < self.t_compute < self.t_begin < self.t_end):
            raise ScheduleError(f"cycle {self.robot}{self.index}: times not strictly increasing")
        for t, _ in self.pins:
            if not self.t_begin < t < self.t_end:
                raise ScheduleError("progress pins must lie strictly inside the move")
        self.profile  # validates monotonicity

    @property
    def profile(self) -> Profile:
        return Profile(((self.t_begin, Fraction(0)), *self.pins, (self.t_end, Fraction(1))))

    @property
    def times(self):
        return (self.t_look, self.t_compute, self.t_begin, self.t_end)


@dataclass(frozen=True)
class Schedule:
    cycles: tuple[CycleSpec, ...]
    atomicity: str = "NONE"
    synchrony: str = "ASYNCH"
    horizon: Optional[Fraction] = None
    # activation sets, for round-based schedules only
    rounds: Optional[tuple[tuple[str, ...], ...]] = None

    def __post_init__(self):
        if self.atomicity not in ATOMICITY_CLASSES:
            raise ScheduleError(f"unknown atomicity class {self.atomicity!r}")
        if self.synchrony not in SYNCHRONY_CLASSES:
            raise ScheduleError(f"unknown synchrony class {self.synchrony!r}")
        cycles = tuple(sorted(self.cycles, key=lambda c: (c.t_look, c.robot)))
        object.__setattr__(self, "cycles", cycles)
        for r in ROBOTS:
            own = self.of(r)
            for n, c in enumerate(own, start=1):
                if c.index != n:
                    raise ScheduleError(f"robot {r}: cycle indices must be 1..n in time order")
            for a, b in zip(own, own[1:]):
                if not a.t_end < b.t_look:
                    raise ScheduleError(f"robot {r}: cycle {b.index} starts before cycle {a.index} ends")
        if self.horizon is None:
            end = max((c.t_end for c in cycles), default=Fraction(0))
            object.__setattr__(self, "horizon", end + 1)

    def of(self, robot: str) -> list[CycleSpec]:
        return [c for c in self.cycles if c.robot == robot]

    def cycle(self, robot: str, index: int) -> CycleSpec:
        return self.of(robot)[index - 1]


def renumber(cycles: Iterable[CycleSpec]) -> list[CycleSpec]:
    """Re-index cycles 1..n per robot, in time order."""
    out, counters = [], {r: 0 for r in ROBOTS}
    for c in sorted(cycles, key=lambda c: (c.t_look, c.robot)):
        counters[c.robot] += 1
        out.append(CycleSpec(c.robot, counters[c.robot], c.t_look, c.t_compute,
                             c.t_begin, c.t_end, c.frame, c.pins))
    return out


def rounds_schedule(activations: Sequence[Iterable[str]], synchrony: str = "SSYNCH",
                    frames=None) -> Schedule:
    """Lay out synchronous rounds as unit blocks ``[k, k+1)``.

    ``frames`` optionally maps ``(round, robot)`` to a FrameChoice.
    """
    cycles, counters = [], {r: 0 for r in ROBOTS}
    acts = []
    for k, active in enumerate(activations):
        active = tuple(sorted(set(active)))
        if not active:
            raise ScheduleError(f"round {k} activates nobody")
        acts.append(active)
        tl, tc, tb, te = (k + off for off in _ROUND_OFFSETS)
        for r in active:
            counters[r] += 1
            frame = (frames or {}).get((k, r), UNIT_FRAME)
            cycles.append(CycleSpec(r, counters[r], tl, tc, tb, te, frame))
    return Schedule(tuple(cycles), "LCM", synchrony, Fraction(len(acts)), tuple(acts))


def gen_fsynch(rounds: int) -> Schedule:
    if rounds < 1:
        raise ScheduleError("need at least one round")
    return rounds_schedule([ROBOTS] * rounds, "FSYNCH")


def gen_rsynch(prefix_rounds: int, alt_turns: int, first: str = "A") -> Schedule:
    """Fully synchronous prefix, then strict alternation starting with ``first``."""
    if prefix_rounds < 0 or alt_turns < 0 or prefix_rounds + alt_turns == 0:
        raise ScheduleError("RSYNCH needs a non-empty, non-negative round count")
    acts = [ROBOTS] * prefix_rounds
    r = first
    for _ in range(alt_turns):
        acts.append((r,))
        r = peer(r)
    return rounds_schedule(acts, "RSYNCH" if alt_turns else "FSYNCH")


def gen_ssynch(seed, rounds: int, window: int = 3) -> Schedule:
    """Random non-empty activation sets; no robot idles ``window`` rounds in a row."""
    if rounds < 1 or window < 1:
        raise ScheduleError("rounds and window must be positive")
    rng = random.Random(seed)
    idle = {r: 0 for r in ROBOTS}
    acts = []
    for _ in range(rounds):
        active = set(rng.choice([("A",), ("B",), ROBOTS]))
        for r in ROBOTS:
            if idle[r] >= window - 1:
                active.add(r)
        for r in ROBOTS:
            idle[r] = 0 if r in active else idle[r] + 1
        acts.append(tuple(sorted(active)))
    return rounds_schedule(acts, "SSYNCH")


# --- atomicity ------------------------------------------------------------

def _window(c: CycleSpec, cls: str):
    """(lo, hi, lo_closed, hi_closed) of the interval a peer Look must avoid."""
    if cls == "LC":
        return c.t_look, c.t_compute, False, True
    if cls == "M":
        return c.t_begin, c.t_end, True, True
    if cls == "CM":
        return c.t_compute, c.t_end, True, True
    if cls == "LCM":
        return c.t_look, c.t_end, False, True
    raise ScheduleError(f"no window for class {cls!r}")


def _inside(t, win) -> bool:
    lo, hi, lo_c, hi_c = win
    return (lo < t or (lo_c and lo == t)) and (t < hi or (hi_c and t == hi))


def _classes(cls: str):
    if cls == "NONE":
        return ()
    if cls == "LCM":
        return ("LC", "CM", "LCM")
    return (cls,)


def _conflicts(look_cycle: CycleSpec, window_cycle: CycleSpec, cls: str) -> bool:
    return any(_inside(look_cycle.t_look, _window(window_cycle, k)) for k in _classes(cls))


@dataclass
class AtomicityReport:
    ok: bool
    violations: list = field(default_factory=list)


def validate_atomicity(s: Schedule, cls: str) -> AtomicityReport:
    """Check ``t_L(r,i)`` against the class window of every cycle ``(s,j)``.

    Violations are reported as ``(r, i, s, j)``: robot r's i-th Look falls in
    robot s's j-th window.
    """
    if cls not in ATOMICITY_CLASSES:
        raise ScheduleError(f"unknown atomicity class {cls!r}")
    bad = []
    for c1 in s.cycles:
        for c2 in s.cycles:
            if c1 is c2:
                continue
            if _conflicts(c1, c2, cls):
                bad.append((c1.robot, c1.index, c2.robot, c2.index))
    return AtomicityReport(not bad, bad)


def check_fairness(s: Schedule) -> bool:
    return all(s.of(r) for r in ROBOTS) and all(c.t_end <= s.horizon for c in s.cycles)


def gen_asynch(seed, cycles_per_robot: int, atomicity: str = "NONE", *,
               denominator: int = 8, max_gap: int = 12, max_len: int = 6,
               tries: int = 40, random_frames: bool = False) -> Schedule:
    """Random interleaved cycles satisfying ``atomicity`` by rejection.

    Cycles are committed one at a time. A proposed cycle is redrawn while it
    conflicts with the peer's committed cycles; after ``tries`` failures it is
    pushed past every committed peer cycle, which can never conflict.
    """
    if cycles_per_robot < 1:
        raise ScheduleError("need at least one cycle per robot")
    if atomicity not in ATOMICITY_CLASSES:
        raise ScheduleError(f"unknown atomicity class {atomicity!r}")
    rng = random.Random(seed)
    unit = Fraction(1, denominator)
    committed = {r: [] for r in ROBOTS}
    free = {r: Fraction(0) for r in ROBOTS}

    def draw(start):
        tl = start
        tc = tl + unit * rng.randint(1, max_len)
        tb = tc + unit * rng.randint(1, max_len)
        te = tb + unit * rng.randint(1, 2 * max_len)
        return tl, tc, tb, te

    def frame():
        if not random_frames:
            return UNIT_FRAME
        return FrameChoice(Fraction(rng.randint(1, 8), rng.randint(1, 8)))

    while any(len(committed[r]) < cycles_per_robot for r in ROBOTS):
        r = rng.choice([x for x in ROBOTS if len(committed[x]) < cycles_per_robot])
        other = committed[peer(r)]
        idx = len(committed[r]) + 1
        first_start = free[r] if not committed[r] else free[r] + unit
        cand = None
        for _ in range(tries):
            times = draw(first_start + unit * rng.randint(0, max_gap))
            c = CycleSpec(r, idx, *times, frame())
            if not any(_conflicts(c, o, atomicity) or _conflicts(o, c, atomicity) for o in other):
                cand = c
                break
        if cand is None:
            start = max([first_start] + [o.t_end + unit for o in other])
            cand = CycleSpec(r, idx, *draw(start), frame())
        committed[r].append(cand)
        free[r] = cand.t_end
    cycles = tuple(committed["A"] + committed["B"])
    return Schedule(cycles, atomicity, "ASYNCH")


def with_look_at(s: Schedule, robot: str, index: int, t_look: Fraction) -> Schedule:
    """Copy of ``s`` with one Look moved (used to inject violations)."""
    cycles = []
    for c in s.cycles:
        if c.robot == robot and c.index == index:
            c = CycleSpec(c.robot, c.index, t_look, c.t_compute, c.t_begin, c.t_end, c.frame, c.pins)
        cycles.append(c)
    return Schedule(tuple(cycles), s.atomicity, s.synchrony, s.horizon)


# --- serialization ----------------------------------------------------------

def cycle_to_json(c: CycleSpec) -> dict:
    return {
        "robot": c.robot, "i": c.index,
        "t": [format_q(t) for t in c.times],
        "frame": c.frame.to_json(),
        "pins": [[format_q(t), format_q(x)] for t, x in c.pins],
    }


def cycle_from_json(obj) -> CycleSpec:
    tl, tc, tb, te = (Fraction(t) for t in obj["t"])
    pins = tuple((Fraction(t), Fraction(x)) for t, x in obj.get("pins", []))
    return CycleSpec(obj["robot"], obj["i"], tl, tc, tb, te, FrameChoice.from_json(obj.get("frame")), pins)


def schedule_to_json(s: Schedule) -> dict:
    return {
        "atomicity": s.atomicity, "synchrony": s.synchrony, "horizon": format_q(s.horizon),
        "rounds": None if s.rounds is None else [list(r) for r in s.rounds],
        "cycles": [cycle_to_json(c) for c in s.cycles],
    }


def schedule_from_json(obj) -> Schedule:
    rounds = obj.get("rounds")
    return Schedule(
        tuple(cycle_from_json(c) for c in obj["cycles"]),
        obj["atomicity"], obj["synchrony"], Fraction(obj["horizon"]),
        None if rounds is None else tuple(tuple(r) for r in rounds),
    )
