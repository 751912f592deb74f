"""Refinement checks: map a simulator trace back onto its inner algorithm.

A projection keeps only the simulator cycles that called the inner
algorithm, with their original times. The projected schedule is replayed
directly with the inner algorithm, and the two executions must agree on every
abstract Look, decision, target and light. Both run on one clock, so epoch
overhead compares boundaries directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..engine import (
    COMPUTE, LOOK, Configuration, EngineError, Trace, cycle_records, epochs, position_at, run,
)
from ..modelcore import ROBOTS, Algorithm, Model
from ..sched import CycleSpec, Schedule, renumber, validate_atomicity
from .simulators import CPY, EXC, M, RST, W, SimulatorError, calls_inner, inner_snapshot


@dataclass(frozen=True)
class AbstractStep:
    robot: str
    sim_cycle: int
    t_look: Fraction
    snapshot: object
    target: object
    light: object


@dataclass
class Projection:
    steps: list
    schedule: Optional[Schedule]
    problems: list = field(default_factory=list)


@dataclass
class RefinementReport:
    simulator: str
    inner: str
    ok: bool
    problems: list
    abstract_steps: int
    overhead: Optional[Fraction]
    colors: int
    patterns: int
    atomicity: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "simulator": self.simulator, "inner": self.inner, "ok": self.ok,
            "abstract_steps": self.abstract_steps,
            "overhead": None if self.overhead is None else str(self.overhead),
            "colors": self.colors, "patterns": self.patterns,
            "atomicity": self.atomicity, "problems": self.problems[:5],
        }


_HANDSHAKE_NEXT = {EXC: CPY, CPY: RST, RST: EXC}


def _inner_light(sim: Algorithm, color):
    return color.my if sim.name.startswith("handshake[") else color.light


def project(trace: Trace, sim: Algorithm) -> Projection:
    """Abstract steps of ``trace`` and the schedule of the calling cycles."""
    records = cycle_records(trace)
    steps, cycles, problems = [], [], []
    for (r, i), rec in sorted(records.items(), key=lambda kv: (kv[1][LOOK].time, kv[0])):
        look, comp = rec[LOOK], rec[COMPUTE]
        if not calls_inner(sim, look.snapshot):
            continue
        steps.append(AbstractStep(r, i, look.time, inner_snapshot(sim, look.snapshot),
                                  comp.target, _inner_light(sim, comp.color)))
        cycles.append(trace.schedule.cycle(r, i))
    if not steps:
        return Projection([], None, ["no abstract step in trace"])
    sched = Schedule(tuple(renumber(cycles)), "NONE", "ASYNCH", trace.horizon)
    return Projection(steps, sched, problems)


def _discipline_handshake(trace: Trace, sim: Algorithm) -> list:
    bad = []
    for (r, i), rec in cycle_records(trace).items():
        look, comp = rec[LOOK], rec[COMPUTE]
        pp = look.snapshot.peer_color.phase
        if comp.color.phase != _HANDSHAKE_NEXT[pp]:
            bad.append(f"{r}{i}: peer phase {pp} led to {comp.color.phase}")
        if pp != EXC:
            here = position_at(trace, r, look.time)
            if comp.target != here:
                bad.append(f"{r}{i}: ack turn moved")
            before = _color_before(trace, r, comp.time)
            if before.my != comp.color.my:
                bad.append(f"{r}{i}: ack turn changed the published light")
    return bad


def _color_before(trace: Trace, r: str, t: Fraction):
    prev = trace.color_changes[r][0][1]
    for when, c in trace.color_changes[r]:
        if when >= t:
            break
        prev = c
    return prev


def _discipline_sim_a(trace: Trace, sim: Algorithm) -> list:
    bad = []
    for (r, i), rec in cycle_records(trace).items():
        look, comp = rec[LOOK], rec[COMPUTE]
        before, after = _color_before(trace, r, comp.time), comp.color
        called = calls_inner(sim, look.snapshot)
        if before.my == W and after.my == M and not called:
            bad.append(f"{r}{i}: flag raised without a call")
        if before.my == M and after.my == W and not (after.phase == RST
                                                     or look.snapshot.peer_color.phase == RST):
            bad.append(f"{r}{i}: flag lowered outside reset")
        if not called:
            if comp.target != position_at(trace, r, look.time):
                bad.append(f"{r}{i}: moved without a call")
            if after.light != before.light:
                bad.append(f"{r}{i}: light changed without a call")
    return bad


def rsynch_pattern(schedule: Schedule) -> Optional[str]:
    """None if activation sets are a run of full rounds followed by strict alternation."""
    groups: list[list[str]] = []
    last_t = None
    for c in schedule.cycles:
        if c.t_look == last_t:
            groups[-1].append(c.robot)
        else:
            groups.append([c.robot])
            last_t = c.t_look
    sets = [frozenset(g) for g in groups]
    k = 0
    while k < len(sets) and len(sets[k]) == 2:
        k += 1
    for a, b in zip(sets[k:], sets[k + 1:]):
        if len(b) == 2 or a & b:
            return f"activation sets {sorted(a)} then {sorted(b)} break alternation"
    return None


def _replay(inner: Algorithm, model: Model, proj: Projection, init: Configuration) -> Trace:
    return run(inner, model, proj.schedule, Configuration(dict(init.positions), {}), check_fair=False)


def _compare(proj: Projection, replay: Trace, sim_trace: Trace) -> list:
    bad = []
    recs = cycle_records(replay)
    per_robot = {r: 0 for r in ROBOTS}
    for st in proj.steps:
        per_robot[st.robot] += 1
        rec = recs[(st.robot, per_robot[st.robot])]
        snap, comp = rec[LOOK].snapshot, rec[COMPUTE]
        if snap != st.snapshot:
            bad.append(f"{st.robot}@{st.t_look}: simulated snapshot {st.snapshot} != direct {snap}")
        if comp.target != st.target:
            bad.append(f"{st.robot}@{st.t_look}: target {st.target} != direct {comp.target}")
        if comp.color != st.light:
            bad.append(f"{st.robot}@{st.t_look}: light {st.light} != direct {comp.color}")
    for r in ROBOTS:
        if position_at(replay, r, replay.horizon) != position_at(sim_trace, r, sim_trace.horizon):
            bad.append(f"{r}: final positions differ")
    return bad


def epoch_overhead(sim_trace: Trace, abstract: Trace, t0: Fraction) -> Optional[Fraction]:
    """Largest ratio of simulator epochs to abstract epochs, both counted from ``t0``."""
    abs_bounds = epochs(abstract, t0)
    sim_bounds = epochs(sim_trace, t0)
    worst = None
    for m, tm in enumerate(abs_bounds, start=1):
        n = sum(1 for t in sim_bounds if t <= tm)
        ratio = Fraction(n, m)
        worst = ratio if worst is None else max(worst, ratio)
    return worst


def distinct_colors(trace: Trace) -> set:
    return {c for r in ROBOTS for _, c in trace.color_changes[r]}


def check_refinement(sim: Algorithm, inner: Algorithm, sim_trace: Trace,
                     lcm_expected: bool = False) -> RefinementReport:
    handshake = sim.name.startswith("handshake[")
    factor = 3 if handshake else 4
    colors = distinct_colors(sim_trace)
    patterns = len({(c.phase, c.my, c.your) for c in colors}) if not handshake else len(
        {c.phase for c in colors})
    color_bound = 3 * inner.k ** 2 if handshake else 7 * inner.k
    problems = []
    if handshake:
        problems += _discipline_handshake(sim_trace, sim)
    else:
        problems += _discipline_sim_a(sim_trace, sim)
    if len(colors) > color_bound:
        problems.append(f"{len(colors)} composite colors exceed {color_bound}")
    if not handshake and patterns > 7:
        problems.append(f"{patterns} control patterns exceed 7")

    proj = project(sim_trace, sim)
    problems += proj.problems
    overhead, atom = None, {}
    if proj.schedule is not None:
        if handshake:
            msg = rsynch_pattern(proj.schedule)
            if msg:
                problems.append(msg)
        else:
            classes = ("CM", "LCM") if lcm_expected else ("CM",)
            for cls in classes:
                rep = validate_atomicity(proj.schedule, cls)
                atom[cls] = rep.ok
                if not rep.ok:
                    problems.append(f"projected schedule not {cls}-atomic: {rep.violations[:3]}")
        model = Model.LUMI if handshake else Model.FCOM
        replay = _replay(inner, model, proj, sim_trace.initial)
        problems += _compare(proj, replay, sim_trace)
        overhead = epoch_overhead(sim_trace, replay, proj.steps[0].t_look)
        if overhead is not None and overhead > factor:
            problems.append(f"epoch overhead {overhead} exceeds {factor}")
    return RefinementReport(sim.name, inner.name, not problems, problems, len(proj.steps),
                            overhead, len(colors), patterns, atom)


def run_checked(sim: Algorithm, inner: Algorithm, sched: Schedule, init: Configuration,
                lcm_expected: bool = False) -> RefinementReport:
    """Run the simulator and check refinement; protocol errors become failed reports."""
    try:
        trace = run(sim, Model.FCOM, sched, init)
    except (SimulatorError, EngineError) as exc:
        return RefinementReport(sim.name, inner.name, False, [f"simulator error: {exc}"],
                                0, None, 0, 0)
    return check_refinement(sim, inner, trace, lcm_expected)


@dataclass
class CollapseReport:
    inner: str
    target: str
    ok: bool
    problems: list
    epochs: tuple


def compare_collapse(original: Trace, collapsed: Trace) -> list:
    """Event-for-event agreement of positions and colors."""
    bad = []
    for r in ROBOTS:
        a = [(m.t_begin, m.t_end, m.p_begin, m.p_end) for m in original.moves[r]]
        b = [(m.t_begin, m.t_end, m.p_begin, m.p_end) for m in collapsed.moves[r]]
        if a != b:
            bad.append(f"{r}: moves differ")
        if original.color_changes[r] != collapsed.color_changes[r]:
            bad.append(f"{r}: color histories differ")
    ca = [(e.time, e.robot, e.color) for e in original.events if e.kind == COMPUTE]
    cb = [(e.time, e.robot, e.color) for e in collapsed.events if e.kind == COMPUTE]
    if ca != cb:
        bad.append("compute-time colors differ")
    return bad
