"""Line-delimited JSON traces.

Line one is a header (scenario, model, schedule, initial configuration);
every further line is one event. Rationals are "num/den" strings and every
line is dumped canonically, so reading and re-writing a trace is
byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional

from .engine import (
    COMPUTE, LOOK, MOVE_BEGIN, MOVE_END, Configuration, Move, Trace, TraceEvent,
)
from .exactgeom import Point, format_q, parse_q
from .modelcore import KEEP, ROBOTS, Decision, Model, Patch, Snapshot
from .protocols.simulators import HandshakeLight, SimLight
from .sched import schedule_from_json, schedule_to_json

FORMAT = "lcmsim-trace/1"

_NAMED = {"HandshakeLight": HandshakeLight, "SimLight": SimLight}


class TraceFormatError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def encode_color(c) -> Any:
    if c is None or isinstance(c, (str, int)) and not isinstance(c, bool):
        return c
    name = type(c).__name__
    if name in _NAMED:
        return {"type": name, "fields": [encode_color(x) for x in c]}
    raise TraceFormatError(f"cannot encode color {c!r}")


def decode_color(obj) -> Any:
    if obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, dict) and obj.get("type") in _NAMED:
        return _NAMED[obj["type"]](*[decode_color(x) for x in obj["fields"]])
    raise TraceFormatError(f"cannot decode color {obj!r}")


def _pt(p: Optional[Point]):
    return None if p is None else p.to_json()


def _unpt(obj) -> Optional[Point]:
    return None if obj is None else Point.from_json(obj)


def _encode_update(u) -> dict:
    if u is KEEP:
        return {"keep": True}
    if isinstance(u, Patch):
        return {"patch": {k: encode_color(v) for k, v in u.fields}}
    return {"set": encode_color(u)}


def _decode_update(obj):
    if obj.get("keep"):
        return KEEP
    if "patch" in obj:
        return Patch.of(**{k: decode_color(v) for k, v in obj["patch"].items()})
    return decode_color(obj["set"])


def event_to_json(e: TraceEvent) -> dict:
    out = {"t": format_q(e.time), "robot": e.robot, "kind": e.kind, "cycle": e.cycle}
    if e.kind == LOOK:
        s = e.snapshot
        out["snapshot"] = {"peer_offset": _pt(s.peer_offset), "own_color": encode_color(s.own_color),
                           "peer_color": encode_color(s.peer_color), "grid": _pt(s.grid)}
    elif e.kind == COMPUTE:
        out["decision"] = {"destination": _pt(e.decision.destination),
                           "color": _encode_update(e.decision.color)}
        out["color"] = encode_color(e.color)
        out["target"] = _pt(e.target)
    elif e.kind == MOVE_BEGIN:
        out["from"] = _pt(e.position)
        out["to"] = _pt(e.target)
    else:
        out["at"] = _pt(e.position)
    return out


def event_from_json(obj) -> TraceEvent:
    t, r, kind, i = parse_q(obj["t"]), obj["robot"], obj["kind"], obj["cycle"]
    if kind == LOOK:
        s = obj["snapshot"]
        snap = Snapshot(_unpt(s["peer_offset"]), decode_color(s["own_color"]),
                        decode_color(s["peer_color"]), _unpt(s["grid"]))
        return TraceEvent(t, r, kind, i, snapshot=snap)
    if kind == COMPUTE:
        d = obj["decision"]
        dec = Decision(_unpt(d["destination"]), _decode_update(d["color"]))
        return TraceEvent(t, r, kind, i, decision=dec, color=decode_color(obj["color"]),
                          target=_unpt(obj["target"]))
    if kind == MOVE_BEGIN:
        return TraceEvent(t, r, kind, i, position=_unpt(obj["from"]), target=_unpt(obj["to"]))
    if kind == MOVE_END:
        return TraceEvent(t, r, kind, i, position=_unpt(obj["at"]))
    raise TraceFormatError(f"unknown event kind {kind!r}")


def header_to_json(trace: Trace, scenario: Optional[dict] = None) -> dict:
    return {
        "kind": "header", "format": FORMAT,
        "scenario": scenario or {},
        "algorithm": trace.algorithm, "model": trace.model.value, "grid": trace.grid,
        "initial": {
            "positions": {r: _pt(trace.initial.positions[r]) for r in ROBOTS},
            "colors": {r: encode_color(trace.initial.colors[r]) for r in ROBOTS},
        },
        "schedule": schedule_to_json(trace.schedule),
        "horizon": format_q(trace.horizon),
    }


def trace_lines(trace: Trace, scenario: Optional[dict] = None) -> list[str]:
    return [dumps(header_to_json(trace, scenario))] + [dumps(event_to_json(e)) for e in trace.events]


def write_trace(trace: Trace, path, scenario: Optional[dict] = None) -> None:
    Path(path).write_text("\n".join(trace_lines(trace, scenario)) + "\n", encoding="ascii")


def parse_trace(lines: Iterable[str]) -> tuple[Trace, dict]:
    """Rebuild a Trace (moves and color history included) from its lines."""
    it = (ln for ln in lines if ln.strip())
    try:
        header = json.loads(next(it))
    except StopIteration:
        raise TraceFormatError("empty trace") from None
    if header.get("kind") != "header" or header.get("format") != FORMAT:
        raise TraceFormatError("missing or unknown trace header")
    sched = schedule_from_json(header["schedule"])
    ini = header["initial"]
    init = Configuration({r: _unpt(ini["positions"][r]) for r in ROBOTS},
                         {r: decode_color(ini["colors"][r]) for r in ROBOTS})
    events = [event_from_json(json.loads(ln)) for ln in it]
    moves = {r: [] for r in ROBOTS}
    changes = {r: [(Fraction(0), init.colors[r])] for r in ROBOTS}
    for e in events:
        if e.kind == MOVE_BEGIN:
            c = sched.cycle(e.robot, e.cycle)
            moves[e.robot].append(Move(c.t_begin, c.t_end, e.position, e.target, c.profile))
        elif e.kind == COMPUTE and e.color != changes[e.robot][-1][1]:
            changes[e.robot].append((e.time, e.color))
    trace = Trace(header["algorithm"], Model(header["model"]), sched, init, events,
                  header["grid"], moves, changes)
    return trace, header


def read_trace(path) -> tuple[Trace, dict]:
    with open(path, encoding="ascii") as fh:
        return parse_trace(fh)
