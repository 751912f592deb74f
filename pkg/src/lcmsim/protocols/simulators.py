"""Simulator constructions: each wraps an algorithm into one for a weaker model.

* ``fsynch_collapse``: LUMI under FSYNCH run by FSTA or FCOM with the same palette.
* ``rsynch_handshake``: LUMI under RSYNCH run by FCOM with composite lights
  ``(my, your, phase)``.
* ``sim_a``: CM-atomic FCOM run by plain-ASYNCH FCOM with composite lights
  ``(light, phase, my, your)``.

Composite lights are NamedTuples. An FCOM robot cannot read its own light,
so every write is a ``Patch`` of the fields it means to change.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

from ..exactgeom import ORIGIN, Point, rot90cw_vec
from ..modelcore import KEEP, Algorithm, Decision, Model, Patch, Snapshot

EXC, CPY, RST = "exc", "cpy", "rst"
PHASES = (EXC, CPY, RST)
W, M = "W", "M"
FLAGS = (W, M)

_UNIT_PEER = Point(0, 1)


class SimulatorError(RuntimeError):
    """The simulator observed a state its protocol never produces."""


def _from_unit(p: Point, v: Point) -> Point:
    """Map a point of the frame where the peer sits at (0, 1) into the frame where it sits at ``v``."""
    return rot90cw_vec(v) * p.x + v * p.y


def fsynch_collapse(alg: Algorithm, target: Model | str) -> Algorithm:
    """Feed ``alg`` a unit-distance snapshot and copy the visible light into the hidden slot.

    Under FSYNCH both robots always share one light, so the copy is exact.
    """
    target = Model(target)
    if target not in (Model.FSTA, Model.FCOM):
        raise ValueError("collapse targets FSTA or FCOM")

    def decide(snap: Snapshot) -> Decision:
        v = snap.peer_offset
        seen = snap.own_color if target is Model.FSTA else snap.peer_color
        inner = Snapshot(ORIGIN if v.is_zero() else _UNIT_PEER, seen, seen, snap.grid)
        d = alg.decide(inner)
        dest = d.destination if v.is_zero() else _from_unit(d.destination, v)
        return Decision(dest, d.color)

    return Algorithm(f"collapse[{alg.name},{target.value}]", alg.palette, alg.initial_color,
                     decide, {"inner": alg.name, "target": target.value})


class HandshakeLight(NamedTuple):
    my: object
    your: object
    phase: str


def rsynch_handshake(alg: Algorithm, echo_on_ack: bool = True) -> Algorithm:
    """FCOM simulator of a LUMI algorithm under RSYNCH.

    On peer phase ``exc`` the robot runs ``alg`` with its own light taken from
    the peer's echo and publishes the result; on ``cpy`` it echoes the peer's
    light; on ``rst`` it acknowledges. With ``echo_on_ack`` the acknowledging
    robot also refreshes its echo, which keeps the echo current when an FSYNCH
    prefix ends right after a joint decision.
    """
    def decide(snap: Snapshot) -> Decision:
        pm, py, pp = snap.peer_color
        if pp == EXC:
            d = alg.decide(Snapshot(snap.peer_offset, py, pm, snap.grid))
            fields = {"phase": CPY}
            if d.color is not KEEP:
                fields["my"] = d.color
            return Decision(d.destination, Patch.of(**fields))
        if pp == CPY:
            return Decision(ORIGIN, Patch.of(your=pm, phase=RST))
        if echo_on_ack:
            return Decision(ORIGIN, Patch.of(your=pm, phase=EXC))
        return Decision(ORIGIN, Patch.of(phase=EXC))

    palette = tuple(HandshakeLight(m, y, p)
                    for m, y, p in itertools.product(alg.palette, alg.palette, PHASES))
    init = HandshakeLight(alg.initial_color, alg.initial_color, CPY)
    return Algorithm(f"handshake[{alg.name}]", palette, init, decide,
                     {"inner": alg.name, "k": alg.k, "echo_on_ack": echo_on_ack})


class SimLight(NamedTuple):
    light: object
    phase: str
    my: str
    your: str

    @property
    def pattern(self) -> tuple[str, str, str]:
        return (self.phase, self.my, self.your)


def sim_a(alg: Algorithm) -> Algorithm:
    """FCOM simulator of a CM-atomic FCOM algorithm under plain ASYNCH.

    The case table keys on the peer's phase, then on the peer's
    ``(your, my)`` flags. The destination defaults to the current position.
    """
    def decide(snap: Snapshot) -> Decision:
        pl, pp, pmy, pyour = snap.peer_color
        flags = (pyour, pmy)
        if pp == EXC:
            if flags in ((W, W), (W, M)):
                d = alg.decide(Snapshot(snap.peer_offset, None, pl, snap.grid))
                fields = {"phase": CPY, "my": M, "your": pmy}
                if d.color is not KEEP:
                    fields["light"] = d.color
                return Decision(d.destination, Patch.of(**fields))
            if flags == (M, W):
                return Decision(ORIGIN, Patch.of(phase=EXC, your=pmy))
            return Decision(ORIGIN, Patch.of(phase=CPY))
        if pp == CPY:
            if flags == (M, W):
                return Decision(ORIGIN, Patch.of(phase=EXC, your=pmy))
            if flags == (W, M):
                return Decision(ORIGIN, Patch.of(phase=CPY, your=pmy))
            if flags == (M, M):
                return Decision(ORIGIN, Patch.of(phase=RST, your=W, my=W))
            raise SimulatorError("peer shows (cpy, W, W), which the protocol never produces")
        return Decision(ORIGIN, Patch.of(phase=EXC, your=W, my=W))

    palette = tuple(SimLight(c, p, m, y)
                    for c, p, m, y in itertools.product(alg.palette, PHASES, FLAGS, FLAGS))
    init = SimLight(alg.initial_color, EXC, W, W)
    return Algorithm(f"sim_a[{alg.name}]", palette, init, decide, {"inner": alg.name, "k": alg.k})


def calls_inner(sim: Algorithm, snap: Snapshot) -> bool:
    """Would this Look make the simulator call its inner algorithm?"""
    if sim.name.startswith("handshake["):
        return snap.peer_color.phase == EXC
    if sim.name.startswith("sim_a["):
        c = snap.peer_color
        return c.phase == EXC and (c.your, c.my) in ((W, W), (W, M))
    raise ValueError(f"{sim.name} is not a composite-light simulator")


def inner_snapshot(sim: Algorithm, snap: Snapshot) -> Snapshot:
    """The snapshot a simulator hands its inner algorithm on a calling Look."""
    c = snap.peer_color
    if sim.name.startswith("handshake["):
        return Snapshot(snap.peer_offset, c.your, c.my, snap.grid)
    return Snapshot(snap.peer_offset, None, c.light, snap.grid)
