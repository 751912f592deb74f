"""Robot models, snapshots, observation frames and the algorithm interface.

A robot never sees global coordinates. At each Look the adversary picks a
``FrameChoice``; the observer sits at the origin and its peer lies on the
positive local y-axis, at distance fixed by the frame's scale. The local
x-axis is the peer direction turned 90 degrees clockwise, so chirality is
the same for every robot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Mapping, Optional

from .exactgeom import ORIGIN, Point, Q, format_q, rational_sqrt, rot90cw_vec

ROBOTS = ("A", "B")


def peer(robot: str) -> str:
    if robot == "A":
        return "B"
    if robot == "B":
        return "A"
    raise ValueError(f"unknown robot {robot!r}")


class Model(str, enum.Enum):
    OBLOT = "OBLOT"
    FSTA = "FSTA"
    FCOM = "FCOM"
    LUMI = "LUMI"

    @property
    def sees_own(self) -> bool:
        return self in (Model.FSTA, Model.LUMI)

    @property
    def sees_peer(self) -> bool:
        return self in (Model.FCOM, Model.LUMI)


@dataclass(frozen=True)
class FrameChoice:
    """Adversary's choice of local frame for one Look.

    ``scale=None`` is the unit frame: the peer is always reported at (0, 1).
    ``kind="global"`` is the identity frame, used only when a scenario grants
    the shared grid.
    """

    scale: Optional[Fraction] = None
    kind: str = "canonical"

    def __post_init__(self):
        if self.kind not in ("canonical", "global"):
            raise ValueError(f"unknown frame kind {self.kind!r}")
        if self.scale is not None:
            object.__setattr__(self, "scale", Q(self.scale))
            if self.scale <= 0:
                raise ValueError("frame scale must be positive")

    def to_json(self):
        return {"kind": self.kind, "scale": None if self.scale is None else format_q(self.scale)}

    @classmethod
    def from_json(cls, obj) -> FrameChoice:
        if obj is None:
            return UNIT_FRAME
        scale = obj.get("scale")
        return cls(None if scale is None else Fraction(scale), obj.get("kind", "canonical"))


UNIT_FRAME = FrameChoice()
GLOBAL_FRAME = FrameChoice(kind="global")


@dataclass(frozen=True)
class Snapshot:
    peer_offset: Point
    own_color: Any = None
    peer_color: Any = None
    grid: Optional[Point] = None


class _Keep:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "KEEP"


#: Leave the light as it is. The robot need not be able to read it.
KEEP = _Keep()


@dataclass(frozen=True)
class Patch:
    """Write some fields of a composite light and leave the others untouched."""

    fields: tuple[tuple[str, Any], ...]

    @classmethod
    def of(cls, **kw) -> Patch:
        return cls(tuple(sorted(kw.items())))

    def apply(self, color):
        return color._replace(**dict(self.fields))


@dataclass(frozen=True)
class Decision:
    destination: Point
    color: Any = KEEP


def apply_color(old, update):
    if update is KEEP:
        return old
    if isinstance(update, Patch):
        return update.apply(old)
    return update


@dataclass(frozen=True)
class Algorithm:
    """A deterministic decision rule shared by both robots."""

    name: str
    palette: tuple
    initial_color: Hashable
    decide: Callable[[Snapshot], Decision] = field(compare=False)
    params: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.initial_color not in self.palette:
            raise ValueError(f"initial color {self.initial_color!r} not in palette")

    @property
    def k(self) -> int:
        return len(self.palette)


def canonical_observation(offset: Point, frame: FrameChoice = UNIT_FRAME) -> Point:
    """Peer position in the observer's canonical local frame."""
    if frame.kind == "global":
        return offset
    if offset.is_zero():
        return ORIGIN
    if frame.scale is None:
        return Point(Fraction(0), Fraction(1))
    d = rational_sqrt(offset.norm2())
    if d is None:
        # |offset| irrational: the scale absorbs it and the peer reads as (0, 1)
        return Point(Fraction(0), Fraction(1))
    return Point(Fraction(0), frame.scale * d)


def build_snapshot(positions: Mapping[str, Point], colors: Mapping[str, Any],
                   observer: str, model: Model, frame: FrameChoice = UNIT_FRAME,
                   grid: bool = False) -> Snapshot:
    own = positions[observer]
    other = peer(observer)
    return Snapshot(
        peer_offset=canonical_observation(positions[other] - own, frame),
        own_color=colors[observer] if model.sees_own else None,
        peer_color=colors[other] if model.sees_peer else None,
        grid=own if grid else None,
    )


def local_to_global(destination: Point, frame: FrameChoice, own: Point,
                    peer_offset_global: Point) -> Point:
    """Map a local destination back to the plane.

    Local ``(alpha, beta)`` means ``own + (alpha * rot90cw(v) + beta * v) / s``
    where ``v`` is the true peer offset and ``(0, s)`` is where the peer was
    reported. Every term is rational.
    """
    if frame.kind == "global":
        return own + destination
    if peer_offset_global.is_zero():
        # no peer direction to anchor on; the adversary uses axis-aligned axes
        return own + destination / (frame.scale or 1)
    s = canonical_observation(peer_offset_global, frame).y
    v = peer_offset_global
    return own + (rot90cw_vec(v) * destination.x + v * destination.y) / s
