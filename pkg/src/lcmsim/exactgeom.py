"""Exact rational scalars and planar points.

Everything in the engine (positions, times, progress fractions) lives in
``fractions.Fraction``; no float ever enters a verification path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


def Q(value: RationalLike) -> Fraction:
    """Coerce to an exact rational. Floats are refused on purpose."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    return Fraction(value)


def format_q(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_q(text: str) -> Fraction:
    return Fraction(text)


def floor_q(q: Fraction) -> int:
    # math.floor on a Fraction rounds toward -inf
    return math.floor(q)


def is_dyadic(q: Fraction) -> bool:
    """True iff ``q == m / 2**k``, i.e. the reduced denominator is a power of two."""
    d = Q(q).denominator
    return d & (d - 1) == 0


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    q = Q(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True, slots=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        if not isinstance(self.x, Fraction):
            object.__setattr__(self, "x", Q(self.x))
        if not isinstance(self.y, Fraction):
            object.__setattr__(self, "y", Q(self.y))

    def __add__(self, other: Point) -> Point:
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point) -> Point:
        return Point(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Point:
        return Point(-self.x, -self.y)

    def __mul__(self, s) -> Point:
        s = Q(s)
        return Point(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __truediv__(self, s) -> Point:
        s = Q(s)
        return Point(self.x / s, self.y / s)

    def dot(self, other: Point) -> Fraction:
        return self.x * other.x + self.y * other.y

    def norm2(self) -> Fraction:
        return self.x * self.x + self.y * self.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def to_json(self) -> list[str]:
        return [format_q(self.x), format_q(self.y)]

    @classmethod
    def from_json(cls, pair) -> Point:
        return cls(parse_q(str(pair[0])), parse_q(str(pair[1])))

    def __repr__(self) -> str:
        return f"Point({self.x}, {self.y})"


ORIGIN = Point(Fraction(0), Fraction(0))


def P(x: RationalLike, y: RationalLike) -> Point:
    return Point(Q(x), Q(y))


def sqdist(p: Point, q: Point) -> Fraction:
    return (p - q).norm2()


def midpoint(p: Point, q: Point) -> Point:
    return Point((p.x + q.x) / 2, (p.y + q.y) / 2)


def interpolate(p_begin: Point, p_end: Point, s: RationalLike) -> Point:
    """Point at fraction ``s`` of the segment ``[p_begin, p_end]``."""
    s = Q(s)
    if not 0 <= s <= 1:
        raise ValueError(f"interpolation parameter {s} outside [0, 1]")
    return p_begin + (p_end - p_begin) * s


def rot90cw_vec(v: Point) -> Point:
    return Point(v.y, -v.x)


def rot90cw(p: Point, center: Point) -> Point:
    """Quarter turn clockwise of ``p`` about ``center``."""
    return center + rot90cw_vec(p - center)


def shrink_rot45cw(p: Point, pivot: Point) -> Point:
    """Rotate ``p`` 45 degrees clockwise about ``pivot`` and scale by 1/sqrt(2).

    The composite is the rational matrix ((1, 1), (-1, 1)) / 2, so squared
    length about the pivot halves exactly.
    """
    v = p - pivot
    return pivot + Point((v.x + v.y) / 2, (v.y - v.x) / 2)


def cge_step(p: Point, c: Point) -> Point:
    """Coordinate-wise ``floor(2a - b)``: push ``p`` away from ``c``."""
    return Point(Fraction(floor_q(2 * p.x - c.x)), Fraction(floor_q(2 * p.y - c.y)))


def in_diagonal_square(z: Point, p: Point, q: Point) -> bool:
    """Is ``z`` inside the closed square having segment ``pq`` as a diagonal?

    With centre m, half-diagonal h and its normal r, the square is
    ``|(z-m).(h+r)| <= |h|^2`` and ``|(z-m).(h-r)| <= |h|^2``.
    """
    m = midpoint(p, q)
    h = (q - p) / 2
    r = rot90cw_vec(h)
    w = z - m
    lim = h.norm2()
    return abs(w.dot(h + r)) <= lim and abs(w.dot(h - r)) <= lim
