"""Reference algorithms.

Decisions are written in the observer's own frame: it sits at the origin
and ``snap.peer_offset`` is wherever the frame put its peer. All rules here
are similarity covariant, so they never assume the canonical (0, s) form.
"""

from __future__ import annotations

from fractions import Fraction

from ..exactgeom import ORIGIN, Q, cge_step, midpoint, shrink_rot45cw
from ..modelcore import KEEP, Algorithm, Decision, Snapshot


def _stay(color=KEEP) -> Decision:
    return Decision(ORIGIN, color)


def go_to_midpoint() -> Algorithm:
    def decide(snap: Snapshot) -> Decision:
        return Decision(snap.peer_offset / 2, 0)
    return Algorithm("midpoint", (0,), 0, decide)


def stay_put() -> Algorithm:
    return Algorithm("stay", (0,), 0, lambda snap: _stay(0))


def lambda_step(lam) -> Algorithm:
    """Move to the point at parameter ``lam`` along the segment toward the peer."""
    lam = Q(lam)
    if not 0 < lam <= 1:
        raise ValueError("lambda must lie in (0, 1]")

    def decide(snap: Snapshot) -> Decision:
        return Decision(snap.peer_offset * lam, 0)
    return Algorithm("lambda_step", (0,), 0, decide, {"lambda": lam})


INIT, ANCHOR, DONE = "INIT", "ANCHOR", "DONE"


def anchor_midpoint() -> Algorithm:
    """Peer still INIT: anchor and go to the midpoint. Otherwise do nothing."""
    def decide(snap: Snapshot) -> Decision:
        if snap.peer_color == INIT:
            return Decision(snap.peer_offset / 2, ANCHOR)
        return _stay()
    return Algorithm("anchor", (INIT, ANCHOR), INIT, decide)


def token_ring(hop=Fraction(1, 4)) -> Algorithm:
    """Three-color toy: advance a mod-3 token from the visible lights.

    The new color is one more than the sum of whatever lights the model lets
    the robot see; a nonzero result buys a hop of ``hop`` toward the peer.
    """
    hop = Q(hop)

    def decide(snap: Snapshot) -> Decision:
        seen = [c for c in (snap.own_color, snap.peer_color) if c is not None]
        new = (sum(seen) + 1) % 3
        dest = snap.peer_offset * hop if new else ORIGIN
        return Decision(dest, new)
    return Algorithm("token3", (0, 1, 2), 0, decide, {"hop": hop})


def single_move(hop=Fraction(1, 4)) -> Algorithm:
    """FSTA single move: hop once toward the peer, then stay forever.

    The default hop stays clear of 1/2, which would make simultaneous
    movers meet at the midpoint.
    """
    hop = Q(hop)
    if not 0 < hop:
        raise ValueError("hop must be positive")

    def decide(snap: Snapshot) -> Decision:
        if snap.own_color == INIT:
            return Decision(snap.peer_offset * hop, DONE)
        return _stay()
    return Algorithm("single_move", (INIT, DONE), INIT, decide, {"hop": hop})


def sro_oblot() -> Algorithm:
    """Stateless shrinking rotation: swing to the 45-degree shrink image of self about the peer.

    A lone mover performs the pivot-and-shrink step. Two simultaneous movers
    land on the quarter turn of the segment about its midpoint, because
    ``2 * shrink - identity`` is exactly the clockwise quarter turn.
    """
    def decide(snap: Snapshot) -> Decision:
        return Decision(shrink_rot45cw(ORIGIN, snap.peer_offset), 0)
    return Algorithm("sro", (0,), 0, decide)


def cge_fsynch() -> Algorithm:
    """Grid-granted expansion: jump to ``floor(2p - c)`` with ``c`` the current midpoint.

    Under FSYNCH with an integer centre of gravity every round preserves the
    centre, so this tracks the expansion about the initial one.
    """
    def decide(snap: Snapshot) -> Decision:
        if snap.grid is None:
            raise ValueError("cge needs the grid oracle")
        own = snap.grid
        c = midpoint(own, own + snap.peer_offset)
        return Decision(cge_step(own, c) - own, 0)
    return Algorithm("cge", (0,), 0, decide)


def suite() -> list[Algorithm]:
    """Refinement suite spanning k = 1, 2, 3."""
    return [go_to_midpoint(), anchor_midpoint(), token_ring()]


def fsta_suite() -> list[Algorithm]:
    return [go_to_midpoint(), single_move(), token_ring()]


__all__ = [
    "ANCHOR", "DONE", "INIT", "anchor_midpoint", "cge_fsynch", "fsta_suite", "go_to_midpoint",
    "lambda_step", "single_move", "sro_oblot", "stay_put", "suite", "token_ring",
]
