"""Exact simulation and verification of two-robot Look-Compute-Move systems."""

from .engine import (
    Configuration, Trace, color_at, epochs, joint_stops, moves_count, position_at, run,
)
from .exactgeom import P, Point, Q
from .modelcore import Algorithm, Decision, FrameChoice, Model, Snapshot
from .sched import (
    Schedule, check_fairness, gen_asynch, gen_fsynch, gen_rsynch, gen_ssynch, validate_atomicity,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm", "Configuration", "Decision", "FrameChoice", "Model", "P", "Point", "Q",
    "Schedule", "Snapshot", "Trace", "check_fairness", "color_at", "epochs", "gen_asynch",
    "gen_fsynch", "gen_rsynch", "gen_ssynch", "joint_stops", "moves_count", "position_at", "run",
    "validate_atomicity",
]
