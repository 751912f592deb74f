"""Reference algorithms, simulator constructions and refinement checks."""

from .algorithms import (
    ANCHOR, DONE, INIT, anchor_midpoint, cge_fsynch, fsta_suite, go_to_midpoint, lambda_step,
    single_move, sro_oblot, stay_put, suite, token_ring,
)
from .refinement import (
    Projection, RefinementReport, check_refinement, compare_collapse, epoch_overhead, project,
    run_checked,
)
from .simulators import (
    CPY, EXC, RST, HandshakeLight, SimLight, SimulatorError, fsynch_collapse, rsynch_handshake,
    sim_a,
)

__all__ = [
    "ANCHOR", "CPY", "DONE", "EXC", "INIT", "RST", "HandshakeLight", "Projection",
    "RefinementReport", "SimLight", "SimulatorError", "anchor_midpoint", "cge_fsynch",
    "check_refinement", "compare_collapse", "epoch_overhead", "fsta_suite", "fsynch_collapse",
    "go_to_midpoint", "lambda_step", "project", "rsynch_handshake", "run_checked", "sim_a",
    "single_move", "sro_oblot", "stay_put", "suite", "token_ring",
]
