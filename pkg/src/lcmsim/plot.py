"""Trajectory plots. Rationals become floats here and nowhere else."""

from __future__ import annotations

from pathlib import Path

from .engine import Trace, stop_configurations
from .exactgeom import midpoint, rot90cw_vec
from .modelcore import ROBOTS

_COLORS = {"A": "tab:blue", "B": "tab:orange"}


def _xy(p):
    return float(p.x), float(p.y)


def square_corners(p, q):
    """Corners of the square having ``pq`` as a diagonal, in drawing order."""
    m = midpoint(p, q)
    r = rot90cw_vec((q - p) / 2)
    return [p, m + r, q, m - r, p]


def plot_trace(trace: Trace, out, squares: bool = False) -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    for r in ROBOTS:
        pts = [trace.initial.positions[r]]
        for m in trace.moves[r]:
            if m.p_begin != pts[-1]:
                pts.append(m.p_begin)
            pts.append(m.p_end)
        xs, ys = zip(*map(_xy, pts))
        ax.plot(xs, ys, "-", color=_COLORS[r], lw=1, label=f"robot {r}")
        ax.plot(xs[0], ys[0], "o", color=_COLORS[r], ms=6)
    stops = stop_configurations(trace)
    for _, a, b in stops:
        ax.plot(*_xy(a), ".", color=_COLORS["A"], ms=4)
        ax.plot(*_xy(b), ".", color=_COLORS["B"], ms=4)
        if squares and a != b:
            xs, ys = zip(*map(_xy, square_corners(a, b)))
            ax.plot(xs, ys, "-", color="0.6", lw=0.6)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(f"{trace.algorithm} ({trace.model.value}, {trace.schedule.synchrony})")
    ax.legend(loc="best", fontsize="small")
    out = Path(out)
    fig.savefig(out, format="svg")
    plt.close(fig)
    return out
