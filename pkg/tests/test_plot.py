from lcmsim.engine import Configuration, run
from lcmsim.exactgeom import P, in_diagonal_square
from lcmsim.modelcore import Model
from lcmsim.plot import plot_trace, square_corners
from lcmsim.protocols import algorithms as algs
from lcmsim.sched import gen_fsynch, gen_rsynch


def test_square_corners():
    corners = square_corners(P(0, 0), P(2, 0))
    assert corners == [P(0, 0), P(1, -1), P(2, 0), P(1, 1), P(0, 0)]
    assert all(in_diagonal_square(c, P(0, 0), P(2, 0)) for c in corners)


def test_sro_plot_draws_squares(tmp_path):
    t = run(algs.sro_oblot(), Model.OBLOT, gen_rsynch(1, 8, "A"), Configuration.of(P(0, 0), P(4, 0)))
    plain, boxed = tmp_path / "plain.svg", tmp_path / "boxed.svg"
    plot_trace(t, plain)
    plot_trace(t, boxed, squares=True)
    assert boxed.read_text().count("<path") > plain.read_text().count("<path")


def test_stay_put_plot(tmp_path):
    t = run(algs.stay_put(), Model.OBLOT, gen_fsynch(2), Configuration.of(P(0, 0), P(1, 0)))
    out = plot_trace(t, tmp_path / "stay.svg")
    assert out.exists() and "<svg" in out.read_text()
