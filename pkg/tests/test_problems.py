from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcmsim.adversaries import dmsd_break, psi, psi_interleave_chain, rdam_cases
from lcmsim.engine import Configuration, run
from lcmsim.exactgeom import ORIGIN, P
from lcmsim.modelcore import Algorithm, Decision, Model
from lcmsim.problems import (
    EXIT_CODES, FAILS, HOLDS, PREDICATES, UNDECIDED, PredicateReport, check_am, check_cge,
    check_dmsd, check_mcv, check_rdam, check_rdv1, check_sm, check_sro, cge_expected,
    dyadic_ratio, stop_ratios,
)
from lcmsim.protocols import algorithms as algs
from lcmsim.sched import CycleSpec, Schedule, gen_asynch, gen_fsynch, gen_rsynch, gen_ssynch

UNIT = Configuration.of(P(0, 0), P(1, 0))


def mid(sched, init=UNIT):
    return run(algs.go_to_midpoint(), Model.OBLOT, sched, init)


def test_report_contract():
    with pytest.raises(ValueError):
        PredicateReport("X", FAILS)
    rep = PredicateReport("X", FAILS, {"ratio": F(1, 12), "at": P(1, 2)})
    assert rep.to_json() == {"predicate": "X", "verdict": FAILS,
                             "witness": {"ratio": "1/12", "at": ["1/1", "2/1"]}}
    assert EXIT_CODES == {HOLDS: 0, FAILS: 1, UNDECIDED: 2}
    assert set(PREDICATES) == {"DMSD", "RDV1", "AM", "RDAM", "SM", "MCV", "SRO", "CGE"}


def test_dyadic_ratio():
    assert dyadic_ratio(F(1, 4)) == F(1, 2)
    assert dyadic_ratio(F(1, 144)) is None
    assert dyadic_ratio(F(1, 2)) is None
    assert dyadic_ratio(F(0)) == 0


def test_dmsd_examples():
    t = mid(psi_interleave_chain([0]))
    assert check_dmsd(t).verdict == HOLDS
    assert F(1, 4) in stop_ratios(t)
    assert check_dmsd(mid(gen_fsynch(1))).verdict == HOLDS
    brk = dmsd_break(F(1, 2), F(1, 3))
    rep = check_dmsd(run(brk.algorithm, Model.OBLOT, brk.schedule, brk.init))
    assert rep.verdict == FAILS and rep.witness["ratio"] == F(1, 12)


@given(st.lists(st.integers(0, 6), min_size=1, max_size=5))
def test_dmsd_holds_on_psi_products(rs):
    t = mid(psi_interleave_chain(rs))
    assert check_dmsd(t).verdict == HOLDS
    prod = F(1)
    for r in rs:
        prod *= psi(r)
    assert prod ** 2 in stop_ratios(t)


def test_rdv1():
    assert check_rdv1(mid(gen_fsynch(1))).verdict == HOLDS
    stay = run(algs.stay_put(), Model.OBLOT, gen_fsynch(3), UNIT)
    assert check_rdv1(stay).verdict == FAILS
    assert check_rdv1(mid(gen_rsynch(0, 3, "A"))).verdict == FAILS


def test_am():
    anchor = algs.anchor_midpoint()
    late = run(anchor, Model.FCOM, rdam_cases()["late"], Configuration.of(P(0, 0), P(4, 0)))
    rep = check_am(late)
    assert rep.verdict == HOLDS and rep.witness["stopped"] == "B"
    single = run(algs.single_move(), Model.FSTA, gen_fsynch(2), UNIT)
    assert check_am(single).verdict == FAILS
    both_twice = mid(gen_rsynch(0, 4, "A"))
    assert check_am(both_twice).verdict == FAILS


@settings(max_examples=50)
@given(st.integers(0, 10**6), st.sampled_from(["NONE", "CM"]))
def test_rdam_is_the_disjunction(seed, cls):
    t = run(algs.anchor_midpoint(), Model.FCOM, gen_asynch(seed, 4, cls),
            Configuration.of(P(0, 0), P(8, 0)))
    either = check_rdv1(t).holds or check_am(t).holds
    assert check_rdam(t).holds == either


def test_sm():
    for seed in range(100):
        t = run(algs.single_move(), Model.FSTA, gen_asynch(seed, 4, "NONE"), UNIT)
        assert check_sm(t).verdict == HOLDS, seed
    stay = run(algs.stay_put(), Model.OBLOT, gen_fsynch(2), UNIT)
    assert check_sm(stay).verdict == FAILS
    rep = check_sm(mid(gen_rsynch(0, 3, "A")))
    assert rep.verdict == FAILS and rep.witness["second_move_at"] == F(5, 2)
    with pytest.raises(ValueError):
        check_sm(run(algs.stay_put(), Model.OBLOT, gen_fsynch(1), Configuration.of(P(0, 0), P(0, 0))))


def flee():
    return Algorithm("flee", (0,), 0, lambda s: Decision(-s.peer_offset, 0))


def test_mcv():
    t = mid(gen_ssynch(3, 40))
    assert check_mcv(t, F(1, 1000)).verdict == HOLDS
    away = run(flee(), Model.OBLOT, gen_fsynch(1), UNIT)
    rep = check_mcv(away, F(1, 2))
    assert rep.verdict == FAILS and "interval" in rep.witness
    stay = run(algs.stay_put(), Model.OBLOT, gen_fsynch(3), UNIT)
    assert check_mcv(stay, F(1, 2)).verdict == UNDECIDED
    with pytest.raises(ValueError):
        check_mcv(stay, F(0))


def test_mcv_catches_a_dip_inside_a_piece():
    # B passes through A's position: distance falls then rises within one move
    s = Schedule((CycleSpec("A", 1, F(0), F(1), F(2), F(3)), CycleSpec("B", 1, F(0), F(1), F(2), F(3))))
    over = Algorithm("over", (0,), 0, lambda snap: Decision(snap.peer_offset * 2, 0))
    t = run(over, Model.OBLOT, s, Configuration.of(P(0, 0), P(4, 0)))
    assert check_mcv(t, F(1, 2)).verdict == FAILS


def sro_trace(sched, init=UNIT, fair=True):
    return run(algs.sro_oblot(), Model.OBLOT, sched, init, check_fair=fair)


def test_sro_conditions():
    rot = check_sro(sro_trace(gen_fsynch(1)))
    assert rot.verdict == HOLDS and rot.witness["rotations"] == 1
    shrink = check_sro(sro_trace(gen_rsynch(0, 1, "A"), fair=False))
    assert shrink.verdict == HOLDS and shrink.witness["shrinks"] == 1
    slide = Algorithm("slide", (0,), 0, lambda snap: Decision(P(1, 0), 0))
    moved = run(slide, Model.OBLOT, gen_fsynch(1), UNIT)
    assert check_sro(moved).verdict == FAILS


@settings(max_examples=30)
@given(st.integers(0, 6), st.integers(2, 14), st.sampled_from("AB"))
def test_sro_reference_holds(prefix, alt, first):
    assert check_sro(sro_trace(gen_rsynch(prefix, alt, first))).verdict == HOLDS


def test_sro_rejects_perturbed_stop():
    t = sro_trace(gen_rsynch(1, 4, "A"))
    assert check_sro(t).verdict == HOLDS
    m = t.moves["B"][-1]
    t.moves["B"][-1] = type(m)(m.t_begin, m.t_end, m.p_begin, m.p_end + P(F(1, 64), 0), m.profile)
    assert check_sro(t).verdict == FAILS


def test_cge():
    assert cge_expected(P(3, 1), P(1, -1), 1)[1] == (P(4, 2), P(0, -2))
    t = run(algs.cge_fsynch(), Model.OBLOT, gen_fsynch(4), Configuration.of(P(3, 1), P(1, -1)), grid=True)
    assert check_cge(t, 4).verdict == HOLDS
    assert check_cge(t, 9).verdict == UNDECIDED
    wrong = run(algs.go_to_midpoint(), Model.OBLOT, gen_fsynch(2), Configuration.of(P(3, 1), P(1, -1)),
                grid=True)
    assert check_cge(wrong, 2).verdict == FAILS
    with pytest.raises(ValueError):
        check_cge(mid(gen_fsynch(1)), 1)


def test_cge_fixed_point():
    assert cge_expected(P(2, 0), P(2, 0), 3) == [(P(2, 0), P(2, 0))] * 4
    assert ORIGIN == P(0, 0)
