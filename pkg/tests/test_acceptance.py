"""The twelve acceptance criteria, each with its time budget.

Every test prints one ``criterion N PASS/FAIL`` line; the terminal summary
repeats them so they survive output capture.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

from lcmsim.adversaries import (
    dmsd_break, mirror_rsynch, mirror_violations, move_counts_at, psi, psi_interleave,
    rdam_cases, squared_ratio_at, stale_move_end,
)
from lcmsim.engine import (
    Configuration, epochs, position_at, run, stop_configurations,
)
from lcmsim.equiv import SUITE_IDS, collapse_report, equiv_suite, rsynch_for_seed, seeded_init
from lcmsim.exactgeom import P, in_diagonal_square, is_dyadic, rational_sqrt, sqdist
from lcmsim.modelcore import ROBOTS, FrameChoice, Model
from lcmsim.problems import (
    FAILS, HOLDS, check_am, check_dmsd, check_mcv, check_rdam, check_rdv1, check_sro,
    sro_configurations,
)
from lcmsim.protocols import algorithms as algs
from lcmsim.protocols.refinement import compare_collapse, run_checked
from lcmsim.protocols.simulators import fsynch_collapse, rsynch_handshake
from lcmsim.sched import (
    CycleSpec, Schedule, check_fairness, gen_asynch, gen_fsynch, gen_rsynch, gen_ssynch,
    rounds_schedule, validate_atomicity, with_look_at,
)

F = Fraction


@contextmanager
def criterion(record, n, title, budget):
    t0 = time.perf_counter()
    verdict = "FAIL"
    try:
        yield
        verdict = "PASS"
    finally:
        secs = time.perf_counter() - t0
        if verdict == "PASS" and secs > budget:
            verdict = "FAIL"
        record[n] = (verdict, f"{title} [budget {budget} s]", secs)
        print(f"criterion {n} {verdict}: {title} in {secs:.2f} s (budget {budget} s)")
    assert secs <= budget, f"criterion {n} took {secs:.2f} s, budget {budget} s"


def _dyadic_root(sq):
    root = rational_sqrt(sq)
    return root is not None and is_dyadic(root)


def test_criterion_01_psi_law(record):
    with criterion(record, 1, "psi law for r = 0..8", 1.0):
        assert (psi(0), psi(1), psi(3)) == (F(1, 2), F(0), F(3, 8))
        alg = algs.go_to_midpoint()
        for r in range(9):
            sched = psi_interleave(r)
            assert validate_atomicity(sched, "CM").ok
            trace = run(alg, Model.OBLOT, sched, Configuration.of(P(0, 0), P(1, 0)))
            got = squared_ratio_at(trace, stale_move_end(sched))
            # B halves towards a resting A r times; A lands on the stale midpoint 1/2
            oracle = abs(F(1, 2) - F(1, 2 ** r))
            assert got == oracle ** 2 == psi(r) ** 2, r


def test_criterion_02_dmsd_possible_under_cm(record):
    with criterion(record, 2, "DMSD over 1000 CM-atomic schedules", 30.0):
        alg = algs.go_to_midpoint()
        stops = 0
        for seed in range(1000):
            sched = gen_asynch(seed, 4, "CM")
            assert validate_atomicity(sched, "CM").ok
            init = seeded_init(seed)
            trace = run(alg, Model.OBLOT, sched, init)
            d0 = sqdist(init.positions["A"], init.positions["B"])
            for _, a, b in stop_configurations(trace):
                assert _dyadic_root(sqdist(a, b) / d0), (seed, a, b)
                stops += 1
            assert check_dmsd(trace).verdict == HOLDS
        assert stops >= 1000


def test_criterion_03_dmsd_counterexample(record):
    with criterion(record, 3, "DMSD break at lambda=1/2, x=1/3", 1.0):
        brk = dmsd_break(F(1, 2), F(1, 3))
        assert brk.schedule.atomicity == "NONE"
        assert check_fairness(brk.schedule)
        assert not validate_atomicity(brk.schedule, "CM").ok
        trace = run(brk.algorithm, Model.OBLOT, brk.schedule, brk.init)
        # |1 - 2 lam + lam^2 x| with lam = 1/2, x = 1/3
        assert squared_ratio_at(trace, brk.stop_time) == F(1, 144)
        rep = check_dmsd(trace)
        assert rep.verdict == FAILS
        assert rep.witness["ratio"] == F(1, 12)
        assert rep.witness["squared_ratio"] == F(1, 144)


def test_criterion_04_handshake_refinement(record):
    with criterion(record, 4, "handshake refinement, overhead <= 3, colors <= 3k^2", 60.0):
        covered = set()
        for alg in algs.suite():
            worst_colors = 0
            for seed in range(50):
                sched = rsynch_for_seed(seed)
                acts = sched.rounds
                prefix = next(i for i, a in enumerate(acts) if len(a) == 1)
                covered.add((prefix, acts[prefix][0]))
                rep = run_checked(rsynch_handshake(alg), alg, sched, seeded_init(seed))
                assert rep.ok, (alg.name, seed, rep.problems)
                assert rep.overhead is not None and rep.overhead <= 3
                assert rep.colors <= 3 * alg.k ** 2
                worst_colors = max(worst_colors, rep.colors)
            assert worst_colors >= 1
        assert {k for k, _ in covered} == {0, 1, 2, 3}
        assert {r for _, r in covered} == set(ROBOTS)
        assert sorted(a.k for a in algs.suite()) == [1, 2, 3]


def test_criterion_05_sim_a_refinement(record):
    with criterion(record, 5, "SIM(A) refinement, overhead <= 4, patterns <= 7k, LC gives LCM", 120.0):
        plain = equiv_suite("sim.a", SUITE_IDS, 50, atomicity="NONE")
        assert plain.ok, plain.failures
        assert plain.runs == 150
        assert plain.max_overhead <= 4
        assert plain.max_patterns <= 7
        ks = {a.name: a.k for a in algs.suite()}
        for name, colors in plain.max_colors.items():
            assert colors <= 7 * ks[name]
        lc = equiv_suite("sim.a", SUITE_IDS, 50, atomicity="LC")
        assert lc.ok, lc.failures
        assert lc.max_overhead <= 4


def test_criterion_06_fsynch_collapse(record):
    with criterion(record, 6, "FSYNCH collapse to FSTA and FCOM", 5.0):
        for alg in algs.suite():
            for seed in range(10):
                rng = random.Random(seed)
                rounds = 3 + seed % 6
                frames = {(k, r): FrameChoice(F(rng.randint(1, 9), rng.randint(1, 9)))
                          for k in range(rounds) for r in ROBOTS}
                init = seeded_init(seed)
                rep = collapse_report(alg, rounds, init)
                assert rep.ok, (alg.name, seed, rep.problems)
                # the same comparison with adversarial frame scales
                sched = rounds_schedule([ROBOTS] * rounds, "FSYNCH", frames)
                original = run(alg, Model.LUMI, sched, init)
                for target in (Model.FSTA, Model.FCOM):
                    sim = fsynch_collapse(alg, target)
                    assert sim.k == alg.k
                    collapsed = run(sim, target, sched, init)
                    assert compare_collapse(original, collapsed) == []
                    assert len(epochs(collapsed)) == len(epochs(original)) == rounds


def test_criterion_07_rdam_possible(record):
    with criterion(record, 7, "RDAM for anchor-midpoint, four cases plus 1000 CM seeds", 30.0):
        alg = algs.anchor_midpoint()
        cases = rdam_cases()
        assert len(cases) == 4
        expected_via = {"simultaneous": "RDV1", "late": "AM", "stale": "AM", "steady": "RDV1"}
        for name, sched in cases.items():
            assert validate_atomicity(sched, "CM").ok and check_fairness(sched)
            trace = run(alg, Model.FCOM, sched, Configuration.of(P(0, 0), P(4, 0)))
            rep = check_rdam(trace)
            assert rep.verdict == HOLDS and rep.witness["via"] == expected_via[name], name
        for seed in range(1000):
            sched = gen_asynch(seed, 6, "CM")
            trace = run(alg, Model.FCOM, sched, seeded_init(seed))
            assert check_rdam(trace).verdict == HOLDS, seed


def test_criterion_08_rdam_mirror_witness(record):
    with criterion(record, 8, "mirror adversary keeps every FSTA suite algorithm symmetric", 10.0):
        broken = []
        for alg in algs.fsta_suite():
            setup = mirror_rsynch(alg, Model.FSTA, 40)
            trace = run(alg, Model.FSTA, setup.schedule, setup.init)
            assert check_rdv1(trace).verdict != HOLDS, alg.name
            assert check_am(trace).verdict != HOLDS, alg.name
            viol = mirror_violations(trace, setup.aligned_times)
            counts = [move_counts_at(trace, t) for t in setup.aligned_times]
            if viol or any(c["A"] != c["B"] for c in counts):
                broken.append((alg.name, setup.mode, len(viol)))
        assert not broken, f"mirror symmetry lost: {broken}"


def _sro_schedule(seed):
    rng = random.Random(f"sro-{seed}")
    prefix = rng.randint(0, 6)
    first = rng.choice(ROBOTS)
    acts = [ROBOTS] * prefix
    r = first
    for _ in range(20 - prefix):
        acts.append((r,))
        r = "B" if r == "A" else "A"
    frames = {(k, x): FrameChoice(F(rng.randint(1, 7), rng.randint(1, 7)))
              for k in range(20) for x in ROBOTS}
    return rounds_schedule(acts, "RSYNCH" if prefix < 20 else "FSYNCH", frames)


def test_criterion_09_sro(record):
    with criterion(record, 9, "SRO over 50 RSYNCH schedules of 20 steps", 30.0):
        alg = algs.sro_oblot()
        for seed in range(50):
            sched = _sro_schedule(seed)
            trace = run(alg, Model.OBLOT, sched, seeded_init(seed))
            assert check_sro(trace).verdict == HOLDS, seed
            confs = sro_configurations(trace)
            assert len(confs) == 21
            for prev, cur in zip(confs, confs[1:]):
                before, after = sqdist(*prev), sqdist(*cur)
                assert after in (before, before / 2)
                if prev[0] == cur[0] or prev[1] == cur[1]:
                    assert after == before / 2
                assert all(in_diagonal_square(z, *prev) for z in cur)


def test_criterion_10_mcv(record):
    with criterion(record, 10, "MCv for midpoint over 100 SSYNCH seeds, 12 epochs", 10.0):
        alg = algs.go_to_midpoint()
        for seed in range(100):
            init = seeded_init(seed)
            trace = run(alg, Model.OBLOT, gen_ssynch(seed, 40), init)
            bounds = epochs(trace)
            assert len(bounds) >= 12
            t12 = bounds[11]
            times = sorted({e.time for e in trace.events})
            d = [sqdist(position_at(trace, "A", t), position_at(trace, "B", t)) for t in times]
            assert all(x >= y for x, y in zip(d, d[1:])), seed
            d0 = sqdist(init.positions["A"], init.positions["B"])
            final = sqdist(position_at(trace, "A", t12), position_at(trace, "B", t12))
            assert final <= d0 / 2 ** 24
            assert check_mcv(trace, F(1, 2 ** 12)).verdict == HOLDS


def test_criterion_11_epochs(record):
    with criterion(record, 11, "epochs of FSYNCH rounds and RSYNCH alternation", 1.0):
        alg = algs.go_to_midpoint()
        init = Configuration.of(P(0, 0), P(1, 0))
        for n in range(1, 11):
            assert len(epochs(run(alg, Model.OBLOT, gen_fsynch(n), init))) == n
            for first in ROBOTS:
                alt = run(alg, Model.OBLOT, gen_rsynch(0, 2 * n, first), init)
                assert len(epochs(alt)) == n


def test_criterion_12_atomicity_validators(record):
    with criterion(record, 12, "atomicity validators and injected violations", 1.0):
        for cls in ("NONE", "LC", "M", "CM", "LCM"):
            for seed in range(20):
                assert validate_atomicity(gen_asynch(seed, 5, cls), cls).ok, (cls, seed)
        base = Schedule((
            CycleSpec("A", 1, F(0), F(1), F(2), F(3)),
            CycleSpec("B", 1, F(4), F(5), F(6), F(7)),
            CycleSpec("A", 2, F(8), F(9), F(10), F(11)),
        ), "NONE", "ASYNCH")
        for cls in ("LC", "CM", "LCM"):
            assert validate_atomicity(base, cls).ok
        lc = with_look_at(base, "B", 1, F(1))
        assert validate_atomicity(lc, "LC").violations == [("B", 1, "A", 1)]
        cm = with_look_at(base, "B", 1, F(5, 2))
        assert validate_atomicity(cm, "LC").ok
        assert validate_atomicity(cm, "CM").violations == [("B", 1, "A", 1)]
        # the same injection into generated schedules
        hits = 0
        for seed in range(30):
            for cls, place in (("LC", lambda c: c.t_compute),
                               ("CM", lambda c: (c.t_compute + c.t_end) / 2)):
                s = gen_asynch(seed, 4, cls)
                for c in s.cycles:
                    o = s.of("B" if c.robot == "A" else "A")
                    for d in o:
                        t = place(d)
                        prev_end = s.cycle(c.robot, c.index - 1).t_end if c.index > 1 else F(-1)
                        if prev_end < t < c.t_compute and t != c.t_look:
                            rep = validate_atomicity(with_look_at(s, c.robot, c.index, t), cls)
                            assert (c.robot, c.index, d.robot, d.index) in rep.violations
                            hits += 1
        assert hits >= 10
