"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction as F

import pytest

from bincover.adversary import (SeparationInstance, covering_upper_bound_from_errors,
                                planted_instance, random_instance, reduction_reference_packing,
                                run_separation_via_covering, separation_to_covering,
                                sigma_family, sigma_reference_packing)
from bincover.core import packing_stats
from bincover.encoding import approx_int, approx_real
from bincover.harness import PAIRING_C, check_hard_invariants
from bincover.online import (AdviceCover, DualNextFit, SplitPair, advice_cover, dual_next_fit,
                             optimal_replay, split_pair)
from bincover.oracle import EASY_BETA, full_advice, full_advice_tape, normalize_packing, run_oracle
from bincover.samples import reserved_bin_example
from bincover.solver import optimal_cover

from oracles import LabelledPlacer, RandomPlacer, exhaustive_opt

DISTS = ["uniform:1/20:3/5", "uniform:1/10:9/10", "bimodal:1/20:2/5:1/2:9/10:1/3", "dyadic:5",
         "uniform:1/3:2/3"]
SIGMA_NS = (2 ** 12, 2 ** 14, 2 ** 16)
SIGMA_JS = (1, 2, 4, 8, 16)


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nCRITERION {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


@pytest.fixture(scope="module")
def small_suite():
    """500 random instances with n <= 12 and their DP optimum."""
    suite = []
    for s in range(500):
        inst = random_instance(4 + s % 9, DISTS[s % len(DISTS)], s)
        suite.append((inst, optimal_cover(inst).covered_count))
    return suite


@pytest.fixture(scope="module")
def reserved_runs():
    inst, ref = reserved_bin_example()
    start = time.perf_counter()
    runs = {}
    for alpha in (None, F(1, 6)):
        out = run_oracle(inst, ref, k=6, alpha=alpha)
        runs[alpha] = (out, advice_cover(inst, out.tape(), alpha=alpha))
    return inst, ref, runs, time.perf_counter() - start


@pytest.fixture(scope="module")
def sigma_runs():
    start = time.perf_counter()
    rows = []
    for n in SIGMA_NS:
        for j in SIGMA_JS:
            inst = sigma_family(n, j)
            out = run_oracle(inst, sigma_reference_packing(inst))
            adv = advice_cover(inst, out.tape())
            dnf = dual_next_fit(inst)
            rows.append((n, j, inst, out, adv, dnf))
    return rows, time.perf_counter() - start


def test_criterion_01_encoding_bounds(report):
    rng = random.Random(2024)
    start = time.perf_counter()
    bad = 0
    for t in range(100_000):
        k = rng.randint(1, 12)
        eps = F(1, 1 << k)
        if t % 2:
            x = rng.randint(1, 1 << 40)
            a = approx_int(x, k)
            bad += not ((1 - eps) * x < a.down() <= x <= a.up() < (1 + eps) * x)
        else:
            q = rng.randint(2, 1 << 30)
            x = F(rng.randint(1, q - 1), q)
            a = approx_real(x, k)
            bad += not (a.down() <= x <= a.up() <= x + eps and a.up() <= a.down() + eps)
    elapsed = time.perf_counter() - start
    report(1, bad == 0 and elapsed < 10, f"100000 samples, {bad} violations, {elapsed:.2f}s")


def test_criterion_02_reserved_example(report, reserved_runs):
    inst, ref, runs, elapsed = reserved_runs
    out, run = runs[None]
    p = out.derived
    values = (p.m_ls, p.n_g, p.d, p.d_up, p.m_lsb, p.n_b)
    params_ok = values == (12, 4, F(23, 100), F(15, 64), 2, 2)
    good = set(p.good)
    reserved = run.diagnostics["black_bins"] + run.diagnostics["white_bins"]
    good_reserved = sum(1 for b in reserved if run.packing.bins[b].level >= 1
                        and any(i in good for i in run.packing.bins[b].item_indices))
    out6, run6 = runs[F(1, 6)]
    declared = run6.diagnostics["good_covered"]
    ok = (params_ok and run.covered >= 7 and good_reserved >= 2
          and run6.covered >= 7 and declared == 2 and elapsed < 1)
    report(2, ok, f"params={tuple(map(str, values))} covered={run.covered} "
                  f"good-item reserved covered={good_reserved}; with alpha=1/6 "
                  f"covered={run6.covered} declared-good covered={declared}; {elapsed:.3f}s")


def test_criterion_03_oracle_exactness(report, small_suite):
    start = time.perf_counter()
    mismatches = [inst.label for inst, opt in small_suite if exhaustive_opt(inst.items) != opt]
    elapsed = time.perf_counter() - start
    report(3, not mismatches and elapsed < 120,
           f"500 instances, {len(mismatches)} mismatches, {elapsed:.1f}s")


def test_criterion_04_dual_next_fit_half(report, small_suite):
    bad = [inst.label for inst, opt in small_suite
           if dual_next_fit(inst).covered < F(opt, 2) - 1]
    report(4, not bad, f"500 instances, {len(bad)} below OPT/2 - 1")


def test_criterion_05_split_pair(report):
    orders = ["shuffle", "small_first", "large_first", "ascending", "descending", "given"]
    checked, bad, worst = 0, [], F(1)
    for idx in range(200):
        rng = random.Random(idx)
        m_ls = 0 if idx % 4 == 0 else rng.randint(1, 40)
        m_ll = rng.randint(-(-m_ls // 14), m_ls // 2 + 3)
        m_s = rng.randint(0, 10)
        if m_ls + m_ll + m_s == 0:
            m_s = 1
        inst, ref = planted_instance(m_ls, m_ll, m_s, idx, orders[idx % len(orders)])
        stats = packing_stats(inst, normalize_packing(inst, ref), covered_only=True)
        assert stats.m_ls == 0 or stats.beta >= EASY_BETA
        opt = ref.covered_count
        got = split_pair(inst).covered
        checked += 1
        worst = min(worst, F(got, opt))
        if got < F(8, 15) * opt - 2:
            bad.append(inst.label)
    report(5, not bad, f"{checked} instances, {len(bad)} below 8/15 OPT - 2, "
                       f"worst ratio {float(worst):.4f}")


def test_criterion_06_sigma(report, sigma_runs):
    rows, elapsed = sigma_runs
    bad, lo_adv, hi_dnf = [], F(1), F(0)
    for n, j, inst, out, adv, dnf in rows:
        opt = n // j
        ra, rd = F(adv.covered, opt), F(dnf.covered, opt)
        lo_adv, hi_dnf = min(lo_adv, ra), max(hi_dnf, rd)
        if ra < F(52, 100) or rd > F(51, 100):
            bad.append((n, j, float(ra), float(rd)))
    report(6, not bad and elapsed < 60,
           f"{len(rows)} rows, min advice ratio {float(lo_adv):.4f}, "
           f"max dual-next-fit ratio {float(hi_dnf):.4f}, {elapsed:.1f}s, failures {bad}")


def test_criterion_07_reserved_invariants(report, reserved_runs, sigma_runs):
    inst, _, runs, _ = reserved_runs
    hard = [(inst, out, run) for out, run in runs.values()]
    hard += [(i, out, adv) for _, _, i, out, adv, _ in sigma_runs[0]]
    problems = []
    for i, out, run in hard:
        assert run.diagnostics["mode"] == "HARD"
        problems += check_hard_invariants(i, run.packing, run.diagnostics, d=out.derived.d)
    report(7, not problems, f"{len(hard)} HARD runs, C={PAIRING_C}, violations {problems[:3]}")


def test_criterion_08_advice_size(report, sigma_runs):
    worst = None
    bad = []

    def check(inst, tape_len):
        nonlocal worst
        n = min(inst.n, inst.meta.get("n", inst.n))  # family size when stricter
        bound = 12 * math.ceil(math.log2(math.log2(n))) + 48
        if tape_len > bound:
            bad.append((inst.label, tape_len, bound))
        if worst is None or tape_len - bound > worst[1] - worst[2]:
            worst = (inst.label, tape_len, bound)

    for _, _, inst, out, _, _ in sigma_runs[0]:
        check(inst, len(out.tape()))
    for e in range(6, 17):
        if 2 ** e in SIGMA_NS:
            continue
        for j in (1, 2, 3, 5, 8):
            inst = sigma_family(2 ** e, j)
            check(inst, len(run_oracle(inst, sigma_reference_packing(inst)).tape()))
    for idx in range(40):
        inst, ref = planted_instance(20 + 37 * idx, idx % 3, idx % 5, idx)
        check(inst, len(run_oracle(inst, ref).tape()))
    report(8, not bad, f"closest to the bound: {worst[0]} uses {worst[1]} of {worst[2]} bits")


def test_criterion_09_reduction(report):
    formula_bad = 0
    for n1 in range(0, 41, 5):
        for n2 in range(0, 41, 5):
            for a1 in range(41):
                for a2 in range(41):
                    if covering_upper_bound_from_errors(n1, n2, a1, a2) > \
                            n1 + n2 - F(a1 + a2, 8):
                        formula_bad += 1
    runs, run_bad = 0, []
    for s in range(150):
        rng = random.Random(s)
        n = rng.randint(2, 40)
        sep = SeparationInstance.random(n, rng.randint(0, n), s)
        inst = separation_to_covering(sep)
        tape = run_oracle(inst, reduction_reference_packing(sep, inst)).tape()
        algos = [DualNextFit(), SplitPair(), AdviceCover(tape), RandomPlacer(random.Random(s)),
                 LabelledPlacer(sep.labels, sep.n2), LabelledPlacer(sep.labels, sep.n2, True)]
        for algo in algos:
            out = run_separation_via_covering(algo, sep)
            runs += 1
            if out.covered > covering_upper_bound_from_errors(out.n1, out.n2, out.a1, out.a2):
                run_bad.append((algo.name, n, out.a1, out.a2, out.covered))
    report(9, formula_bad == 0 and not run_bad,
           f"formula violations {formula_bad}; {runs} simulated runs, {len(run_bad)} over bound")


def test_criterion_10_optimal_replay(report):
    bad, size_bad = [], []
    for s in range(200):
        inst = random_instance(1 + s % 12, DISTS[s % len(DISTS)], 10_000 + s)
        opt_packing = optimal_cover(inst)
        opt = exhaustive_opt(inst.items)
        if optimal_replay(inst, full_advice(inst, opt_packing)).covered != opt:
            bad.append(inst.label)
        bits = len(full_advice_tape(inst, opt_packing))
        bound = inst.n * math.ceil(math.log2(opt + 1)) + 2 * math.ceil(math.log2(inst.n + 1)) + 1
        if bits > bound:
            size_bad.append((inst.label, bits, bound))
    report(10, not bad and not size_bad,
           f"200 instances, {len(bad)} replay mismatches, {len(size_bad)} size violations")
