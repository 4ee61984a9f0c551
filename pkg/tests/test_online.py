from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from bincover.adversary import planted_instance, random_instance, sigma_family, sigma_reference_packing
from bincover.core import Instance, Packing, is_large
from bincover.encoding import AdviceError, AdviceRecord, AdviceTape, encode_advice
from bincover.harness import check_hard_invariants
from bincover.online import (AdviceCover, DualNextFit, OptimalReplay, advice_cover, dual_next_fit,
                             dual_worst_fit_place, optimal_replay, run, split_pair)
from bincover.oracle import full_advice, run_oracle
from bincover.samples import mixed_example, reserved_bin_example
from bincover.solver import optimal_cover

from conftest import item_lists


def inst(*xs):
    return Instance(tuple(F(x) for x in xs))


class TestDualNextFit:
    def test_two_bins(self):
        assert dual_next_fit(inst("0.6", "0.6", "0.5", "0.5")).covered == 2

    def test_none(self):
        assert dual_next_fit(inst("0.3", "0.3", "0.3")).covered == 0

    @given(item_lists(max_size=30))
    def test_levels(self, items):
        r = dual_next_fit(Instance(tuple(items)))
        below = [b for b in r.packing.bins if b.level < 1]
        assert len(below) <= 1
        assert all(b.level < 2 for b in r.packing.bins)
        assert r.covered >= int(sum(items, F(0)) / 2)
        assert r.advice_bits_read == 0


class TestSplitPair:
    def test_example(self):
        r = split_pair(inst("0.6", "0.4", "0.6", "0.7"))
        assert r.covered == 1
        assert r.packing.groups() == [[0, 2], [1], [3]]

    @given(item_lists(max_size=30))
    def test_one_unpaired_large(self, items):
        r = split_pair(Instance(tuple(items)))
        lone = [b for b in r.packing.bins
                if sum(1 for i in b.item_indices if is_large(items[i])) == 1]
        assert len(lone) <= 1

    @pytest.mark.parametrize("seed", range(10))
    def test_all_small_two_thirds(self, seed):
        i = random_instance(11, "uniform:1/20:49/100", seed)
        opt = optimal_cover(i).covered_count
        assert split_pair(i).covered >= F(2, 3) * opt - 2


class TestWorstFit:
    def test_minimum(self):
        assert dual_worst_fit_place([F(1, 10), F(1, 20), F(1, 5)], F(7, 100)) == 1

    def test_tie(self):
        assert dual_worst_fit_place([F(0), F(0)], F(1, 3)) == 0

    def test_no_bins(self):
        with pytest.raises(ValueError):
            dual_worst_fit_place([], F(1, 3))

    @given(st.integers(1, 8), st.integers(1, 60), st.integers(1, 20))
    def test_balancing(self, w, count, den):
        x = F(1, den)
        levels = [F(0)] * w
        for _ in range(count):
            levels[dual_worst_fit_place(levels, x)] += x
        assert max(levels) - min(levels) <= x


class TestReplay:
    def test_mixed(self):
        i, ref = mixed_example()
        r = optimal_replay(i, full_advice(i, ref))
        assert r.covered == 9
        assert r.packing.groups() == ref.groups()

    def test_empty(self):
        r = optimal_replay(Instance(()), [])
        assert r.covered == 0 and r.packing.bins == []

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            optimal_replay(inst("0.5", "0.5"), [0, 5])

    @given(item_lists(max_size=9))
    def test_equals_opt(self, items):
        i = Instance(tuple(items))
        opt = optimal_cover(i)
        assert optimal_replay(i, full_advice(i, opt)).covered == opt.covered_count


class TestAdviceCover:
    @given(item_lists(max_size=25))
    def test_easy_equals_split_pair(self, items):
        i = Instance(tuple(items))
        tape = encode_advice(AdviceRecord(k=4))
        assert advice_cover(i, tape).placements == split_pair(i).placements

    def test_reserved_example(self):
        i, ref = reserved_bin_example()
        out = run_oracle(i, ref, k=6)
        r = advice_cover(i, out.tape())
        assert r.covered >= 7
        assert r.diagnostics["black_filled"] == 2
        assert r.advice_bits_read == len(out.tape())
        assert check_hard_invariants(i, r.packing, r.diagnostics, d=out.derived.d) == []

    def test_reserved_example_alpha_sixth(self):
        i, ref = reserved_bin_example()
        out = run_oracle(i, ref, k=6, alpha=F(1, 6))
        r = advice_cover(i, out.tape(), alpha=F(1, 6))
        assert r.covered >= 7
        assert r.diagnostics["good_covered"] == len(r.diagnostics["declared_good"]) == 2

    def test_exhausted_tape(self):
        with pytest.raises(AdviceError):
            AdviceCover(AdviceTape([0, 1]))

    @pytest.mark.parametrize("j", [1, 3, 8])
    def test_sigma_beats_half(self, j):
        i = sigma_family(1024, j)
        r = advice_cover(i, run_oracle(i, sigma_reference_packing(i)).tape())
        assert F(r.covered, 1024 // j) > F(1, 2)

    @pytest.mark.parametrize("order", ["shuffle", "small_first", "large_first", "ascending",
                                       "descending", "given"])
    @pytest.mark.parametrize("seed", range(4))
    def test_invariants_on_planted(self, order, seed):
        i, ref = planted_instance(30 + 7 * seed, seed % 2, 4, seed, order)
        out = run_oracle(i, ref)
        r = advice_cover(i, out.tape())
        assert r.covered >= F(8, 15) * ref.covered_count - 2
        if out.record.mode == "HARD":
            assert check_hard_invariants(i, r.packing, r.diagnostics, d=out.derived.d) == []

    @given(st.integers(0, 10 ** 6), st.integers(5, 60), st.data())
    def test_prefix_discipline(self, seed, cut, data):
        i, ref = planted_instance(24, 1, 3, seed % 50)
        tape = run_oracle(i, ref).tape()
        cut = min(cut, i.n)
        suffix = data.draw(st.lists(st.fractions(F(1, 100), 1).filter(lambda x: x > 0),
                                    max_size=20))
        other = Instance(i.items[:cut] + tuple(suffix))
        a = run(AdviceCover(tape.copy()), i)
        b = run(AdviceCover(tape.copy()), other)
        assert a.placements[:cut] == b.placements[:cut]

    @given(st.lists(st.booleans(), min_size=3, max_size=80), item_lists(max_size=30))
    def test_fuzzed_tapes_never_crash_midstream(self, bits, items):
        try:
            algo = AdviceCover(AdviceTape(bits))
        except AdviceError:
            return
        r = run(algo, Instance(tuple(items)))
        assert len(r.placements) == len(items)


def test_placements_irrevocable():
    i, ref = reserved_bin_example()
    algo = AdviceCover(run_oracle(i, ref, k=6).tape())
    seen = []
    for x in i.items:
        algo.place(x)
        assert algo.placements[:len(seen)] == seen
        seen = list(algo.placements)
    assert Packing.from_assignment(i, seen).covered_count == algo.result().covered


def test_run_result_json():
    r = dual_next_fit(inst("0.5", "0.5", "0.2"))
    data = r.to_json()
    assert data["placements"] == [0, 0, 1] and data["covered"] == 1
    assert isinstance(DualNextFit().name, str)


def test_white_overfill_reaches_past_d_plus_d_up():
    # once every white bin is past d, worst-fit keeps feeding bins until the cap;
    # the level then exceeds d + d_up + max item but stays below 2 d_up + max item
    i, ref = planted_instance(30, 0, 4, 0, "given")
    out = run_oracle(i, ref)
    r = advice_cover(i, out.tape())
    p = out.derived
    levels = [F(x) for x in r.diagnostics["white_levels"]]
    assert max(levels) == F(851, 1000)
    assert max(levels) > p.d + p.d_up + F(262, 1000)
    assert max(levels) < 2 * p.d_up + F(262, 1000)
