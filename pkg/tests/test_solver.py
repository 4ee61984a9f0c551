from fractions import Fraction as F

import pytest
from hypothesis import given

from bincover.adversary import random_instance, sigma_family
from bincover.core import Instance, validate_packing
from bincover.samples import mixed_example, reserved_bin_example
from bincover.solver import OracleLimitError, minimal_covers, optimal_cover, optimal_value

from conftest import item_lists
from oracles import brute_force_partition_opt, exhaustive_opt


def test_three_halves():
    assert optimal_value(Instance((F(1, 2),) * 3)) == 1


def test_sigma_small():
    assert optimal_value(sigma_family(12, 3, F(1, 256))) == 4
    assert optimal_value(sigma_family(8, 2, F(1, 32))) == 4


def test_mixed_example_by_search():
    inst, _ = mixed_example()
    p = optimal_cover(inst)
    assert p.covered_count == 9
    assert validate_packing(inst, p) == []


def test_reserved_example_by_search():
    inst, _ = reserved_bin_example()
    assert optimal_value(inst) == 13


def test_empty():
    p = optimal_cover(Instance(()))
    assert p.bins == [] and p.covered_count == 0


def test_budget_exhausted():
    inst = random_instance(30, "uniform:1/20:1/2", 3)
    with pytest.raises(OracleLimitError, match="sigma"):
        optimal_cover(inst, budget=10)


def test_deterministic():
    inst = random_instance(12, "uniform:1/20:3/5", 7)
    assert optimal_cover(inst).groups() == optimal_cover(inst).groups()


def test_minimal_covers_are_minimal():
    weights, cap = [5, 3, 4, 2, 6], 8
    for group in minimal_covers(weights, cap):
        for mask in group:
            members = [i for i in range(5) if mask >> i & 1]
            total = sum(weights[i] for i in members)
            assert total >= cap
            assert all(total - weights[i] < cap for i in members)


@given(item_lists(max_size=5, max_den=12))
def test_dp_matches_brute_force(items):
    assert optimal_value(Instance(tuple(items))) == brute_force_partition_opt(items)


@given(item_lists(max_size=11, max_den=40))
def test_search_matches_dp(items):
    inst = Instance(tuple(items))
    by_search = optimal_cover(inst, limit=0)
    assert validate_packing(inst, by_search) == []
    assert by_search.covered_count == optimal_value(inst) == exhaustive_opt(items)
