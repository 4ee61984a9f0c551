"""Exact maximum covering for small instances.

Two engines work on integer sizes over the common denominator:

* subset DP, used up to :data:`DP_LIMIT` items;
* a depth-first search that asks "can ``U`` bins be covered?" for ``U`` from
  the volume bound downwards, pruning on wasted volume.  It is exact when it
  finishes and gives up after a node budget.
"""

from __future__ import annotations

import math
import sys
from functools import reduce

from .core import Instance, Packing

DP_LIMIT = 18
SEARCH_BUDGET = 2_000_000


class OracleLimitError(RuntimeError):
    pass


def integer_sizes(instance: Instance) -> tuple[list[int], int]:
    denom = reduce(math.lcm, (x.denominator for x in instance.items), 1)
    return [x.numerator * (denom // x.denominator) for x in instance.items], denom


def minimal_covers(weights: list[int], cap: int) -> list[list[int]]:
    """All inclusion-minimal index sets with total >= cap, grouped by lowest index.

    ``result[i]`` holds bitmasks whose lowest member is ``i``, in lexicographic
    order of their sorted members.
    """
    n = len(weights)
    by_low: list[list[int]] = [[] for _ in range(n)]

    def extend(mask: int, low: int, last: int, total: int, smallest: int) -> None:
        for j in range(last + 1, n):
            t = total + weights[j]
            m = mask | (1 << j)
            s = min(smallest, weights[j])
            if t >= cap:
                if t - s < cap:
                    by_low[low].append(m)
            else:
                extend(m, low, j, t, s)

    for i in range(n):
        if weights[i] >= cap:
            by_low[i].append(1 << i)
        else:
            extend(1 << i, i, i, weights[i], weights[i])
    return by_low


def _dp_cover(weights: list[int], cap: int) -> list[int]:
    n = len(weights)
    covers = minimal_covers(weights, cap)
    memo: dict[int, tuple[int, int]] = {0: (0, 0)}
    total_of = {}

    def total(mask: int) -> int:
        t = total_of.get(mask)
        if t is None:
            t = sum(weights[i] for i in range(n) if mask >> i & 1)
            total_of[mask] = t
        return t

    def best(mask: int) -> int:
        hit = memo.get(mask)
        if hit is not None:
            return hit[0]
        low = (mask & -mask).bit_length() - 1
        bound = total(mask) // cap
        value, choice = -1, 0
        for t in covers[low]:
            if t & mask == t:
                v = 1 + best(mask ^ t)
                if v > value:
                    value, choice = v, t
                    if value == bound:
                        break
        if value < bound:
            v = best(mask ^ (1 << low))
            if v > value:
                value, choice = v, 0
        memo[mask] = (value, choice)
        return value

    full = (1 << n) - 1
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * n + 100))
    try:
        best(full)
    finally:
        sys.setrecursionlimit(limit)
    bins = []
    mask = full
    while mask:
        _, choice = memo[mask]
        if choice:
            bins.append(choice)
            mask ^= choice
        else:
            mask ^= mask & -mask
    return bins


def _search_cover(weights: list[int], cap: int, budget: int) -> list[int] | None:
    """Largest-first exact search; returns bin masks or None when over budget."""
    n = len(weights)
    order = sorted(range(n), key=lambda i: (-weights[i], i))
    total = sum(weights)
    nodes = 0

    class OverBudget(Exception):
        pass

    def feasible(target: int) -> list[int] | None:
        slack = total - target * cap
        chosen: list[int] = []

        def rec(remaining: list[int], need: int, waste: int) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                raise OverBudget
            if need == 0:
                return True
            if not remaining:
                return False
            if sum(weights[i] for i in remaining) < need * cap:
                return False
            first, rest = remaining[0], remaining[1:]
            # open a bin around the largest remaining item
            for members, level in _completions(first, rest, cap, slack - waste):
                chosen.append(members)
                left = [i for i in rest if not members >> i & 1]
                if rec(left, need - 1, waste + level - cap):
                    return True
                chosen.pop()
            if waste + weights[first] <= slack:
                return rec(rest, need, waste + weights[first])
            return False

        def _completions(first, rest, cap, allowance):
            start = weights[first]
            if start >= cap:
                if start - cap <= allowance:
                    yield 1 << first, start
                return
            acc = []

            def grow(pos, level, mask):
                if level >= cap:
                    if level - cap <= allowance and level - weights[acc[-1]] < cap:
                        yield mask, level
                    return
                prev = None
                for p in range(pos, len(rest)):
                    i = rest[p]
                    if weights[i] == prev:
                        continue
                    prev = weights[i]
                    acc.append(i)
                    yield from grow(p + 1, level + weights[i], mask | (1 << i))
                    acc.pop()

            yield from grow(0, start, 1 << first)

        if rec(order, target, 0):
            return list(chosen)
        return None

    try:
        for target in range(total // cap, 0, -1):
            found = feasible(target)
            if found is not None:
                return found
        return []
    except OverBudget:
        return None


def optimal_cover(instance: Instance, limit: int = DP_LIMIT,
                  budget: int = SEARCH_BUDGET) -> Packing:
    """A maximum-coverage packing of ``instance``.

    Items left over after the covered bins are appended to the last bin, so the
    packing has ``max(OPT, 1)`` bins for a nonempty instance.
    """
    if instance.n == 0:
        return Packing()
    weights, cap = integer_sizes(instance)
    if instance.n <= limit:
        masks = _dp_cover(weights, cap)
    else:
        masks = _search_cover(weights, cap, budget)
        if masks is None:
            raise OracleLimitError(
                f"instance {instance.label!r} with n={instance.n} is beyond the exact "
                f"solver; use a generator family with known OPT (e.g. sigma)")
    groups = [sorted(i for i in range(instance.n) if m >> i & 1) for m in masks]
    used = set().union(*groups) if groups else set()
    leftover = [i for i in range(instance.n) if i not in used]
    if not groups:
        groups = [leftover]
    else:
        groups[-1].extend(leftover)
    return Packing.from_bins(instance, groups)


def optimal_value(instance: Instance, **kw) -> int:
    return optimal_cover(instance, **kw).covered_count
