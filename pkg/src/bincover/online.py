"""Online placement engines.

Every algorithm is a stateful object with ``place(size) -> bin index``; the
decision for an item may depend only on the advice tape and the sizes seen so
far.  :func:`run` feeds an instance through an algorithm and returns a
:class:`RunResult`.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import Bin, Instance, Packing, is_large, validate_packing
from .encoding import EASY, AdviceTape, decode_advice
from .oracle import alpha_hat


@dataclass
class RunResult:
    algorithm: str
    packing: Packing
    covered: int
    advice_bits_read: int = 0
    placements: list[int] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "covered": self.covered,
            "advice_bits_read": self.advice_bits_read,
            "placements": list(self.placements),
            "bins": self.packing.groups(),
            "diagnostics": self.diagnostics,
        }


class OnlineAlgorithm:
    name = "online"

    def __init__(self):
        self.levels: list[Fraction] = []
        self.contents: list[list[int]] = []
        self.sizes: list[Fraction] = []
        self.placements: list[int] = []

    def new_bin(self) -> int:
        self.levels.append(Fraction(0))
        self.contents.append([])
        return len(self.levels) - 1

    def place(self, size: Fraction) -> int:
        if type(size) is not Fraction:
            size = Fraction(size)
        b = self.choose(size)
        i = len(self.sizes)
        self.sizes.append(size)
        self.levels[b] += size
        self.contents[b].append(i)
        self.placements.append(b)
        return b

    def choose(self, size: Fraction) -> int:
        raise NotImplementedError

    def advice_bits_read(self) -> int:
        return 0

    def diagnostics(self) -> dict:
        return {}

    def result(self) -> RunResult:
        instance = Instance(tuple(self.sizes))
        packing = Packing.from_assignment(instance, self.placements)
        while len(packing.bins) < len(self.levels):
            packing.bins.append(Bin())
        return RunResult(self.name, packing, packing.covered_count, self.advice_bits_read(),
                         list(self.placements), self.diagnostics())


def run(algorithm: OnlineAlgorithm, instance: Instance, check: bool = True) -> RunResult:
    for size in instance.items:
        algorithm.place(size)
    result = algorithm.result()
    if check:
        problems = validate_packing(instance, result.packing)
        if problems:
            raise AssertionError(f"{algorithm.name} produced an invalid packing: {problems[:5]}")
    return result


class DualNextFit(OnlineAlgorithm):
    """One open bin; it is closed as soon as its level reaches 1."""

    name = "dual_next_fit"

    def __init__(self):
        super().__init__()
        self.open: int | None = None

    def choose(self, size):
        if self.open is None or self.levels[self.open] >= 1:
            self.open = self.new_bin()
        return self.open

    def place(self, size):
        b = super().place(size)
        if self.levels[b] >= 1:
            self.open = None
        return b


class _Stream:
    """A Dual-Next-Fit bin stream living inside another algorithm."""

    def __init__(self, owner: OnlineAlgorithm):
        self.owner = owner
        self.open: int | None = None
        self.bins: list[int] = []

    def target(self) -> int:
        if self.open is None:
            self.open = self.owner.new_bin()
            self.bins.append(self.open)
        return self.open

    def after(self, b: int) -> None:
        if b == self.open and self.owner.levels[b] >= 1:
            self.open = None


class _PairStream:
    """Pairs large items two per bin, keeping at most one bin open."""

    def __init__(self, owner: OnlineAlgorithm):
        self.owner = owner
        self.open: int | None = None
        self.bins: list[int] = []

    def target(self) -> int:
        if self.open is None:
            self.open = self.owner.new_bin()
            self.bins.append(self.open)
            return self.open
        b, self.open = self.open, None
        return b


class SplitPair(OnlineAlgorithm):
    """Large items (>= 1/2) paired in arrival order; small items by Dual-Next-Fit."""

    name = "split_pair"

    def __init__(self):
        super().__init__()
        self.small = _Stream(self)
        self.large = _PairStream(self)

    def choose(self, size):
        if is_large(size):
            return self.large.target()
        return self.small.target()

    def place(self, size):
        b = super().place(size)
        self.small.after(b)
        return b


def dual_worst_fit_place(levels: Sequence[Fraction], item: Fraction | None = None) -> int:
    """Index of a minimum-level bin, lowest index on ties."""
    if not levels:
        raise ValueError("no white bins")
    return min(range(len(levels)), key=lambda i: (levels[i], i))


class OptimalReplay(OnlineAlgorithm):
    """Puts every item in the bin named by full advice."""

    name = "optimal_replay"

    def __init__(self, targets: Sequence[int] | None = None, tape: AdviceTape | None = None):
        super().__init__()
        if (targets is None) == (tape is None):
            raise ValueError("give exactly one of targets or tape")
        self.targets = list(targets) if targets is not None else None
        self.tape = tape
        self.width: int | None = None

    def choose(self, size):
        i = len(self.sizes)
        if self.tape is not None:
            if self.width is None:
                self.width = self.tape.read_gamma() - 1
            t = self.tape.read(self.width)
        else:
            if i >= len(self.targets):
                raise IndexError(f"no advice for item {i}")
            t = self.targets[i]
            if not 0 <= t < len(self.targets):
                raise IndexError(f"target bin {t} out of range for item {i}")
        while len(self.levels) <= t:
            self.new_bin()
        return t

    def advice_bits_read(self):
        return self.tape.bits_read if self.tape is not None else 0


class AdviceCover(OnlineAlgorithm):
    """Reserved-bin algorithm driven by an :class:`AdviceRecord` on a tape.

    EASY advice runs :class:`SplitPair`.  HARD advice opens black and white
    reserved bins and fills the white ones with Dual-Worst-Fit.  Large items
    are routed according to the advised case.
    """

    name = "advice_cover"

    def __init__(self, tape: AdviceTape, alpha: Fraction | None = None):
        super().__init__()
        self.tape = tape
        self.record = decode_advice(tape)
        self.flags: list[str] = []
        self.small = _Stream(self)
        self.pairs = _PairStream(self)
        r = self.record
        if r.mode == EASY:
            return
        self.eps = r.eps
        self.m_ls_down = r.m_ls.down()
        self.m_ll_up = r.m_ll.up()
        self.d_up = r.d.up()
        self.m_b = r.m_b.down()
        self.m_w = r.m_w.down()
        self.m_r = self.m_b + self.m_w
        if r.has_black:
            self.s_b_down, self.s_b_up = r.s_b.down(), r.s_b.up()
            self.e_b_quota = r.e_b.down()
        else:
            self.s_b_down = self.s_b_up = None
            self.e_b_quota = 0
        self.alpha = alpha_hat(self.m_ls_down, self.m_ll_up, r.k) if alpha is None else Fraction(alpha)
        target = int(self.alpha * self.m_ls_down)
        self.case = r.case_id
        if self.case == 3:
            f = self.m_ll_up + self.m_r // 2 + int(self.alpha * self.m_ls_down / 2) - 1
            if f > self.m_r:
                self.flags.append("case3_F_exceeds_reserved")
            self.reserved_quota = min(max(f, 0), self.m_r)
            self.good_target = max(target - 6, 0)
            self.pair_first = 2 * self.m_r
        else:
            self.reserved_quota = self.m_r
            self.good_target = target
            self.pair_first = 0 if self.case == 1 else self.m_r

        self.black_bins = [self.new_bin() for _ in range(self.m_b)]
        self.white_bins = [self.new_bin() for _ in range(self.m_w)]
        self.reserved = self.black_bins + self.white_bins
        self.white_level = {b: Fraction(0) for b in self.white_bins}
        self.white_heap = [(Fraction(0), b) for b in self.white_bins]
        self.white_placed = Fraction(0)
        self.white_cap = 2 * self.d_up * self.m_w
        self.next_black = 0
        self.eb_placed = 0
        self.larges_seen = 0
        self.reserved_larges: list[tuple[Fraction, int, int]] = []  # (size, arrival, bin)
        self.declared: set[int] = set()
        self.declared_done = False
        self.waiting: deque[int] = deque()

    # -- small items ---------------------------------------------------
    def _small(self, size: Fraction) -> int:
        if size >= self.d_up:
            if self.s_b_down is not None and self.next_black < len(self.black_bins):
                if size <= self.s_b_down:
                    return self._take_black()
                if size <= self.s_b_up and self.eb_placed < self.e_b_quota:
                    self.eb_placed += 1
                    return self._take_black()
            return self.small.target()
        if self.white_bins and self.white_placed < self.white_cap:
            level, b = heapq.heappop(self.white_heap)
            heapq.heappush(self.white_heap, (level + size, b))
            self.white_level[b] = level + size
            self.white_placed += size
            return b
        return self.small.target()

    def _take_black(self) -> int:
        b = self.black_bins[self.next_black]
        self.next_black += 1
        return b

    # -- large items ---------------------------------------------------
    def _large(self, size: Fraction) -> int:
        self.larges_seen += 1
        t = self.larges_seen
        if t <= self.pair_first:
            return self.pairs.target()
        if len(self.reserved_larges) < self.reserved_quota and not self.declared_done:
            b = self.reserved[len(self.reserved_larges)]
            self.reserved_larges.append((size, len(self.sizes), b))
            if len(self.reserved_larges) == self.reserved_quota:
                self._declare()
            return b
        if not self.declared_done:
            self._declare()
        if self.waiting:
            return self.waiting.popleft()
        return self.pairs.target()

    def _declare(self) -> None:
        ranked = sorted(self.reserved_larges, key=lambda r: (-r[0], r[1]))
        count = min(self.good_target, len(ranked))
        self.declared = {b for _, _, b in ranked[:count]}
        self.waiting = deque(sorted(b for _, _, b in ranked[count:]))
        self.declared_done = True

    def choose(self, size):
        if self.record.mode == EASY:
            return self.pairs.target() if is_large(size) else self.small.target()
        if is_large(size):
            return self._large(size)
        return self._small(size)

    def place(self, size):
        b = super().place(size)
        self.small.after(b)
        return b

    def advice_bits_read(self):
        return self.tape.bits_read

    def diagnostics(self):
        if self.record.mode == EASY:
            return {"mode": EASY}
        covered = [lv >= 1 for lv in self.levels]
        singles = 0
        for b, members in enumerate(self.contents):
            larges = sum(1 for i in members if is_large(self.sizes[i]))
            if larges == 1 and b not in self.declared:
                singles += 1
        return {
            "mode": "HARD",
            "case": self.case,
            "alpha": str(self.alpha),
            "m_r": self.m_r,
            "eps": str(self.eps),
            "m_ls_down": self.m_ls_down,
            "d_down": str(self.record.d.down()),
            "d_up": str(self.d_up),
            "m_w_down": self.m_w,
            "black_bins": list(self.black_bins),
            "white_bins": list(self.white_bins),
            "black_filled": self.next_black,
            "declared_good": sorted(self.declared),
            "good_covered": sum(1 for b in self.declared if covered[b]),
            "reserved_covered": sum(1 for b in self.reserved if covered[b]),
            "white_levels": [str(self.white_level[b]) for b in self.white_bins],
            "white_placed": str(self.white_placed),
            "singleton_large_bins": singles,
            "declaration_pending": not self.declared_done,
            "flags": list(self.flags),
        }


ALGORITHMS = {
    "dual_next_fit": DualNextFit,
    "split_pair": SplitPair,
    "advice_cover": AdviceCover,
    "optimal_replay": OptimalReplay,
}


def dual_next_fit(instance: Instance) -> RunResult:
    return run(DualNextFit(), instance)


def split_pair(instance: Instance) -> RunResult:
    return run(SplitPair(), instance)


def advice_cover(instance: Instance, tape: AdviceTape, alpha: Fraction | None = None) -> RunResult:
    return run(AdviceCover(tape.rewind(), alpha), instance)


def optimal_replay(instance: Instance, targets: Sequence[int]) -> RunResult:
    return run(OptimalReplay(targets), instance)
