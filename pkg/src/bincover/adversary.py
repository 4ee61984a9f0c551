"""Hard instance families and the separation-to-covering reduction."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Sequence

from .core import Instance, Packing
from .online import OnlineAlgorithm


def default_eps(n: int) -> Fraction:
    """Largest power of two strictly below 1/(2n)."""
    return Fraction(1, 1 << ((2 * n).bit_length()))


def _check_eps(eps: Fraction, n: int) -> Fraction:
    eps = Fraction(eps)
    if eps <= 0 or eps >= Fraction(1, 2 * n):
        raise ValueError(f"eps={eps} must lie in (0, 1/(2n)) for n={n}")
    if eps.numerator != 1 or eps.denominator & (eps.denominator - 1):
        raise ValueError(f"eps={eps} must be a power of two")
    return eps


def sigma_family(n: int, j: int, eps: Fraction | None = None, pad: bool = False) -> Instance:
    """``n`` items of size eps followed by ``n // j`` items of size ``1 - j*eps``.

    The optimum puts ``j`` tiny items under every big one, so OPT is ``n // j``;
    it is stored in ``meta["opt"]``.  With ``pad`` the sequence is extended to
    ``2n`` items with filler too small to matter.

    The lower-bound family uses ``1 <= j <= isqrt(n)`` (see :func:`sigma_js`);
    the optimum formula holds for every ``j <= n``, so that is all we enforce.
    """
    if n < 1 or not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n; got n={n}, j={j}")
    eps = _check_eps(eps if eps is not None else default_eps(n), n)
    big = 1 - j * eps
    items = [eps] * n + [big] * (n // j)
    if pad:
        filler = eps / (4 * n)
        items += [filler] * (2 * n - len(items))
    return Instance(tuple(items), f"sigma_n{n}_j{j}",
                    meta={"family": "sigma", "n": n, "j": j, "eps": eps, "opt": n // j})


def sigma_js(n: int) -> list[int]:
    """The family's index range ``1 .. floor(sqrt(n))``."""
    return list(range(1, isqrt(n) + 1))


def sigma_reference_packing(instance: Instance) -> Packing:
    """The optimal packing of a sigma instance: ``j`` tiny items per big item."""
    n, j = instance.meta["n"], instance.meta["j"]
    m = n // j
    groups = [list(range(b * j, (b + 1) * j)) + [n + b] for b in range(m)]
    rest = [i for i in range(m * j, instance.n) if not n <= i < n + m]
    groups[-1].extend(rest)
    return Packing.from_bins(instance, groups)


# -- binary separation --------------------------------------------------------

@dataclass(frozen=True)
class SeparationInstance:
    values: tuple[Fraction, ...]
    labels: tuple[bool, ...]  # True = large

    def __post_init__(self):
        if len(self.values) != len(self.labels):
            raise ValueError("values and labels differ in length")
        if any(v <= 0 for v in self.values):
            raise ValueError("values must be positive")
        large = [v for v, l in zip(self.values, self.labels) if l]
        small = [v for v, l in zip(self.values, self.labels) if not l]
        if large and small and min(large) <= max(small):
            raise ValueError("every large value must exceed every small value")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def n1(self) -> int:
        return sum(self.labels)

    @property
    def n2(self) -> int:
        return self.n - self.n1

    @classmethod
    def random(cls, n: int, n1: int, seed: int = 0) -> "SeparationInstance":
        rng = random.Random(seed)
        threshold = Fraction(rng.randint(10, 90), 10)
        labels = [True] * n1 + [False] * (n - n1)
        rng.shuffle(labels)
        values = []
        for l in labels:
            u = Fraction(rng.randint(1, 999), 1000)
            values.append(threshold + u if l else threshold * u)
        return cls(tuple(values), tuple(labels))


def separation_map(eps: Fraction) -> Callable[[Fraction], Fraction]:
    """Increasing map from positive rationals into ``(eps, 2*eps)``."""
    eps = Fraction(eps)
    return lambda y: eps * (1 + Fraction(y) / (1 + Fraction(y)))


def separation_to_covering(sep: SeparationInstance, eps: Fraction | None = None) -> Instance:
    """The full covering sequence of the reduction (``2n`` items).

    One huge item ``1 - eps`` per small value, then ``f(y)`` for every value in
    order, then ``1 - f(y)`` for every large value in arrival order.
    """
    eps = _check_eps(eps if eps is not None else default_eps(sep.n), sep.n)
    f = separation_map(eps)
    items = [1 - eps] * sep.n2 + [f(y) for y in sep.values]
    items += [1 - f(y) for y, l in zip(sep.values, sep.labels) if l]
    return Instance(tuple(items), f"reduction_n{sep.n}_n1{sep.n1}",
                    meta={"family": "reduction", "n1": sep.n1, "n2": sep.n2, "eps": eps,
                          "opt": sep.n})


def reduction_reference_packing(sep: SeparationInstance, instance: Instance) -> Packing:
    """Huge item with a small-value item; large-value item with its complement."""
    h = sep.n2
    groups = []
    huge = iter(range(h))
    comp = h + sep.n
    for t, l in enumerate(sep.labels):
        if l:
            groups.append([h + t, comp])
            comp += 1
        else:
            groups.append([next(huge), h + t])
    return Packing.from_bins(instance, groups)


@dataclass
class SeparationOutcome:
    guesses: list[bool]
    a1: int
    a2: int
    covered: int
    n1: int
    n2: int
    placements: list[int] = field(default_factory=list)

    @property
    def errors(self) -> int:
        return self.a1 + self.a2

    def to_json(self) -> dict:
        return {"guesses": ["large" if g else "small" for g in self.guesses],
                "a1": self.a1, "a2": self.a2, "errors": self.errors,
                "covered": self.covered, "n1": self.n1, "n2": self.n2}


class ReductionAdapter:
    """Drives an online covering algorithm with a separation instance.

    The covering algorithm only ever sees item sizes.  The separation side
    learns a value's true label after it has committed to a guess.
    """

    def __init__(self, algorithm: OnlineAlgorithm, n: int, n1: int, eps: Fraction | None = None):
        self.algorithm = algorithm
        self.n, self.n1 = n, n1
        self.eps = _check_eps(eps if eps is not None else default_eps(n), n)
        self.f = separation_map(self.eps)
        self.huge_bins: set[int] = set()
        self.guesses: list[bool] = []
        self.revealed: list[bool] = []
        self.large_items: list[Fraction] = []
        for _ in range(n - n1):
            self.huge_bins.add(algorithm.place(1 - self.eps))

    def guess(self, y: Fraction) -> bool:
        """Present ``f(y)``; guess small iff it landed in a bin holding a huge item."""
        size = self.f(y)
        b = self.algorithm.place(size)
        large = b not in self.huge_bins
        self.guesses.append(large)
        self._pending = size
        return large

    def reveal(self, is_large_value: bool) -> None:
        self.revealed.append(is_large_value)
        if is_large_value:
            self.large_items.append(self._pending)

    def finish(self) -> None:
        for size in self.large_items:
            self.algorithm.place(1 - size)


def run_separation_via_covering(algorithm: OnlineAlgorithm, sep: SeparationInstance,
                                eps: Fraction | None = None) -> SeparationOutcome:
    adapter = ReductionAdapter(algorithm, sep.n, sep.n1, eps)
    for y, label in zip(sep.values, sep.labels):
        adapter.guess(y)
        adapter.reveal(label)
    adapter.finish()
    result = algorithm.result()
    a1 = sum(1 for g, l in zip(adapter.guesses, sep.labels) if not l and g)
    a2 = sum(1 for g, l in zip(adapter.guesses, sep.labels) if l and not g)
    return SeparationOutcome(adapter.guesses, a1, a2, result.covered, sep.n1, sep.n2,
                             result.placements)


def covering_upper_bound_from_errors(n1: int, n2: int, a1: int, a2: int,
                                     relaxed: bool = False) -> Fraction:
    """Most bins any algorithm can cover after ``a1 + a2`` separation mistakes."""
    if min(n1, n2, a1, a2) < 0:
        raise ValueError("counts must be nonnegative")
    a1, a2 = Fraction(a1), Fraction(a2)
    if relaxed:
        return n1 + n2 - (a1 + a2) / 8
    return ((n1 - a1) + (n2 - a2) + min(a1, a2) + min(a1 / 2, a2)
            + (max(a1 - a2, 0) + max(a2 - a1 / 2, 0)) / 2)


# -- random instances ---------------------------------------------------------

GRID = 10_000


def _parse_dist(spec: str) -> tuple[str, list[Fraction]]:
    name, *args = spec.split(":")
    try:
        values = [Fraction(a) for a in args]
    except ValueError as exc:
        raise ValueError(f"bad distribution spec {spec!r}") from exc
    arity = {"uniform": 2, "bimodal": 5, "dyadic": 1}
    if name not in arity or len(values) != arity[name]:
        raise ValueError(f"bad distribution spec {spec!r}; expected one of "
                         "uniform:lo:hi, bimodal:slo:shi:llo:lhi:ratio, dyadic:k")
    return name, values


def _uniform(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction:
    a = max(1, int(lo * GRID))
    b = min(GRID, int(hi * GRID))
    if a > b:
        raise ValueError(f"empty range [{lo}, {hi}]")
    return Fraction(rng.randint(a, b), GRID)


def random_instance(n: int, dist: str, seed: int) -> Instance:
    """Reproducible random instance.

    ``dist`` is ``uniform:lo:hi``, ``bimodal:slo:shi:llo:lhi:ratio`` (ratio is
    the probability of drawing from the large range) or ``dyadic:k`` (uniform
    on multiples of ``2**-k`` below 1).
    """
    name, args = _parse_dist(dist)
    rng = random.Random(f"{dist}/{n}/{seed}")
    if name == "uniform":
        items = [_uniform(rng, *args) for _ in range(n)]
    elif name == "bimodal":
        slo, shi, llo, lhi, ratio = args
        items = [_uniform(rng, llo, lhi) if rng.random() < ratio else _uniform(rng, slo, shi)
                 for _ in range(n)]
    else:
        k = int(args[0])
        if k < 1:
            raise ValueError("dyadic grid needs k >= 1")
        items = [Fraction(rng.randint(1, (1 << k) - 1) if k > 1 else 1, 1 << k)
                 for _ in range(n)]
    return Instance(tuple(items), f"{name}_n{n}_s{seed}", meta={"family": "random", "dist": dist})


ORDERS = ("given", "shuffle", "small_first", "large_first", "ascending", "descending")


def _split(rng: random.Random, total: int, parts: int, cap: int) -> list[int]:
    """``parts`` positive integers below ``cap`` summing to ``total``."""
    while True:
        cuts = sorted(rng.sample(range(1, total), parts - 1))
        pieces = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        if max(pieces) < cap:
            return pieces


def planted_instance(m_ls: int, m_ll: int, m_s: int, seed: int = 0,
                     order: str = "shuffle") -> tuple[Instance, Packing]:
    """Instance built from a known optimal packing with the given class counts.

    LS and S bins have level exactly 1 and LL bins overshoot by a total of at
    most 1/2, so the item total is below ``m + 1`` and the planted packing is
    optimal by the volume bound.  ``order`` is one of :data:`ORDERS`.
    """
    if min(m_ls, m_ll, m_s) < 0:
        raise ValueError("bin counts must be nonnegative")
    if order not in ORDERS:
        raise ValueError(f"unknown order {order!r}; choose from {ORDERS}")
    rng = random.Random(f"planted/{m_ls}/{m_ll}/{m_s}/{seed}")
    q = 1000
    bins: list[list[Fraction]] = []
    for _ in range(m_ls):
        large = rng.randint(q // 2, 19 * q // 20)
        rest = q - large
        parts = rng.randint(max(1, 2 if rest >= q // 2 else 1), min(3, rest))
        bins.append([Fraction(large, q)] + [Fraction(x, q) for x in _split(rng, rest, parts, q // 2)]
                    if parts > 1 else [Fraction(large, q), Fraction(rest, q)])
    slack = 4 * max(m_ll, 1)
    for _ in range(m_ll):
        bins.append([Fraction(1, 2) + Fraction(rng.randint(0, q), q * slack) for _ in range(2)])
    for _ in range(m_s):
        bins.append([Fraction(x, q) for x in _split(rng, q, rng.randint(3, 6), q // 2)])
    flat = [(x, b) for b, group in enumerate(bins) for x in group]
    if order == "shuffle":
        rng.shuffle(flat)
    elif order == "small_first":
        flat.sort(key=lambda t: t[0] >= Fraction(1, 2))
    elif order == "large_first":
        flat.sort(key=lambda t: t[0] < Fraction(1, 2))
    elif order == "ascending":
        flat.sort(key=lambda t: t[0])
    elif order == "descending":
        flat.sort(key=lambda t: -t[0])
    m = len(bins)
    instance = Instance(tuple(x for x, _ in flat), f"planted_{m_ls}_{m_ll}_{m_s}_s{seed}_{order}",
                        meta={"family": "planted", "opt": m})
    groups: list[list[int]] = [[] for _ in range(m)]
    for i, (_, b) in enumerate(flat):
        groups[b].append(i)
    return instance, Packing.from_bins(instance, groups)


def covered_from_placements(sizes: Sequence[Fraction], placements: Sequence[int]) -> int:
    levels: dict[int, Fraction] = {}
    for s, b in zip(sizes, placements):
        levels[b] = levels.get(b, Fraction(0)) + s
    return sum(1 for v in levels.values() if v >= 1)
