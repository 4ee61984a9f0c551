"""Exact data model for bin covering: items and packings with their statistics.

Sizes are :class:`fractions.Fraction` values in ``(0, 1]``.  Nothing in this
module touches floating point, so the covered test ``level >= 1`` is exact even
on boundary cases.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

Size = Fraction

ONE = Fraction(1)
HALF = Fraction(1, 2)


class PackingError(ValueError):
    pass


def make_size(value) -> Fraction:
    """Parse ``value`` (str, int or Fraction) into a validated exact size.

    Decimal literals are read exactly, so ``"0.53"`` becomes ``53/100``.
    Floats are rejected; they have already lost the exact value.
    """
    if type(value) is Fraction and 0 < value <= 1:
        return value
    if isinstance(value, float):
        raise TypeError("float sizes are not accepted; pass a string or Fraction")
    size = Fraction(value.strip()) if isinstance(value, str) else Fraction(value)
    if not (0 < size <= 1):
        raise ValueError(f"size {size} outside (0, 1]")
    return size


def is_large(size: Fraction) -> bool:
    # integer test; avoids Fraction comparison overhead in hot loops
    return 2 * size.numerator >= size.denominator


@dataclass(frozen=True)
class Instance:
    """An online request sequence; item order is the arrival order."""

    items: tuple[Fraction, ...]
    label: str = ""
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(make_size(x) for x in self.items))

    @property
    def n(self) -> int:
        return len(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def total(self) -> Fraction:
        return sum(self.items, Fraction(0))

    def prefix(self, i: int, label: str | None = None) -> "Instance":
        return Instance(self.items[:i], label if label is not None else self.label)


@dataclass
class Bin:
    item_indices: list[int] = field(default_factory=list)
    level: Fraction = field(default_factory=Fraction)

    def add(self, index: int, size: Fraction) -> None:
        self.item_indices.append(index)
        self.level += size

    def __len__(self) -> int:
        return len(self.item_indices)


@dataclass
class Packing:
    bins: list[Bin] = field(default_factory=list)
    placement: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_bins(cls, instance: Instance, groups: Iterable[Sequence[int]]) -> "Packing":
        packing = cls()
        for group in groups:
            packing.bins.append(Bin())
            b = len(packing.bins) - 1
            for i in group:
                packing.place(instance, i, b)
        return packing

    @classmethod
    def from_assignment(cls, instance: Instance, targets: Sequence[int]) -> "Packing":
        packing = cls()
        for i, b in enumerate(targets):
            packing.place(instance, i, b)
        return packing

    def place(self, instance: Instance, index: int, b: int) -> None:
        while len(self.bins) <= b:
            self.bins.append(Bin())
        self.bins[b].add(index, instance.items[index])
        self.placement[index] = b

    def groups(self) -> list[list[int]]:
        return [list(b.item_indices) for b in self.bins]

    @property
    def covered_count(self) -> int:
        return sum(1 for b in self.bins if is_covered(b))

    def assignment(self, n: int) -> list[int]:
        return [self.placement[i] for i in range(n)]

    def to_json(self) -> dict:
        return {"bins": self.groups(), "covered": self.covered_count}

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, instance: Instance, path: str | Path) -> "Packing":
        data = json.loads(Path(path).read_text())
        return cls.from_bins(instance, data["bins"])


class BinClass(str, Enum):
    LS = "LS"
    LL = "LL"
    S = "S"
    OTHER = "Other"


def is_covered(bin: Bin) -> bool:
    return bin.level >= 1


def classify_bin(bin: Bin, instance: Instance) -> BinClass:
    """LS: one large plus smalls; LL: exactly two larges; S: smalls only.

    A lone large item, or three or more larges, falls into ``OTHER``.
    """
    if not bin.item_indices:
        raise PackingError("cannot classify an empty bin")
    large = sum(1 for i in bin.item_indices if is_large(instance.items[i]))
    small = len(bin.item_indices) - large
    if large == 0:
        return BinClass.S
    if large == 1 and small >= 1:
        return BinClass.LS
    if large == 2 and small == 0:
        return BinClass.LL
    return BinClass.OTHER


def validate_packing(instance: Instance, packing: Packing) -> list[str]:
    """Return the list of violations; an empty list means the packing is valid."""
    problems = []
    seen = Counter()
    for b, bin in enumerate(packing.bins):
        for i in bin.item_indices:
            if not 0 <= i < instance.n:
                problems.append(f"unknown item {i} in bin {b}")
                continue
            seen[i] += 1
            if packing.placement.get(i) != b:
                problems.append(f"placement of item {i} does not point at bin {b}")
        level = sum((instance.items[i] for i in bin.item_indices if 0 <= i < instance.n),
                    Fraction(0))
        if level != bin.level:
            problems.append(f"level mismatch at bin {b}")
    for i in range(instance.n):
        if seen[i] == 0:
            problems.append(f"item {i} unplaced")
        elif seen[i] > 1:
            problems.append(f"item {i} placed {seen[i]} times")
    extra = set(packing.placement) - set(range(instance.n))
    for i in sorted(extra):
        problems.append(f"placement names unknown item {i}")
    recount = sum(1 for bin in packing.bins
                  if sum((instance.items[i] for i in bin.item_indices
                          if 0 <= i < instance.n), Fraction(0)) >= 1)
    if recount != packing.covered_count:
        problems.append(f"covered count mismatch: stored levels give {packing.covered_count}, "
                        f"items give {recount}")
    return problems


@dataclass(frozen=True)
class PackingStats:
    m_ls: int
    m_ll: int
    m_s: int
    other: int
    covered: int

    @property
    def beta(self) -> Fraction | None:
        if self.m_ls == 0:
            return None
        return Fraction(self.m_ls + self.m_ll, self.m_ls)


def packing_stats(instance: Instance, packing: Packing, covered_only: bool = False) -> PackingStats:
    """Count bins per class.  Empty bins are skipped.

    With ``covered_only`` the class counts include covered bins only, which is
    the view the advice oracle takes of a reference packing.
    """
    counts = Counter()
    covered = 0
    for bin in packing.bins:
        if not bin.item_indices:
            continue
        c = is_covered(bin)
        covered += c
        if covered_only and not c:
            continue
        counts[classify_bin(bin, instance)] += 1
    return PackingStats(
        m_ls=counts[BinClass.LS],
        m_ll=counts[BinClass.LL],
        m_s=counts[BinClass.S],
        other=counts[BinClass.OTHER],
        covered=covered,
    )


def fill_profile(packing: Packing, n: int | None = None) -> list[int]:
    """``m[i-1]`` is the number of bins holding at least ``i`` items."""
    counts = Counter(len(b) for b in packing.bins)
    if n is None:
        n = sum(len(b) for b in packing.bins)
    profile, running = [0] * n, 0
    for i in range(max(counts, default=0), 0, -1):
        running += counts[i]
        if i <= n:
            profile[i - 1] = running
    return profile


def read_instance(path: str | Path, label: str | None = None) -> Instance:
    """Read one size per line; ``# key=value`` comment lines become metadata."""
    items, meta = [], {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if line.startswith("#"):
            key, eq, value = line[1:].strip().partition("=")
            if eq and key.strip().isidentifier():
                value = value.strip()
                meta[key.strip()] = int(value) if value.lstrip("-").isdigit() else value
            continue
        if line:
            items.append(make_size(line))
    return Instance(tuple(items), label if label is not None else Path(path).stem, meta=meta)


def format_size(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def write_instance(instance: Instance, path: str | Path) -> None:
    lines = [f"# {instance.label}" if instance.label else "# instance", f"# items={instance.n}"]
    for k, v in sorted(instance.meta.items()):
        if isinstance(v, (int, str, Fraction)):
            lines.append(f"# {k}={v}")
    lines.extend(format_size(x) for x in instance.items)
    Path(path).write_text("\n".join(lines) + "\n")
