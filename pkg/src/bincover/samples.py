"""Small hand-built instances with known optimal packings.

Items arrive bin by bin in the order the reference packing lists them.
"""

from __future__ import annotations

from fractions import Fraction

from .core import Instance, Packing

# 4 LS bins, 2 LL bins, 3 S bins; OPT = 9
MIXED_BINS = [
    ["0.90", "0.11"],
    ["0.80", "0.22"],
    ["0.60", "0.40"],
    ["0.55", "0.30", "0.15"],
    ["0.53", "0.51"],
    ["0.52", "0.51"],
    ["0.45", "0.35", "0.15", "0.10"],
    ["0.45", "0.25", "0.30"],
    ["0.41", "0.42", "0.20"],
]

# 12 LS bins and one S bin; OPT = 13 (total size 13.07)
RESERVED_BINS = [
    ["0.90", "0.10"],
    ["0.85", "0.16"],
    ["0.78", "0.14", "0.08"],
    ["0.77", "0.12", "0.11"],
    ["0.75", "0.16", "0.09"],
    ["0.74", "0.26"],
    ["0.73", "0.20", "0.08"],
    ["0.71", "0.23", "0.07"],
    ["0.68", "0.15", "0.10", "0.07"],
    ["0.65", "0.24", "0.12"],
    ["0.64", "0.22", "0.07", "0.07"],
    ["0.63", "0.23", "0.15"],
    ["0.25", "0.23", "0.20", "0.15", "0.10", "0.09"],
]


def _build(bins: list[list[str]], label: str) -> tuple[Instance, Packing]:
    items, groups = [], []
    for b in bins:
        groups.append(list(range(len(items), len(items) + len(b))))
        items.extend(Fraction(x) for x in b)
    instance = Instance(tuple(items), label, meta={"opt": len(bins)})
    return instance, Packing.from_bins(instance, groups)


def mixed_example() -> tuple[Instance, Packing]:
    """23 items whose optimum mixes all three bin classes."""
    return _build(MIXED_BINS, "mixed")


def reserved_bin_example() -> tuple[Instance, Packing]:
    """41 items whose optimum is 12 LS bins plus one S bin (beta = 1)."""
    return _build(RESERVED_BINS, "reserved")


SAMPLES = {"mixed": mixed_example, "reserved": reserved_bin_example}
