"""Advice tape length against instance size.

Prints, for sigma instances with n = 2^lo .. 2^hi, the oracle tape length, the
chosen precision k and the bound 12*ceil(log2 log2 n) + 48.
"""

from __future__ import annotations

import argparse
import math
import sys

from bincover.adversary import sigma_family, sigma_reference_packing
from bincover.oracle import run_oracle


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--lo", type=int, default=6)
    parser.add_argument("--hi", type=int, default=16)
    parser.add_argument("--j", type=int, default=2)
    args = parser.parse_args(argv)

    print(f"{'n':>7} {'items':>7} {'k':>3} {'bits':>5} {'bound':>6}")
    for e in range(args.lo, args.hi + 1):
        inst = sigma_family(2 ** e, args.j)
        out = run_oracle(inst, sigma_reference_packing(inst))
        bound = 12 * math.ceil(math.log2(math.log2(inst.n))) + 48
        print(f"{2 ** e:>7} {inst.n:>7} {out.record.k:>3} {len(out.tape()):>5} {bound:>6}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
