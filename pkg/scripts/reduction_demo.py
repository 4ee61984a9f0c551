"""Run covering algorithms through the separation reduction.

For each algorithm, reports the separation errors (a1 small values guessed
large, a2 large values guessed small), the bins it covered and the upper bound
implied by those errors.
"""

from __future__ import annotations

import argparse
import sys

from bincover.adversary import (SeparationInstance, covering_upper_bound_from_errors,
                                reduction_reference_packing, run_separation_via_covering,
                                separation_to_covering)
from bincover.online import AdviceCover, DualNextFit, SplitPair
from bincover.oracle import run_oracle


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=32)
    parser.add_argument("--n1", type=int, help="number of large values (default n/2)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    n1 = args.n // 2 if args.n1 is None else args.n1
    sep = SeparationInstance.random(args.n, n1, args.seed)
    inst = separation_to_covering(sep)
    tape = run_oracle(inst, reduction_reference_packing(sep, inst)).tape()
    print(f"n={sep.n} n1={sep.n1} n2={sep.n2} items={inst.n} opt={sep.n}")
    print(f"{'algorithm':>14} {'a1':>4} {'a2':>4} {'covered':>8} {'bound':>8}")
    for algo in (DualNextFit(), SplitPair(), AdviceCover(tape)):
        out = run_separation_via_covering(algo, sep)
        bound = covering_upper_bound_from_errors(out.n1, out.n2, out.a1, out.a2)
        print(f"{algo.name:>14} {out.a1:>4} {out.a2:>4} {out.covered:>8} {str(bound):>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
