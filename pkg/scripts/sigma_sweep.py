"""Sweep the sigma family and print covered/OPT for each algorithm.

Example: python3 scripts/sigma_sweep.py --n 4096 16384 --j 1 2 4 8 --csv sweep.csv
"""

from __future__ import annotations

import argparse
import sys

from bincover.harness import ExperimentConfig, emit_report, run_experiment


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[4096, 16384, 65536])
    parser.add_argument("--j", type=int, nargs="+", default=[1, 2, 4, 8, 16])
    parser.add_argument("--algorithms", nargs="+",
                        default=["dual_next_fit", "split_pair", "advice_cover"])
    parser.add_argument("--k", type=int)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--csv", help="also write the full report here")
    args = parser.parse_args(argv)

    config = ExperimentConfig(generator="sigma", algorithms=args.algorithms, n_values=args.n,
                              j_values=args.j, k=args.k, workers=args.workers)
    rows = run_experiment(config)
    print(f"{'n':>7} {'j':>3} {'opt':>6}  " + "  ".join(f"{a:>14}" for a in args.algorithms))
    width = len(args.algorithms)
    params = [(n, j) for n in args.n for j in args.j]
    for idx, (n, j) in enumerate(params):
        group = rows[idx * width:(idx + 1) * width]
        cells = "  ".join(f"{float(r.ratio):14.4f}" for r in group)
        print(f"{n:>7} {j:>3} {group[0].opt:>6}  {cells}")
    if args.csv:
        emit_report(rows, "csv", args.csv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
