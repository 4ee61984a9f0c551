"""Command line entry point: ``bincover <verb> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .adversary import (SeparationInstance, random_instance, separation_to_covering,
                        sigma_family)
from .core import Packing, packing_stats, read_instance, write_instance
from .encoding import AdviceTape
from .harness import ExperimentConfig, emit_report, run_experiment, verify_run
from .online import ALGORITHMS, AdviceCover, OptimalReplay, run
from .oracle import full_advice_tape, run_oracle
from .samples import SAMPLES
from .solver import optimal_cover


def _emit(data, out: str | None) -> None:
    text = json.dumps(data, indent=1)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _reference(args, instance) -> Packing:
    if getattr(args, "packing", None):
        return Packing.load(instance, args.packing)
    return optimal_cover(instance)


def cmd_gen(args) -> int:
    if args.family == "sigma":
        eps = Fraction(args.eps) if args.eps else None
        inst = sigma_family(args.n, args.j, eps, pad=args.pad)
    elif args.family == "random":
        inst = random_instance(args.n, args.dist, args.seed)
    elif args.family == "reduction":
        n1 = args.n1 if args.n1 is not None else args.n // 2
        inst = separation_to_covering(SeparationInstance.random(args.n, n1, args.seed))
    else:
        inst, _ = SAMPLES[args.family]()
    if args.out:
        write_instance(inst, args.out)
    else:
        write_instance(inst, "/dev/stdout")
    return 0


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    packing = optimal_cover(inst)
    stats = packing_stats(inst, packing, covered_only=True)
    print(f"opt={packing.covered_count} m_ls={stats.m_ls} m_ll={stats.m_ll} m_s={stats.m_s}",
          file=sys.stderr)
    _emit(packing.to_json(), args.out)
    return 0


def cmd_advise(args) -> int:
    inst = read_instance(args.instance)
    ref = _reference(args, inst)
    if args.full:
        tape = full_advice_tape(inst, ref)
        _emit({"bits": len(tape), "hex": tape.to_hex()}, args.out)
        return 0
    alpha = Fraction(args.alpha) if args.alpha else None
    oracle = run_oracle(inst, ref, args.k, alpha)
    tape = oracle.tape()
    _emit({"bits": len(tape), "hex": tape.to_hex(), "record": oracle.record.to_json(),
           "derived": oracle.derived.to_json()}, args.out)
    return 0


def cmd_run(args) -> int:
    inst = read_instance(args.instance)
    alpha = Fraction(args.alpha) if args.alpha else None
    if args.algorithm == "advice_cover":
        if args.tape:
            tape = AdviceTape.from_hex(args.tape, args.bits)
        else:
            tape = run_oracle(inst, _reference(args, inst), args.k, alpha).tape()
        algo = AdviceCover(tape, alpha)
    elif args.algorithm == "optimal_replay":
        algo = OptimalReplay(_reference(args, inst).assignment(inst.n))
    else:
        algo = ALGORITHMS[args.algorithm]()
    result = run(algo, inst)
    print(f"{result.algorithm}: covered={result.covered} bits={result.advice_bits_read}",
          file=sys.stderr)
    _emit(result.to_json(), args.out)
    return 0


def cmd_bench(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    if args.workers:
        config.workers = args.workers
    rows = run_experiment(config)
    if config.csv_path:
        emit_report(rows, "csv", config.csv_path)
    if config.json_path:
        emit_report(rows, "json", config.json_path)
    if not (config.csv_path or config.json_path):
        sys.stdout.write(emit_report(rows, "csv"))
    return 0


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    result = json.loads(Path(args.result).read_text())
    problems = verify_run(inst, result)
    for p in problems:
        print(f"FAIL {p}")
    if not problems:
        print(f"ok: {result.get('algorithm')} covered={result.get('covered')}")
    return 1 if problems else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bincover", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen", help="write an instance file")
    p.add_argument("family", choices=["sigma", "random", "reduction", *SAMPLES])
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--eps", help="tiny item size for sigma (power of two below 1/(2n))")
    p.add_argument("--pad", action="store_true", help="pad sigma to 2n items")
    p.add_argument("--dist", default="uniform:1/20:3/5")
    p.add_argument("--n1", type=int, help="large values for reduction (default n/2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="exact optimal covering")
    p.add_argument("instance")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("advise", help="oracle advice tape and decoded record")
    p.add_argument("instance")
    p.add_argument("--packing", help="reference optimal packing (JSON); skips the solver")
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", help="override the client-side alpha, e.g. 1/6")
    p.add_argument("--full", action="store_true", help="emit per-item full advice instead")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_advise)

    p = sub.add_parser("run", help="run one algorithm on one instance")
    p.add_argument("algorithm", choices=sorted(ALGORITHMS))
    p.add_argument("instance")
    p.add_argument("--packing", help="reference optimal packing (JSON)")
    p.add_argument("--tape", help="advice tape as hex (advice_cover)")
    p.add_argument("--bits", type=int, help="tape length in bits, with --tape")
    p.add_argument("--k", type=int)
    p.add_argument("--alpha")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="run an experiment config (JSON)")
    p.add_argument("config")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check invariants of a saved run")
    p.add_argument("instance")
    p.add_argument("result")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tape", None) and args.bits is None:
        args.bits = len(args.tape) * 4
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
