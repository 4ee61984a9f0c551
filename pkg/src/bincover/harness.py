"""Experiment configuration, report rows and run verification."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .adversary import (SeparationInstance, random_instance, reduction_reference_packing,
                        separation_to_covering, sigma_family, sigma_js,
                        sigma_reference_packing)
from .core import Instance, Packing, is_large, validate_packing
from .oracle import run_oracle
from .online import ALGORITHMS, AdviceCover, OptimalReplay, run
from .samples import SAMPLES
from .solver import DP_LIMIT, optimal_cover

EXACT, ANALYTIC = "exact", "analytic"
PAIRING_C = 8
COLUMNS = ["label", "n", "algorithm", "covered", "opt", "ratio", "ratio_decimal",
           "advice_bits", "runtime_ms", "diagnostics"]


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """One sweep.

    ``generator`` is ``sigma``, ``reduction``, ``sample:<name>`` or
    ``random:<dist>`` (see :func:`bincover.adversary.random_instance`).
    """

    generator: str = "sigma"
    algorithms: list[str] = field(default_factory=lambda: ["dual_next_fit", "advice_cover"])
    n_values: list[int] = field(default_factory=lambda: [4096])
    j_values: list[int] | None = None  # sigma only; default 1..floor(sqrt(n))
    repetitions: int = 1
    seed: int = 0
    opt_source: str = ANALYTIC
    k: int | None = None
    alpha: str | None = None
    workers: int = 1
    csv_path: str | None = None
    json_path: str | None = None

    def __post_init__(self):
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ConfigError(f"unknown algorithms {unknown}; choose from {sorted(ALGORITHMS)}")
        if self.opt_source not in (EXACT, ANALYTIC):
            raise ConfigError(f"opt_source must be {EXACT!r} or {ANALYTIC!r}")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be positive")

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        data = json.loads(Path(path).read_text())
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        return cls(**data)


@dataclass
class ReportRow:
    label: str
    n: int
    algorithm: str
    covered: int
    opt: int
    ratio: Fraction | None
    advice_bits: int
    runtime_ms: float
    diagnostics: dict = field(default_factory=dict)
    placements: list[int] = field(default_factory=list)

    def cells(self) -> dict:
        ratio = self.ratio
        return {
            "label": self.label,
            "n": self.n,
            "algorithm": self.algorithm,
            "covered": self.covered,
            "opt": self.opt,
            "ratio": "" if ratio is None else f"{ratio.numerator}/{ratio.denominator}",
            "ratio_decimal": "" if ratio is None else f"{float(ratio):.6f}",
            "advice_bits": self.advice_bits,
            "runtime_ms": f"{self.runtime_ms:.1f}",
            "diagnostics": json.dumps(self.diagnostics, sort_keys=True),
        }


# -- instance generation ---------------------------------------------------

def generate(config: ExperimentConfig) -> list[tuple[Instance, Packing | None]]:
    """Instances in a stable order, each with a reference packing when one is known."""
    out = []
    kind, _, rest = config.generator.partition(":")
    for n in config.n_values:
        for rep in range(config.repetitions):
            seed = config.seed + rep
            if kind == "sigma":
                js = config.j_values or sigma_js(n)
                for j in js:
                    inst = sigma_family(n, j)
                    out.append((inst, sigma_reference_packing(inst)))
            elif kind == "reduction":
                sep = SeparationInstance.random(n, n // 2, seed)
                inst = separation_to_covering(sep)
                out.append((inst, reduction_reference_packing(sep, inst)))
            elif kind == "sample":
                if rest not in SAMPLES:
                    raise ConfigError(f"unknown sample {rest!r}; choose from {sorted(SAMPLES)}")
                out.append(SAMPLES[rest]())
            elif kind == "random":
                out.append((random_instance(n, rest, seed), None))
            else:
                raise ConfigError(f"unknown generator {config.generator!r}")
    return out


def _reference(instance: Instance, reference: Packing | None, opt_source: str) -> Packing:
    if opt_source == EXACT:
        if instance.n > DP_LIMIT:
            raise ConfigError(f"instance {instance.label!r} has n={instance.n}, beyond the "
                              f"exact solver limit {DP_LIMIT}; use opt_source 'analytic'")
        return optimal_cover(instance)
    if reference is None:
        raise ConfigError(f"OPT unavailable for instance {instance.label!r}: "
                          "its generator has no analytic optimum")
    return reference


def _run_instance(args) -> list[ReportRow]:
    instance, reference, config = args
    ref = _reference(instance, reference, config.opt_source)
    opt = ref.covered_count
    alpha = Fraction(config.alpha) if config.alpha is not None else None
    oracle = None
    rows = []
    for name in config.algorithms:
        start = time.perf_counter()
        if name == "advice_cover":
            if oracle is None:
                oracle = run_oracle(instance, ref, config.k, alpha)
            algo = AdviceCover(oracle.tape(), alpha)
        elif name == "optimal_replay":
            algo = OptimalReplay(ref.assignment(instance.n))
        else:
            algo = ALGORITHMS[name]()
        result = run(algo, instance)
        elapsed = (time.perf_counter() - start) * 1000
        rows.append(ReportRow(instance.label, instance.n, name, result.covered, opt,
                              Fraction(result.covered, opt) if opt else None,
                              result.advice_bits_read, elapsed, result.diagnostics,
                              result.placements))
    return rows


def run_experiment(config: ExperimentConfig) -> list[ReportRow]:
    """Run every configured algorithm on every generated instance.

    Rows come out ordered by instance then algorithm, whatever the worker count.
    """
    tasks = [(inst, ref, config) for inst, ref in generate(config)]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            chunks = list(pool.map(_run_instance, tasks))
    else:
        chunks = [_run_instance(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def emit_report(rows: list[ReportRow], fmt: str = "csv", path: str | Path | None = None,
                include_runtime: bool = True) -> str:
    """Render rows as CSV or JSON; write to ``path`` when given and return the text."""
    if not rows:
        raise ValueError("no rows to report")
    columns = COLUMNS if include_runtime else [c for c in COLUMNS if c != "runtime_ms"]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n",
                                extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.cells())
        text = buf.getvalue()
    elif fmt == "json":
        records = []
        for row in rows:
            cells = row.cells()
            cells["diagnostics"] = row.diagnostics
            cells["placements"] = row.placements
            records.append({c: cells[c] for c in columns + ["placements"]})
        text = json.dumps(records, indent=1) + "\n"
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


# -- verification ----------------------------------------------------------

def verify_run(instance: Instance, result: dict) -> list[str]:
    """Invariant checks on a serialized :class:`RunResult`; empty list means all hold."""
    problems = []
    placements = result.get("placements", [])
    if len(placements) != instance.n:
        return [f"placement log has {len(placements)} entries for {instance.n} items"]
    packing = Packing.from_assignment(instance, placements)
    problems += validate_packing(instance, packing)
    if packing.covered_count != result.get("covered"):
        problems.append(f"covered {result.get('covered')} but log gives {packing.covered_count}")
    if "bins" in result:
        logged = [g for g in result["bins"] if g]
        if logged != [g for g in packing.groups() if g]:
            problems.append("bin lists disagree with the placement log")
    algo = result.get("algorithm")
    diag = result.get("diagnostics", {})
    if algo == "dual_next_fit":
        problems += _check_dual_next_fit(packing)
    if diag.get("mode") == "HARD":
        problems += check_hard_invariants(instance, packing, diag)
    return problems


def _check_dual_next_fit(packing: Packing) -> list[str]:
    problems = []
    open_bins = [b for b, bin in enumerate(packing.bins) if bin.item_indices and bin.level < 1]
    if len(open_bins) > 1:
        problems.append(f"{len(open_bins)} bins below level 1")
    for b, bin in enumerate(packing.bins):
        if bin.level >= 2:
            problems.append(f"bin {b} overfilled to {bin.level}")
    return problems


def check_hard_invariants(instance: Instance, packing: Packing, diag: dict,
                          d: Fraction | None = None) -> list[str]:
    """Reserved-bin invariants of an advice run.

    ``d`` is the true threshold when known; otherwise the lower bound carried
    in the diagnostics is used.
    """
    problems = []
    declared = set(diag.get("declared_good", []))
    for b in declared:
        if packing.bins[b].level < 1:
            problems.append(f"declared-good reserved bin {b} not covered")
    eps = Fraction(diag["eps"])
    singles = 0
    for b, bin in enumerate(packing.bins):
        larges = sum(1 for i in bin.item_indices if is_large(instance.items[i]))
        if larges == 1 and b not in declared:
            singles += 1
    bound = PAIRING_C * eps * diag["m_ls_down"] + 1
    if singles > bound:
        problems.append(f"{singles} singleton-large bins exceed {bound}")
    d = Fraction(diag["d_down"]) if d is None else d
    d_up = Fraction(diag["d_up"])
    white = list(diag.get("white_bins", []))
    white_levels = [Fraction(x) for x in diag.get("white_levels", [])]
    placed = Fraction(diag.get("white_placed", "0"))
    if white and not (all(lv >= d for lv in white_levels)
                      or placed < 2 * d * diag["m_w_down"]):
        problems.append("white bins below d although white admission stopped")
    if white:
        white_items = [instance.items[i] for b in white for i in packing.bins[b].item_indices
                       if instance.items[i] < d_up]
        biggest = max(white_items, default=Fraction(0))
        # the receiving bin is a minimum-level one, and that minimum is below
        # the admission cap averaged over the white bins
        for b, lv in zip(white, white_levels):
            if lv >= 2 * d_up + biggest:
                problems.append(f"white bin {b} white level {lv} exceeds overfill bound")
    return problems

