"""Benchmark sweeps over the instance families.

Runs saturation and DPLL across a depth range, records one row per
(family, k, repetition), and fits log-log scaling exponents of work
against instance size.  Fits are reported together with their residuals;
nothing here asserts a growth rate.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, fields
from typing import Callable, Iterable, Sequence

from .forge import (
    Closing,
    TreeSpec,
    build_binary_tree,
    build_pair_chain,
    build_unit_chain,
    build_binomial_tree,
    compose_two_trees,
)
from .formula import CnfFormula
from .oracle import dpll_sat
from .resolution import Budget, saturate

# Sweep budgets are deliberately small: a sweep probes growth trends, and
# budget exhaustion is an honest recorded status, not a failure.
SWEEP_MAX_CLAUSES = 20_000
SWEEP_MAX_STEPS = 200_000

FAMILIES: dict[str, Callable[[int], CnfFormula]] = {
    "unit-chain": build_unit_chain,
    "pair-chain": build_pair_chain,
    "binary": build_binary_tree,
    "binomial": lambda k: build_binomial_tree(TreeSpec(k=k)),
    "compose-matched": lambda k: compose_two_trees(k, Closing.MATCHED),
    "compose-crossed": lambda k: compose_two_trees(k, Closing.CROSSED),
}


@dataclass(frozen=True)
class BenchRecord:
    family: str
    k: int
    repetition: int
    variables: int
    clauses: int
    saturation_status: str
    saturation_steps: int
    derived_clauses: int
    saturation_seconds: float
    dpll_verdict: str
    dpll_nodes: int
    dpll_seconds: float
    seed: int


COLUMNS: tuple[str, ...] = tuple(f.name for f in fields(BenchRecord))
_FLOAT_COLUMNS = frozenset(("saturation_seconds", "dpll_seconds"))
_STR_COLUMNS = frozenset(("family", "saturation_status", "dpll_verdict"))


def default_sweep_budget() -> Budget:
    return Budget(max_clauses=SWEEP_MAX_CLAUSES, max_steps=SWEEP_MAX_STEPS)


def run_one(family: str, k: int, repetition: int, budget: Budget, seed: int) -> BenchRecord:
    """Build one instance and time saturation and DPLL on it.  A failure in
    either phase is recorded in the corresponding status column."""
    try:
        formula = FAMILIES[family](k)
    except Exception as exc:
        label = f"error:{type(exc).__name__}"
        return BenchRecord(family, k, repetition, 0, 0, label, 0, 0, 0.0, label, 0, 0.0, seed)

    start = time.perf_counter()
    try:
        res = saturate(formula, budget)
        sat_status = str(res.status)
        sat_steps = res.counters.steps
        derived = len(res.derived)
    except Exception as exc:
        sat_status = f"error:{type(exc).__name__}"
        sat_steps = 0
        derived = 0
    sat_seconds = time.perf_counter() - start

    start = time.perf_counter()
    try:
        verdict = dpll_sat(formula)
        dpll_verdict = str(verdict.status)
        dpll_nodes = verdict.nodes
    except Exception as exc:
        dpll_verdict = f"error:{type(exc).__name__}"
        dpll_nodes = 0
    dpll_seconds = time.perf_counter() - start

    return BenchRecord(
        family=family,
        k=k,
        repetition=repetition,
        variables=formula.num_vars,
        clauses=len(formula.clauses),
        saturation_status=sat_status,
        saturation_steps=sat_steps,
        derived_clauses=derived,
        saturation_seconds=sat_seconds,
        dpll_verdict=dpll_verdict,
        dpll_nodes=dpll_nodes,
        dpll_seconds=dpll_seconds,
        seed=seed,
    )


def run_sweep(
    families: Sequence[str],
    k_range: Iterable[int],
    budget: Budget | None = None,
    repetitions: int = 1,
    seed: int = 0,
) -> list[BenchRecord]:
    ks = list(k_range)
    if not families:
        raise ValueError("no families given")
    if not ks:
        raise ValueError("empty k range")
    if repetitions < 1:
        raise ValueError(f"repetitions must be positive, got {repetitions}")
    unknown = [f for f in families if f not in FAMILIES]
    if unknown:
        raise ValueError(f"unknown families: {', '.join(unknown)}")
    if budget is None:
        budget = default_sweep_budget()

    records = []
    for family in families:
        for k in ks:
            for rep in range(repetitions):
                records.append(run_one(family, k, rep, budget, seed))
    return records


def export_csv(records: Sequence[BenchRecord], path: str) -> None:
    if not records:
        raise ValueError("no records to export")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for record in records:
            writer.writerow([getattr(record, name) for name in COLUMNS])


def parse_csv(path: str) -> list[BenchRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != list(COLUMNS):
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for row in reader:
            values = {}
            for name in COLUMNS:
                raw = row[name]
                if name in _STR_COLUMNS:
                    values[name] = raw
                elif name in _FLOAT_COLUMNS:
                    values[name] = float(raw)
                else:
                    values[name] = int(raw)
            records.append(BenchRecord(**values))
    return records


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of y ~ scale * x**exponent on log-log axes;
    residual is the root-mean-square misfit of log10(y)."""

    exponent: float
    scale: float
    residual: float
    points: int


def fit_power_law(points: Sequence[tuple[float, float]]) -> PowerLawFit | None:
    usable = [(x, y) for x, y in points if x > 0 and y > 0]
    if len({x for x, _ in usable}) < 2:
        return None
    logs = [(math.log10(x), math.log10(y)) for x, y in usable]
    n = len(logs)
    mean_x = sum(lx for lx, _ in logs) / n
    mean_y = sum(ly for _, ly in logs) / n
    var_x = sum((lx - mean_x) ** 2 for lx, _ in logs)
    cov = sum((lx - mean_x) * (ly - mean_y) for lx, ly in logs)
    slope = cov / var_x
    intercept = mean_y - slope * mean_x
    misfit = sum((ly - (intercept + slope * lx)) ** 2 for lx, ly in logs)
    return PowerLawFit(
        exponent=slope,
        scale=10.0 ** intercept,
        residual=math.sqrt(misfit / n),
        points=n,
    )


def _fit_line(label: str, fit: PowerLawFit | None) -> str:
    if fit is None:
        return f"  {label}: not enough positive points to fit"
    return (
        f"  {label} ~ {fit.scale:.3g} * n^{fit.exponent:.2f}"
        f"  (rms log10 residual {fit.residual:.3f}, {fit.points} points)"
    )


def summarize(records: Sequence[BenchRecord]) -> str:
    """Plain-text report: one block per family with verdicts and the two
    scaling fits (derived clauses and DPLL nodes, both against variable
    count)."""
    if not records:
        raise ValueError("no records to summarize")
    lines = []
    for family in dict.fromkeys(r.family for r in records):
        rows = [r for r in records if r.family == family]
        ks = sorted({r.k for r in rows})
        verdicts = sorted({r.dpll_verdict for r in rows})
        statuses = sorted({r.saturation_status for r in rows})
        lines.append(
            f"family {family}: k {ks[0]}..{ks[-1]}, {len(rows)} runs, "
            f"dpll verdicts [{', '.join(verdicts)}], "
            f"saturation statuses [{', '.join(statuses)}]"
        )
        lines.append(_fit_line(
            "derived clauses",
            fit_power_law([(r.variables, r.derived_clauses) for r in rows]),
        ))
        lines.append(_fit_line(
            "dpll nodes    ",
            fit_power_law([(r.variables, r.dpll_nodes) for r in rows]),
        ))
    return "\n".join(lines)


def write_scatter_svg(records: Sequence[BenchRecord], path: str) -> None:
    """Log-log scatter of per-run work against variable count: circles for
    DPLL nodes, squares for derived clauses."""
    if not records:
        raise ValueError("no records to plot")
    width, height, margin = 640, 480, 60
    node_pts = [(r.variables, r.dpll_nodes) for r in records if r.variables > 0 and r.dpll_nodes > 0]
    derived_pts = [(r.variables, r.derived_clauses) for r in records if r.variables > 0 and r.derived_clauses > 0]
    all_pts = node_pts + derived_pts
    if not all_pts:
        raise ValueError("no positive data points to plot")

    min_x = min(math.log10(x) for x, _ in all_pts)
    max_x = max(math.log10(x) for x, _ in all_pts)
    min_y = min(math.log10(y) for _, y in all_pts)
    max_y = max(math.log10(y) for _, y in all_pts)
    span_x = (max_x - min_x) or 1.0
    span_y = (max_y - min_y) or 1.0

    def sx(x: float) -> float:
        return margin + (math.log10(x) - min_x) / span_x * (width - 2 * margin)

    def sy(y: float) -> float:
        return height - margin - (math.log10(y) - min_y) / span_y * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<text x="{width // 2}" y="{height - margin // 4}" text-anchor="middle" '
        f'font-size="13">variables (log scale)</text>',
        f'<text x="{margin // 4}" y="{height // 2}" font-size="13" '
        f'transform="rotate(-90 {margin // 4} {height // 2})" '
        f'text-anchor="middle">work (log scale)</text>',
    ]
    for power in range(math.floor(min_x), math.floor(max_x) + 1):
        x = 10.0 ** power
        if min_x <= power <= max_x:
            parts.append(
                f'<text x="{sx(x):.1f}" y="{height - margin + 16}" '
                f'text-anchor="middle" font-size="11">1e{power}</text>'
            )
    for power in range(math.floor(min_y), math.floor(max_y) + 1):
        y = 10.0 ** power
        if min_y <= power <= max_y:
            parts.append(
                f'<text x="{margin - 6}" y="{sy(y):.1f}" '
                f'text-anchor="end" font-size="11">1e{power}</text>'
            )
    for x, y in node_pts:
        parts.append(f'<circle cx="{sx(x):.1f}" cy="{sy(y):.1f}" r="3.5" fill="steelblue"/>')
    for x, y in derived_pts:
        parts.append(
            f'<rect x="{sx(x) - 3:.1f}" y="{sy(y) - 3:.1f}" width="6" height="6" fill="darkorange"/>'
        )
    parts.append(
        f'<circle cx="{width - margin - 150}" cy="{margin}" r="3.5" fill="steelblue"/>'
        f'<text x="{width - margin - 140}" y="{margin + 4}" font-size="12">dpll nodes</text>'
        f'<rect x="{width - margin - 153}" y="{margin + 15}" width="6" height="6" fill="darkorange"/>'
        f'<text x="{width - margin - 140}" y="{margin + 22}" font-size="12">derived clauses</text>'
    )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
