"""Deterministic benchmark sheet generators and summary statistics.

Three synthetic sheets exercise the compression patterns directly:

* runtotalfast: running total where every formula adds the cell to its
  left and the formula above (sliding references, chain along column B).
* runtotalslow: the same totals computed as ``SUM($A$1:Ai)`` (anchored
  head, growing tail).
* rate: a column multiplied by one fixed rate cell.

``modifyslowtofast`` is runtotalslow plus an edit script that rewrites a
prefix of column B into the fast form. ``randompatterned`` builds seeded
sheets out of per-column pattern templates with a configurable share of
outlier cells for the property suites.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from statistics import fmean

from .cells import MAX_ROW, CellAddr, col_letters

RUN_TOTAL_FAST = "runtotalfast"
RUN_TOTAL_SLOW = "runtotalslow"
RATE = "rate"
MODIFY_SLOW_TO_FAST = "modifyslowtofast"
RANDOM_PATTERNED = "randompatterned"

KINDS = (RUN_TOTAL_FAST, RUN_TOTAL_SLOW, RATE, MODIFY_SLOW_TO_FAST, RANDOM_PATTERNED)

# uniform templates for randompatterned columns, with the edge count each
# reference column compresses to when no outliers are injected
TEMPLATES = {
    "rr": 1,
    "rr_window": 1,
    "rf": 1,
    "fr": 1,
    "ff": 1,
    "chain": 2,
}


@dataclass(frozen=True, slots=True)
class WorkloadSpec:
    kind: str
    rows: int
    modify_rows: int = 0
    seed: int = 0
    outlier_pct: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown workload kind {self.kind!r}")
        if not 1 <= self.rows <= MAX_ROW:
            raise ValueError(f"rows must be in 1..{MAX_ROW}, got {self.rows}")
        if not 0 <= self.modify_rows <= self.rows:
            raise ValueError("modify_rows must be in 0..rows")
        if not 0.0 <= self.outlier_pct <= 1.0:
            raise ValueError("outlier_pct must be in 0..1")


@dataclass(frozen=True, slots=True)
class GeneratedSheet:
    cells: list[tuple[CellAddr, str]]
    edits: list[tuple[CellAddr, str]] = field(default_factory=list)
    templates: tuple[str, ...] = ()


def _fast_formula(i: int) -> str:
    return "=A1" if i == 1 else f"=A{i}+B{i - 1}"


def generate(spec: WorkloadSpec) -> GeneratedSheet:
    rows = spec.rows
    if spec.kind == RUN_TOTAL_FAST:
        cells = [(CellAddr(1, j), "1") for j in range(1, rows + 1)]
        cells += [(CellAddr(2, j), _fast_formula(j)) for j in range(1, rows + 1)]
        return GeneratedSheet(cells)

    if spec.kind in (RUN_TOTAL_SLOW, MODIFY_SLOW_TO_FAST):
        cells = [(CellAddr(1, j), "1") for j in range(1, rows + 1)]
        cells += [(CellAddr(2, j), f"=SUM($A$1:A{j})") for j in range(1, rows + 1)]
        edits = []
        if spec.kind == MODIFY_SLOW_TO_FAST:
            last = min(spec.modify_rows + 1, rows)
            edits = [(CellAddr(2, j), _fast_formula(j)) for j in range(2, last + 1)]
        return GeneratedSheet(cells, edits)

    if spec.kind == RATE:
        cells = [(CellAddr(1, 1), "0.07")]
        cells += [(CellAddr(2, j), "100") for j in range(1, rows + 1)]
        cells += [(CellAddr(3, j), f"=B{j}*$A$1") for j in range(1, rows + 1)]
        return GeneratedSheet(cells)

    return _random_patterned(spec)


def _random_patterned(spec: WorkloadSpec) -> GeneratedSheet:
    rng = random.Random(spec.seed)
    rows = spec.rows
    n_pairs = rng.randint(2, 5)
    templates = tuple(rng.choice(sorted(TEMPLATES)) for _ in range(n_pairs))
    width = 2 * n_pairs

    cells: list[tuple[CellAddr, str]] = []
    formulas: list[tuple[CellAddr, str]] = []
    for k, template in enumerate(templates):
        data_col, formula_col = 2 * k + 1, 2 * k + 2
        x, f = col_letters(data_col), col_letters(formula_col)
        for j in range(1, rows + 1):
            cells.append((CellAddr(data_col, j), str(rng.randint(1, 99))))
        if template == "rr":
            formulas += [(CellAddr(formula_col, j), f"={x}{j}*2") for j in range(1, rows + 1)]
        elif template == "rr_window":
            formulas += [
                (CellAddr(formula_col, j), f"=SUM({x}{j - 1}:{x}{j})") for j in range(2, rows + 1)
            ]
        elif template == "rf":
            formulas += [
                (CellAddr(formula_col, j), f"=SUM({x}{j}:${x}${rows})") for j in range(1, rows + 1)
            ]
        elif template == "fr":
            formulas += [
                (CellAddr(formula_col, j), f"=SUM(${x}$1:{x}{j})") for j in range(1, rows + 1)
            ]
        elif template == "ff":
            hi = rng.randint(1, rows)
            formulas += [
                (CellAddr(formula_col, j), f"=SUM(${x}$1:${x}${hi})") for j in range(1, rows + 1)
            ]
        else:  # chain
            formulas.append((CellAddr(formula_col, 1), f"={x}1"))
            formulas += [(CellAddr(formula_col, j), f"={f}{j - 1}+1") for j in range(2, rows + 1)]

    if spec.outlier_pct:
        for k, (addr, _) in enumerate(formulas):
            if rng.random() < spec.outlier_pct:
                while True:
                    target = CellAddr(rng.randint(1, width), rng.randint(1, rows))
                    if target != addr:
                        break
                formulas[k] = (addr, f"={col_letters(target.i)}{target.j}")

    return GeneratedSheet(cells + formulas, templates=templates)


def percentiles(samples) -> dict[str, float]:
    """Nearest-rank max/p75/median (lower) plus the arithmetic mean."""
    values = sorted(samples)
    if not values:
        raise ValueError("empty sample")
    n = len(values)

    def nearest_rank(p: float) -> float:
        return values[max(0, math.ceil(p / 100 * n) - 1)]

    return {
        "max": values[-1],
        "p75": nearest_rank(75),
        "median": nearest_rank(50),
        "mean": fmean(values),
    }
