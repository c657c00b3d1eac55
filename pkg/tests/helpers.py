"""Shared helpers for graph-level tests."""

from __future__ import annotations

from sheetgraph.cells import CellAddr, Range, cell_range
from sheetgraph.sheetio import build_graph
from sheetgraph.workloads import GeneratedSheet, WorkloadSpec, generate


def cells_of(rangeset) -> frozenset:
    out = set()
    for r in rangeset:
        out.update(
            (i, j) for i in range(r.head.i, r.tail.i + 1) for j in range(r.head.j, r.tail.j + 1)
        )
    return frozenset(out)


def workload_graph(kind: str, rows: int, engine: str = "taco", **kw):
    sheet = generate(WorkloadSpec(kind, rows, **kw))
    return sheet, build_graph(sheet.cells, engine)


def used_region(sheet: GeneratedSheet) -> Range:
    addrs = [a for a, _ in sheet.cells]
    return Range(
        CellAddr(min(a.i for a in addrs), min(a.j for a in addrs)),
        CellAddr(max(a.i for a in addrs), max(a.j for a in addrs)),
    )


def assert_query_equivalent(taco, nocomp, region: Range, directions=("deps", "precs")):
    """Every cell of the region answers identically in both engines."""
    for i in range(region.head.i, region.tail.i + 1):
        for j in range(region.head.j, region.tail.j + 1):
            probe = cell_range(CellAddr(i, j))
            if "deps" in directions:
                a = cells_of(taco.find_dependents(probe))
                b = cells_of(nocomp.find_dependents(probe))
                assert a == b, f"dependents({probe}) diverge: {sorted(a ^ b)[:8]}"
            if "precs" in directions:
                a = cells_of(taco.find_precedents(probe))
                b = cells_of(nocomp.find_precedents(probe))
                assert a == b, f"precedents({probe}) diverge: {sorted(a ^ b)[:8]}"
