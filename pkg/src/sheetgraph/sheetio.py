"""Sheet dump format and engine-aware graph building.

A dump is UTF-8 text, one ``address<TAB>content`` record per LF-terminated
line; ``#`` starts a comment line. Content beginning with ``=`` is a
formula, anything else a literal. Records may appear in any order: building
re-sorts them column-major (column ascending, then row ascending) so the
resulting edge set does not depend on file order.
"""

from __future__ import annotations

import os

from .baselines import ContainerGridIndex, UncompressedGraph
from .cells import CellAddr, parse_a1, print_a1
from .formulas import extract_refs
from .graph import CompressedGraph
from .patterns import PatternKind
from .rtree import RTreeIndex

ENGINES = ("taco", "nocomp", "calc")

PATTERNS_ENV = "TACO_PATTERNS"
_PATTERN_NAMES = {
    "rrchain": PatternKind.RR_CHAIN,
    "rr": PatternKind.RR,
    "rf": PatternKind.RF,
    "fr": PatternKind.FR,
    "ff": PatternKind.FF,
}


class SheetError(ValueError):
    """Dump or build rejected; the message cites the line or cell."""


def parse_dump(text: str):
    """Parse dump text into ((addr, content) records, addr -> line map)."""
    cells: list[tuple[CellAddr, str]] = []
    lines: dict[CellAddr, int] = {}
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        addr_text, sep, content = line.partition("\t")
        if not sep:
            raise SheetError(f"line {n}: expected address<TAB>content")
        try:
            addr = parse_a1(addr_text.strip())
        except ValueError as err:
            raise SheetError(f"line {n}: {err}") from err
        if not isinstance(addr, CellAddr):
            raise SheetError(f"line {n}: record address must be a single cell")
        if addr in lines:
            raise SheetError(f"line {n}: duplicate address {addr_text.strip()}")
        lines[addr] = n
        cells.append((addr, content))
    return cells, lines


def format_dump(cells) -> str:
    return "".join(f"{print_a1(addr)}\t{content}\n" for addr, content in cells)


def pattern_subset(names: str | None):
    """Parse the TACO_PATTERNS comma list; None means all patterns."""
    if names is None:
        return None
    subset = []
    for raw in names.split(","):
        name = raw.strip().lower()
        if not name:
            continue
        if name not in _PATTERN_NAMES:
            raise ValueError(
                f"unknown pattern {raw.strip()!r} (choose from {', '.join(_PATTERN_NAMES)})"
            )
        subset.append(_PATTERN_NAMES[name])
    if not subset:
        return None
    return subset


def patterns_from_env() -> list[PatternKind] | None:
    return pattern_subset(os.environ.get(PATTERNS_ENV))


def make_engine(engine: str = "taco", enabled_patterns=None):
    if engine == "taco":
        return CompressedGraph(enabled_patterns)
    if engine == "nocomp":
        return UncompressedGraph(RTreeIndex)
    if engine == "calc":
        return UncompressedGraph(ContainerGridIndex)
    raise ValueError(f"unknown engine {engine!r} (choose from {', '.join(ENGINES)})")


def build_graph(cells, engine: str = "taco", enabled_patterns=None, lines=None):
    """Insert every formula's dependencies column-major into a fresh engine."""
    g = make_engine(engine, enabled_patterns)
    lines = lines or {}
    for addr, content in sorted(cells, key=lambda c: (c[0].i, c[0].j)):
        if not content.startswith("="):
            continue
        try:
            for d in extract_refs(content, addr):
                g.insert_dependency(d)
        except ValueError as err:
            where = f"line {lines[addr]}" if addr in lines else print_a1(addr)
            raise SheetError(f"{where}: {err}") from err
    return g


def load_sheet(path: str, engine: str = "taco", enabled_patterns=None):
    """Read a dump file; returns (records, graph)."""
    with open(path, encoding="utf-8") as fh:
        cells, lines = parse_dump(fh.read())
    return cells, build_graph(cells, engine, enabled_patterns, lines)


def apply_set(graph, cells_map: dict[CellAddr, str], addr: CellAddr, content: str) -> None:
    """Set one cell's content, keeping graph and cell map consistent."""
    deps = extract_refs(content, addr) if content.startswith("=") else []
    graph.update_cell(addr, deps)
    cells_map[addr] = content
