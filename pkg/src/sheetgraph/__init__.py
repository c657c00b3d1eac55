"""Pattern-compressed spreadsheet formula dependency graphs.

The compressed engine stores runs of structurally similar dependencies as
constant-size edges, answers dependents/precedents queries directly on the
compressed form, and maintains the graph incrementally under edits.
Uncompressed reference engines, benchmark workload generators, a CLI, and
an HTTP trace service ship alongside.
"""

from .cells import (
    COLUMN,
    ROW,
    A1ParseError,
    CellAddr,
    GridBoundsError,
    Offset,
    Range,
    adjacent,
    bbox,
    cell_range,
    contains,
    intersect,
    parse_a1,
    parse_range,
    print_a1,
    shift,
    subtract,
)
from .formulas import Dependency, FixednessHints, FormulaError, extract_refs
from .patterns import (
    CompressedEdge,
    PatternKind,
    PatternMeta,
    decompress,
    find_dep,
    find_prec,
    rel,
    remove_dep,
    try_compress,
)
from .graph import CompressedGraph, GraphImportError, GraphStats, SelfReferenceError
from .baselines import ContainerGridIndex, UncompressedGraph
from .rangeset import RangeSet
from .rtree import RTreeIndex
from .workloads import GeneratedSheet, WorkloadSpec, generate, percentiles
from .sheetio import ENGINES, SheetError, build_graph, format_dump, load_sheet, parse_dump

import types as _types

__all__ = [
    name
    for name, value in list(globals().items())
    if not name.startswith("_") and not isinstance(value, _types.ModuleType)
]
