"""Compression pattern kernels.

Each pattern describes how a run of adjacent formula cells relates to the
ranges they reference, using a constant-size meta record:

* RR (sliding window): both precedent corners sit at fixed offsets from the
  formula cell.
* RF (shrinking window): head corner at a fixed offset, tail corner pinned.
* FR (expanding window): head corner pinned, tail corner at a fixed offset.
* FF (fixed window): both corners pinned.
* RRChain: RR whose formula cells reference their immediately adjacent
  formula cell, forming a dependency chain along the run.
* Single: an uncompressed edge.

Every kernel implements four key functions -- try_compress, find_dep,
find_prec, remove_dep -- in time independent of how many dependencies the
edge represents. Compressed dependent runs are always 1-wide (a single
column or a single row); the row-wise math is the i/j transposition of the
column-wise case.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .cells import COLUMN, ROW, CellAddr, Offset, Range, bbox, cell_range, subtract
from .formulas import Dependency


class PatternKind(Enum):
    SINGLE = "Single"
    RR_CHAIN = "RRChain"
    RR = "RR"
    RF = "RF"
    FR = "FR"
    FF = "FF"

    def __str__(self) -> str:
        return self.value


# Chain directions name where the referenced cell sits relative to each
# formula cell: ABOVE/BELOW for column runs, LEFT/RIGHT for row runs.
ABOVE = "ABOVE"
BELOW = "BELOW"
LEFT = "LEFT"
RIGHT = "RIGHT"

_CHAIN_OFFSETS = {
    COLUMN: {Offset(0, -1): ABOVE, Offset(0, 1): BELOW},
    ROW: {Offset(-1, 0): LEFT, Offset(1, 0): RIGHT},
}
# Chains whose cells reference backward propagate dependents toward the
# run's tail; forward-referencing chains propagate toward the head.
_TAILWARD_DIRS = frozenset({ABOVE, LEFT})


@dataclass(frozen=True, slots=True)
class PatternMeta:
    """Constant-size reconstruction data; unused fields stay None."""

    h_rel: Offset | None = None
    h_fix: CellAddr | None = None
    t_rel: Offset | None = None
    t_fix: CellAddr | None = None
    chain_dir: str | None = None
    axis: str = COLUMN


EMPTY_META = PatternMeta()


@dataclass(frozen=True, slots=True, eq=False)
class CompressedEdge:
    """(prec, dep, pattern, meta) plus the number of dependencies covered.

    Identity semantics: two edges with equal fields are still distinct graph
    members (duplicate Single edges are legal).
    """

    prec: Range
    dep: Range
    pattern: PatternKind
    meta: PatternMeta
    count: int


def single_edge(d: Dependency) -> CompressedEdge:
    return CompressedEdge(d.prec, cell_range(d.dep), PatternKind.SINGLE, EMPTY_META, 1)


def rel(d: Dependency) -> tuple[Offset, Offset]:
    """Relative positions of the precedent's corners from the formula cell."""
    return d.prec.head - d.dep, d.prec.tail - d.dep


def _edge_rel(e: CompressedEdge) -> tuple[Offset, Offset]:
    # rel() of a Single edge; its dep is a one-cell range
    c = e.dep.head
    return e.prec.head - c, e.prec.tail - c


def _merge(e: CompressedEdge, d: Dependency, kind: PatternKind, meta: PatternMeta) -> CompressedEdge:
    return CompressedEdge(
        bbox(e.prec, d.prec), bbox(e.dep, cell_range(d.dep)), kind, meta, e.count + 1
    )


# --- try_compress -----------------------------------------------------------
#
# The caller (the graph's insertion step) guarantees d.dep is adjacent to
# e.dep along `axis` and that extending e.dep by d.dep keeps a 1-wide run.
# Each kernel only decides pattern compatibility: when e is Single it
# compares the rel/fixedness of both single edges and mints a fresh pattern
# edge of count 2; when e already carries the kernel's pattern it extends.


def _rr_compress(e, d, axis):
    hr, tr = rel(d)
    if e.pattern is PatternKind.SINGLE:
        if _edge_rel(e) != (hr, tr):
            return None
        meta = PatternMeta(h_rel=hr, t_rel=tr, axis=axis)
    else:
        if (e.meta.h_rel, e.meta.t_rel) != (hr, tr):
            return None
        meta = e.meta
    return _merge(e, d, PatternKind.RR, meta)


def _rf_compress(e, d, axis):
    hr, _ = rel(d)
    if e.pattern is PatternKind.SINGLE:
        ehr, _ = _edge_rel(e)
        if ehr != hr or e.prec.tail != d.prec.tail:
            return None
        meta = PatternMeta(h_rel=hr, t_fix=d.prec.tail, axis=axis)
    else:
        if hr != e.meta.h_rel or d.prec.tail != e.meta.t_fix:
            return None
        meta = e.meta
    return _merge(e, d, PatternKind.RF, meta)


def _fr_compress(e, d, axis):
    _, tr = rel(d)
    if e.pattern is PatternKind.SINGLE:
        _, etr = _edge_rel(e)
        if etr != tr or e.prec.head != d.prec.head:
            return None
        meta = PatternMeta(h_fix=d.prec.head, t_rel=tr, axis=axis)
    else:
        if tr != e.meta.t_rel or d.prec.head != e.meta.h_fix:
            return None
        meta = e.meta
    return _merge(e, d, PatternKind.FR, meta)


def _ff_compress(e, d, axis):
    if e.pattern is PatternKind.SINGLE:
        if e.prec != d.prec:
            return None
        meta = PatternMeta(h_fix=d.prec.head, t_fix=d.prec.tail, axis=axis)
    else:
        if d.prec.head != e.meta.h_fix or d.prec.tail != e.meta.t_fix:
            return None
        meta = e.meta
    return _merge(e, d, PatternKind.FF, meta)


def _chain_compress(e, d, axis):
    hr, tr = rel(d)
    if hr != tr or hr not in _CHAIN_OFFSETS[axis]:
        return None
    if e.pattern is PatternKind.SINGLE:
        if _edge_rel(e) != (hr, tr):
            return None
        meta = PatternMeta(h_rel=hr, t_rel=tr, chain_dir=_CHAIN_OFFSETS[axis][hr], axis=axis)
    else:
        if hr != e.meta.h_rel:
            return None
        meta = e.meta
    return _merge(e, d, PatternKind.RR_CHAIN, meta)


COMPRESSORS = {
    PatternKind.RR_CHAIN: _chain_compress,
    PatternKind.RR: _rr_compress,
    PatternKind.RF: _rf_compress,
    PatternKind.FR: _fr_compress,
    PatternKind.FF: _ff_compress,
}

# Candidate/tiebreak order: special pattern first, then its general form.
HEURISTIC_ORDER = [
    PatternKind.RR_CHAIN,
    PatternKind.RR,
    PatternKind.FR,
    PatternKind.RF,
    PatternKind.FF,
]


def try_compress(e: CompressedEdge, d: Dependency, kind: PatternKind, axis: str) -> CompressedEdge | None:
    """Attempt to absorb dependency d into edge e under one pattern."""
    return COMPRESSORS[kind](e, d, axis)


# --- find_dep ---------------------------------------------------------------


def _clip(hi: int, hj: int, ti: int, tj: int, dep: Range) -> Range | None:
    hi = max(hi, dep.head.i)
    hj = max(hj, dep.head.j)
    ti = min(ti, dep.tail.i)
    tj = min(tj, dep.tail.j)
    if hi > ti or hj > tj:
        return None
    return Range(CellAddr(hi, hj), CellAddr(ti, tj))


def find_dep(e: CompressedEdge, r: Range) -> Range | None:
    """Direct dependents of r within e, for r contained in e.prec.

    The head of the result is back-calculated from the invariant that r's
    top row (column axis) must intersect the bottom row of the head cell's
    precedent window, and dually for the tail. For RRChain the result also
    covers the within-edge transitive dependents, saving re-traversal.
    """
    kind = e.pattern
    if kind is PatternKind.SINGLE or kind is PatternKind.FF:
        return e.dep

    meta = e.meta
    prec, dep = e.prec, e.dep
    col = meta.axis == COLUMN

    if kind is PatternKind.RF:
        hr = meta.h_rel
        d_h = dep.head
        if col:
            ti, tj = prec.head.i - hr.p, r.tail.j - hr.q
        else:
            ti, tj = r.tail.i - hr.p, prec.head.j - hr.q
        return _clip(d_h.i, d_h.j, ti, tj, dep)

    if kind is PatternKind.FR:
        tr = meta.t_rel
        d_t = dep.tail
        if col:
            hi, hj = prec.tail.i - tr.p, r.head.j - tr.q
        else:
            hi, hj = r.head.i - tr.p, prec.tail.j - tr.q
        return _clip(hi, hj, d_t.i, d_t.j, dep)

    # RR and RRChain
    hr, tr = meta.h_rel, meta.t_rel
    if col:
        hi, hj = prec.tail.i - tr.p, r.head.j - tr.q
        ti, tj = prec.head.i - hr.p, r.tail.j - hr.q
    else:
        hi, hj = r.head.i - tr.p, prec.tail.j - tr.q
        ti, tj = r.tail.i - hr.p, prec.head.j - hr.q
    if kind is PatternKind.RR_CHAIN:
        if meta.chain_dir in _TAILWARD_DIRS:
            ti, tj = dep.tail.i, dep.tail.j
        else:
            hi, hj = dep.head.i, dep.head.j
    return _clip(hi, hj, ti, tj, dep)


# --- find_prec --------------------------------------------------------------


def _direct_prec(e: CompressedEdge, s: Range) -> Range:
    # Bounding union of the precedent windows of the cells in s.
    kind, meta = e.pattern, e.meta
    if kind is PatternKind.SINGLE or kind is PatternKind.FF:
        return e.prec
    if kind is PatternKind.RF:
        return Range(s.head + meta.h_rel, meta.t_fix)
    if kind is PatternKind.FR:
        return Range(meta.h_fix, s.tail + meta.t_rel)
    return Range(s.head + meta.h_rel, s.tail + meta.t_rel)  # RR / RRChain direct


def find_prec(e: CompressedEdge, s: Range) -> Range:
    """Precedents of s within e, for s contained in e.dep.

    For RRChain the result is the within-edge transitive precedent prefix,
    dual to its find_dep.
    """
    if e.pattern is PatternKind.RR_CHAIN:
        if e.meta.chain_dir in _TAILWARD_DIRS:
            return Range(e.prec.head, s.tail + e.meta.t_rel)
        return Range(s.head + e.meta.h_rel, e.prec.tail)
    return _direct_prec(e, s)


# --- remove_dep -------------------------------------------------------------


def remove_dep(e: CompressedEdge, s: Range) -> list[CompressedEdge]:
    """Drop the dependencies of the formula cells s (contained in e.dep).

    Each remaining run becomes its own edge: precedent rebuilt from the
    direct windows, pattern demoted to Single when one cell remains, meta
    preserved otherwise.
    """
    out = []
    for new_dep in subtract(e.dep, s):
        new_prec = _direct_prec(e, new_dep)
        if new_dep.is_cell:
            out.append(CompressedEdge(new_prec, new_dep, PatternKind.SINGLE, EMPTY_META, 1))
        else:
            out.append(CompressedEdge(new_prec, new_dep, e.pattern, e.meta, new_dep.area))
    return out


# --- reconstruction ---------------------------------------------------------


def window(e: CompressedEdge, c: CellAddr) -> Range:
    """The precedent window of one dependent cell c of e."""
    kind, meta = e.pattern, e.meta
    if kind is PatternKind.SINGLE or kind is PatternKind.FF:
        return e.prec
    if kind is PatternKind.RF:
        return Range(c + meta.h_rel, meta.t_fix)
    if kind is PatternKind.FR:
        return Range(meta.h_fix, c + meta.t_rel)
    return Range(c + meta.h_rel, c + meta.t_rel)


def decompress(e: CompressedEdge) -> list[tuple[Range, CellAddr]]:
    """Enumerate the uncompressed (prec, dep) pairs the edge represents."""
    return [(window(e, c), c) for c in e.dep.cells()]


def run_axis(dep: Range) -> str:
    """Orientation of a 1-wide dependent run (column for a single cell)."""
    if dep.head.i == dep.tail.i:
        return COLUMN
    if dep.head.j == dep.tail.j:
        return ROW
    raise ValueError(f"dependent range {dep} is not a 1-wide run")
