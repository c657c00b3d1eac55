"""The compressed formula dependency graph.

Dependencies are inserted one at a time. Each insertion looks for edges
whose dependent run is adjacent to the new formula cell, asks every enabled
pattern kernel whether the dependency fits, and greedily merges with the
best candidate (column-wise compression first, special patterns before
general ones, then dollar-sign cues). Dependents/precedents queries run
directly on the compressed edges via the kernels' find functions inside a
modified BFS; clearing cells rewrites only the touched edges.

The graph also tracks the uncompressed totals (raw edge and vertex counts)
so compression ratios and per-pattern reductions are O(|E|) to report.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass

from .cells import (
    COLUMN,
    ROW,
    CellAddr,
    Offset,
    Range,
    bbox,
    cell_range,
    contains,
    in_grid,
    intersect,
    parse_range,
    print_a1,
)
from .formulas import Dependency, FixednessHints
from .patterns import (
    ABOVE,
    BELOW,
    EMPTY_META,
    HEURISTIC_ORDER,
    LEFT,
    RIGHT,
    CompressedEdge,
    PatternKind,
    PatternMeta,
    decompress,
    find_dep,
    find_prec,
    remove_dep,
    run_axis,
    single_edge,
    try_compress,
    window,
)
from .rangeset import RangeSet
from .rtree import RTreeIndex


class SelfReferenceError(ValueError):
    """A formula cell may not reference a range containing itself."""


class GraphImportError(ValueError):
    """Serialized graph rejected; the message names the offending field."""


@dataclass(frozen=True, slots=True)
class GraphStats:
    edges: int
    vertices: int
    raw_edges: int
    raw_vertices: int
    edge_ratio: float
    vertex_ratio: float

    def as_dict(self) -> dict:
        return {
            "edges": self.edges,
            "vertices": self.vertices,
            "rawEdges": self.raw_edges,
            "rawVertices": self.raw_vertices,
            "edgeRatio": self.edge_ratio,
            "vertexRatio": self.vertex_ratio,
        }


def implied_pattern(hints: FixednessHints) -> PatternKind:
    """The pattern a dollar-annotated reference suggests under autofill."""
    if hints.head_fixed:
        return PatternKind.FF if hints.tail_fixed else PatternKind.FR
    return PatternKind.RF if hints.tail_fixed else PatternKind.RR


def select_winner(
    candidates: list[tuple[CompressedEdge, CompressedEdge]], hints: FixednessHints
) -> tuple[CompressedEdge, CompressedEdge]:
    """Pick one (merged, old) pair by the compression heuristics.

    Order: column axis over row axis; special pattern over its general form;
    agreement with the dollar-cue pattern; then a fixed enum/position
    tiebreak so results are deterministic.
    """
    implied = implied_pattern(hints)

    def rank(pair):
        merged, old = pair
        agrees = merged.pattern is implied or (
            implied is PatternKind.RR and merged.pattern is PatternKind.RR_CHAIN
        )
        return (
            0 if merged.meta.axis == COLUMN else 1,
            0 if merged.pattern is PatternKind.RR_CHAIN else 1,
            0 if agrees else 1,
            HEURISTIC_ORDER.index(merged.pattern),
            old.dep.head.i,
            old.dep.head.j,
        )

    return min(candidates, key=rank)


_SHIFTS = ((0, -1), (0, 1), (-1, 0), (1, 0))


class CompressedGraph:
    def __init__(self, enabled_patterns=None):
        self.enabled_patterns = list(enabled_patterns or HEURISTIC_ORDER)
        self._edges: set[CompressedEdge] = set()
        self._prec_index = RTreeIndex()
        self._dep_index = RTreeIndex()
        self._raw_edges = 0
        self._vertex_refs: Counter = Counter()

    # -- basic state -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> list[CompressedEdge]:
        return sorted(
            self._edges,
            key=lambda e: (e.dep.head.i, e.dep.head.j, e.prec.head.i, e.prec.head.j, e.pattern.value),
        )

    @property
    def raw_edge_count(self) -> int:
        return self._raw_edges

    def _add_edge(self, e: CompressedEdge) -> None:
        self._edges.add(e)
        self._prec_index.insert(e.prec.rect, e)
        self._dep_index.insert(e.dep.rect, e)

    def _remove_edge(self, e: CompressedEdge) -> None:
        self._edges.remove(e)
        self._prec_index.delete(e.prec.rect, e)
        self._dep_index.delete(e.dep.rect, e)

    # -- insertion (greedy compression) ----------------------------------------

    def insert_dependency(self, d: Dependency) -> None:
        if not (in_grid(d.prec.head) and in_grid(d.prec.tail) and in_grid(d.dep)):
            raise ValueError(f"dependency outside the grid: {d}")
        if contains(d.prec, cell_range(d.dep)):
            raise SelfReferenceError(
                f"{print_a1(d.dep)} references {print_a1(d.prec)} containing itself"
            )

        pairs = []
        for cand, axis in self._adjacent_edges(d.dep):
            if cand.pattern is PatternKind.SINGLE:
                for kind in self.enabled_patterns:
                    merged = try_compress(cand, d, kind, axis)
                    if merged is not None:
                        pairs.append((merged, cand))
            else:
                merged = try_compress(cand, d, cand.pattern, axis)
                if merged is not None:
                    pairs.append((merged, cand))

        if pairs:
            merged, old = select_winner(pairs, d.hints)
            self._remove_edge(old)
            self._add_edge(merged)
        else:
            self._add_edge(single_edge(d))

        self._raw_edges += 1
        self._vertex_refs[d.prec.rect] += 1
        self._vertex_refs[cell_range(d.dep).rect] += 1

    def _adjacent_edges(self, c: CellAddr):
        """Edges whose dependent run can be extended by the cell c."""
        out = []
        ci, cj = c.i, c.j
        for di, dj in _SHIFTS:
            probe = (ci + di, cj + dj, ci + di, cj + dj)
            if probe[0] < 1 or probe[1] < 1:
                continue
            for e in self._dep_index.search(probe):
                dep = e.dep
                h, t = dep.head, dep.tail
                if h.i == t.i == ci and (cj == h.j - 1 or cj == t.j + 1):
                    out.append((e, COLUMN))
                elif h.j == t.j == cj and (ci == h.i - 1 or ci == t.i + 1):
                    out.append((e, ROW))
        return out

    # -- queries ----------------------------------------------------------------

    def find_dependents(self, r: Range, transitive: bool = True) -> RangeSet:
        """All cells reachable from r, as disjoint ranges (r itself excluded).

        Modified BFS: each visited range is probed against the precedent
        index, dependents are computed per compressed edge without
        decompression, and already-covered cells are subtracted before
        anything is enqueued.
        """
        result = RangeSet()
        queue = deque((r,))
        while queue:
            prec_to_visit = queue.popleft()
            for e in self._prec_index.search(prec_to_visit.rect):
                clipped = intersect(prec_to_visit, e.prec)
                dep = find_dep(e, clipped)
                if dep is None:
                    continue
                pieces = result.add_uncovered(dep)
                if transitive:
                    queue.extend(pieces)
        return result

    def find_precedents(self, s: Range, transitive: bool = True) -> RangeSet:
        result = RangeSet()
        queue = deque((s,))
        while queue:
            dep_to_visit = queue.popleft()
            for e in self._dep_index.search(dep_to_visit.rect):
                clipped = intersect(dep_to_visit, e.dep)
                prec = find_prec(e, clipped)
                pieces = result.add_uncovered(prec)
                if transitive:
                    queue.extend(pieces)
        return result

    # -- maintenance --------------------------------------------------------------

    def clear_cells(self, s: Range) -> None:
        """Remove the formulas at s. Edges merely referencing s are untouched."""
        for e in self._dep_index.search(s.rect):
            clipped = intersect(s, e.dep)
            for c in clipped.cells():
                self._drop_vertex_ref(window(e, c).rect)
                self._drop_vertex_ref(cell_range(c).rect)
            self._raw_edges -= clipped.area
            self._remove_edge(e)
            for piece in remove_dep(e, clipped):
                self._add_edge(piece)

    def _drop_vertex_ref(self, key) -> None:
        n = self._vertex_refs[key] - 1
        if n:
            self._vertex_refs[key] = n
        else:
            del self._vertex_refs[key]

    def update_cell(self, cell: CellAddr, new_deps) -> None:
        """Replace the formula at one cell: clear, then insert in parser order."""
        self.clear_cells(cell_range(cell))
        for d in new_deps:
            self.insert_dependency(d)

    # -- statistics ----------------------------------------------------------------

    def stats(self) -> GraphStats:
        edges = len(self._edges)
        verts = len({e.prec.rect for e in self._edges} | {e.dep.rect for e in self._edges})
        return GraphStats(
            edges=edges,
            vertices=verts,
            raw_edges=self._raw_edges,
            raw_vertices=len(self._vertex_refs),
            edge_ratio=self._raw_edges / edges if edges else 0.0,
            vertex_ratio=len(self._vertex_refs) / verts if verts else 0.0,
        )

    def reduced_by_pattern(self) -> dict[PatternKind, int]:
        out = {kind: 0 for kind in PatternKind}
        for e in self._edges:
            out[e.pattern] += e.count - 1
        return out

    def decompress_all(self) -> Counter:
        """Multiset of the surviving uncompressed (prec, dep-cell) pairs."""
        pairs = Counter()
        for e in self._edges:
            pairs.update(decompress(e))
        return pairs

    # -- serialization ----------------------------------------------------------------

    def to_dict(self) -> dict:
        records = []
        for e in self.edges:
            meta: dict = {}
            m = e.meta
            if m.h_rel is not None:
                meta["hRel"] = [m.h_rel.p, m.h_rel.q]
            if m.h_fix is not None:
                meta["hFix"] = [m.h_fix.i, m.h_fix.j]
            if m.t_rel is not None:
                meta["tRel"] = [m.t_rel.p, m.t_rel.q]
            if m.t_fix is not None:
                meta["tFix"] = [m.t_fix.i, m.t_fix.j]
            if m.chain_dir is not None:
                meta["chainDir"] = m.chain_dir
            records.append(
                {
                    "prec": print_a1(e.prec),
                    "dep": print_a1(e.dep),
                    "pattern": e.pattern.value,
                    "meta": meta,
                    "count": e.count,
                }
            )
        return {
            "edges": records,
            "rawEdges": self._raw_edges,
            "rawVertices": len(self._vertex_refs),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "CompressedGraph":
        if not isinstance(data, dict):
            raise GraphImportError("document: expected an object")
        records = data.get("edges")
        if not isinstance(records, list):
            raise GraphImportError("edges: expected a list")
        g = cls()
        for k, rec in enumerate(records):
            e = _edge_from_record(rec, f"edges[{k}]")
            try:
                pairs = decompress(e)
                covered = pairs[0][0]
                for prec, _ in pairs:
                    covered = bbox(covered, prec)
            except ValueError as err:
                raise GraphImportError(f"edges[{k}].meta: inconsistent geometry ({err})") from err
            if covered != e.prec:
                raise GraphImportError(
                    f"edges[{k}].prec: {rec.get('prec')} does not bound the reconstructed windows"
                )
            g._add_edge(e)
            for prec, dep in pairs:
                g._vertex_refs[prec.rect] += 1
                g._vertex_refs[cell_range(dep).rect] += 1
            g._raw_edges += e.count
        for field, got in (("rawEdges", g._raw_edges), ("rawVertices", len(g._vertex_refs))):
            stated = data.get(field)
            if not isinstance(stated, int):
                raise GraphImportError(f"{field}: expected an integer")
            if stated != got:
                raise GraphImportError(f"{field}: stated {stated} but edges reproduce {got}")
        return g

    @classmethod
    def from_json(cls, text: str) -> "CompressedGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise GraphImportError(f"document: invalid JSON ({err})") from err
        return cls.from_dict(data)


_META_FIELDS = {
    PatternKind.SINGLE: frozenset(),
    PatternKind.RR: frozenset({"hRel", "tRel"}),
    PatternKind.RF: frozenset({"hRel", "tFix"}),
    PatternKind.FR: frozenset({"hFix", "tRel"}),
    PatternKind.FF: frozenset({"hFix", "tFix"}),
    PatternKind.RR_CHAIN: frozenset({"hRel", "tRel", "chainDir"}),
}
_CHAIN_DIRS = {ABOVE, BELOW, LEFT, RIGHT}
_CHAIN_UNIT = {
    ABOVE: Offset(0, -1),
    BELOW: Offset(0, 1),
    LEFT: Offset(-1, 0),
    RIGHT: Offset(1, 0),
}


def _pair(v, path):
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, int) for x in v)):
        raise GraphImportError(f"{path}: expected a pair of integers")
    return v


def _edge_from_record(rec: dict, path: str) -> CompressedEdge:
    if not isinstance(rec, dict):
        raise GraphImportError(f"{path}: expected an object")
    try:
        prec = parse_range(rec.get("prec", ""))
    except ValueError as err:
        raise GraphImportError(f"{path}.prec: {err}") from err
    try:
        dep = parse_range(rec.get("dep", ""))
    except ValueError as err:
        raise GraphImportError(f"{path}.dep: {err}") from err

    name = rec.get("pattern")
    try:
        kind = PatternKind(name)
    except ValueError:
        raise GraphImportError(f"{path}.pattern: unknown pattern {name!r}") from None

    count = rec.get("count")
    if not isinstance(count, int) or count < 1:
        raise GraphImportError(f"{path}.count: expected a positive integer")
    if count != dep.area:
        raise GraphImportError(f"{path}.count: {count} does not cover dep {print_a1(dep)}")

    meta_rec = rec.get("meta", {})
    if not isinstance(meta_rec, dict):
        raise GraphImportError(f"{path}.meta: expected an object")
    expected = _META_FIELDS[kind]
    if set(meta_rec) != expected:
        raise GraphImportError(
            f"{path}.meta: pattern {kind.value} needs exactly {sorted(expected)}, got {sorted(meta_rec)}"
        )

    if kind is PatternKind.SINGLE:
        if not dep.is_cell:
            raise GraphImportError(f"{path}.dep: Single edges have one-cell dependents")
        return CompressedEdge(prec, dep, kind, EMPTY_META, 1)

    try:
        axis = run_axis(dep)
    except ValueError as err:
        raise GraphImportError(f"{path}.dep: {err}") from err
    if dep.is_cell:
        raise GraphImportError(f"{path}.dep: pattern edges cover at least two cells")

    kw = {"axis": axis}
    if "hRel" in meta_rec:
        p, q = _pair(meta_rec["hRel"], f"{path}.meta.hRel")
        kw["h_rel"] = _offset(p, q)
    if "tRel" in meta_rec:
        p, q = _pair(meta_rec["tRel"], f"{path}.meta.tRel")
        kw["t_rel"] = _offset(p, q)
    if "hFix" in meta_rec:
        i, j = _pair(meta_rec["hFix"], f"{path}.meta.hFix")
        kw["h_fix"] = CellAddr(i, j)
    if "tFix" in meta_rec:
        i, j = _pair(meta_rec["tFix"], f"{path}.meta.tFix")
        kw["t_fix"] = CellAddr(i, j)
    if "chainDir" in meta_rec:
        d = meta_rec["chainDir"]
        if d not in _CHAIN_DIRS:
            raise GraphImportError(f"{path}.meta.chainDir: unknown direction {d!r}")
        if (axis == COLUMN) != (d in (ABOVE, BELOW)):
            raise GraphImportError(f"{path}.meta.chainDir: {d} does not match a {axis} run")
        unit = _CHAIN_UNIT[d]
        if kw.get("h_rel") != unit or kw.get("t_rel") != unit:
            raise GraphImportError(
                f"{path}.meta.chainDir: {d} requires hRel == tRel == [{unit.p}, {unit.q}]"
            )
        kw["chain_dir"] = d
    return CompressedEdge(prec, dep, kind, PatternMeta(**kw), count)


def _offset(p, q):
    return Offset(p, q)
