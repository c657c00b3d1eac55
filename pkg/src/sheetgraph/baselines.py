"""Uncompressed reference engines.

NoComp keeps every dependency as its own edge, indexed spatially, and
answers queries with the same modified BFS idea as the compressed engine
but without any pattern reconstruction. It doubles as the correctness
oracle and the benchmark competitor.

NoComp-Calc differs only in the overlap structure: instead of a general
spatial index it pre-partitions the sheet into fixed containers (256
columns wide; 256 rows tall up to row 2^15, 128 rows tall above that) and
registers each range in every container it overlaps.
"""

from __future__ import annotations

from collections import Counter, deque

from .cells import CellAddr, Range, cell_range, contains, in_grid, print_a1
from .formulas import Dependency
from .graph import GraphStats, SelfReferenceError
from .rangeset import RangeSet
from .rtree import RTreeIndex

_ROW_SPLIT = 1 << 15   # containers get shorter below this row
_COL_STEP = 256
_ROW_STEP_TOP = 256
_ROW_STEP_BOTTOM = 128


def col_bucket(i: int) -> int:
    return (i - 1) // _COL_STEP


def row_bucket(j: int) -> int:
    if j <= _ROW_SPLIT:
        return (j - 1) // _ROW_STEP_TOP
    return 128 + (j - 1 - _ROW_SPLIT) // _ROW_STEP_BOTTOM


class ContainerGridIndex:
    """Fixed-container overlap index with the same interface as RTreeIndex."""

    def __init__(self):
        self._containers: dict[tuple[int, int], list] = {}
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def _buckets(self, rect):
        for cb in range(col_bucket(rect[0]), col_bucket(rect[2]) + 1):
            for rb in range(row_bucket(rect[1]), row_bucket(rect[3]) + 1):
                yield (cb, rb)

    def insert(self, rect, handle) -> None:
        for key in self._buckets(rect):
            self._containers.setdefault(key, []).append((rect, handle))
        self._size += 1

    def delete(self, rect, handle) -> None:
        found = False
        for key in self._buckets(rect):
            entries = self._containers.get(key, [])
            for k, (r, h) in enumerate(entries):
                if h is handle and r == rect:
                    entries.pop(k)
                    found = True
                    break
        if not found:
            raise KeyError(f"entry not in index: {rect} {handle!r}")
        self._size -= 1

    def search(self, rect) -> list:
        qi1, qj1, qi2, qj2 = rect
        out = []
        seen = set()
        for key in self._buckets(rect):
            for r, h in self._containers.get(key, ()):
                if r[0] <= qi2 and qi1 <= r[2] and r[1] <= qj2 and qj1 <= r[3]:
                    hid = id(h)
                    if hid not in seen:
                        seen.add(hid)
                        out.append(h)
        return out

    @classmethod
    def from_entries(cls, entries) -> "ContainerGridIndex":
        idx = cls()
        for rect, handle in entries:
            idx.insert(rect, handle)
        return idx


class UncompressedGraph:
    """NoComp: one edge per raw dependency, BFS with overlap probing."""

    def __init__(self, index_factory=RTreeIndex):
        self._index_factory = index_factory
        self._deps: dict[int, Dependency] = {}
        self._prec_index = index_factory()
        self._dep_index = index_factory()
        self._vertex_refs: Counter = Counter()

    @classmethod
    def from_dependencies(cls, deps, index_factory=RTreeIndex) -> "UncompressedGraph":
        """Bulk construction; indexes are packed in one pass."""
        g = cls(index_factory)
        deps = list(deps)
        for d in deps:
            g._check(d)
            g._deps[id(d)] = d
            g._vertex_refs[d.prec.rect] += 1
            g._vertex_refs[cell_range(d.dep).rect] += 1
        g._prec_index = index_factory.from_entries((d.prec.rect, d) for d in deps)
        g._dep_index = index_factory.from_entries(
            ((d.dep.i, d.dep.j, d.dep.i, d.dep.j), d) for d in deps
        )
        return g

    def __len__(self) -> int:
        return len(self._deps)

    @property
    def dependencies(self) -> list[Dependency]:
        return list(self._deps.values())

    @staticmethod
    def _check(d: Dependency) -> None:
        if not (in_grid(d.prec.head) and in_grid(d.prec.tail) and in_grid(d.dep)):
            raise ValueError(f"dependency outside the grid: {d}")
        if contains(d.prec, cell_range(d.dep)):
            raise SelfReferenceError(
                f"{print_a1(d.dep)} references {print_a1(d.prec)} containing itself"
            )

    def insert_dependency(self, d: Dependency) -> None:
        self._check(d)
        self._deps[id(d)] = d
        self._prec_index.insert(d.prec.rect, d)
        self._dep_index.insert((d.dep.i, d.dep.j, d.dep.i, d.dep.j), d)
        self._vertex_refs[d.prec.rect] += 1
        self._vertex_refs[cell_range(d.dep).rect] += 1

    def clear_cells(self, s: Range) -> None:
        for d in self._dep_index.search(s.rect):
            del self._deps[id(d)]
            self._prec_index.delete(d.prec.rect, d)
            self._dep_index.delete((d.dep.i, d.dep.j, d.dep.i, d.dep.j), d)
            self._drop_ref(d.prec.rect)
            self._drop_ref(cell_range(d.dep).rect)

    def _drop_ref(self, key) -> None:
        n = self._vertex_refs[key] - 1
        if n:
            self._vertex_refs[key] = n
        else:
            del self._vertex_refs[key]

    def update_cell(self, cell: CellAddr, new_deps) -> None:
        self.clear_cells(cell_range(cell))
        for d in new_deps:
            self.insert_dependency(d)

    def find_dependents(self, r: Range, transitive: bool = True) -> RangeSet:
        result = RangeSet()
        queue = deque((r,))
        extend = queue.extend
        search = self._prec_index.search
        while queue:
            probe = queue.popleft()
            for d in search(probe.rect):
                pieces = result.add_uncovered(cell_range(d.dep))
                if transitive and pieces:
                    extend(pieces)
        return result

    def find_precedents(self, s: Range, transitive: bool = True) -> RangeSet:
        result = RangeSet()
        queue = deque((s,))
        while queue:
            probe = queue.popleft()
            for d in self._dep_index.search(probe.rect):
                pieces = result.add_uncovered(d.prec)
                if transitive and pieces:
                    queue.extend(pieces)
        return result

    def stats(self) -> GraphStats:
        n = len(self._deps)
        verts = len(self._vertex_refs)
        one = 1.0 if n else 0.0
        return GraphStats(n, verts, n, verts, one, one)

    def reduced_by_pattern(self) -> dict:
        return {}
