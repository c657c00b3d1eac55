"""A set of pairwise-disjoint ranges with overlap-indexed membership.

Used as the visited set of the graph traversals: each BFS step asks which
part of a candidate result range has not been seen yet, records the
remainder, and enqueues it. Because members stay disjoint and every add
strictly grows the covered cell set, the traversals terminate even on
cyclic graphs.
"""

from __future__ import annotations

from .cells import CellAddr, Range, overlaps, subtract
from .rtree import RTreeIndex


class RangeSet:
    def __init__(self):
        self._members: list[Range] = []
        self._index = RTreeIndex()

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self):
        return iter(self._members)

    def ranges(self) -> list[Range]:
        """Members ordered by head cell (column, then row)."""
        return sorted(self._members, key=lambda r: (r.head.i, r.head.j, r.tail.i, r.tail.j))

    def add(self, r: Range) -> None:
        """Record a range the caller knows is disjoint from all members."""
        self._members.append(r)
        self._index.insert(r.rect, r)

    def uncovered(self, r: Range) -> list[Range]:
        """The parts of r not already covered, as disjoint ranges."""
        pieces = [r]
        for member in self._index.search(r.rect):
            nxt = []
            for p in pieces:
                if overlaps(p, member):
                    nxt.extend(subtract(p, member))
                else:
                    nxt.append(p)
            pieces = nxt
            if not pieces:
                break
        return pieces

    def add_uncovered(self, r: Range) -> list[Range]:
        """Carve out the unseen remainder of r, record it, and return it."""
        pieces = self.uncovered(r)
        for p in pieces:
            self.add(p)
        return pieces

    def cell_count(self) -> int:
        return sum(m.area for m in self._members)


def coalesce(ranges) -> list[Range]:
    """Merge touching ranges of a disjoint collection into maximal blocks.

    Queries return results as produced by the traversal; display layers use
    this to show "B1:B100" instead of "B1, B2:B100". Runs alternate
    column-wise and row-wise merge passes until stable.
    """
    rs = list(ranges)
    changed = True
    while changed:
        changed = False
        rs.sort(key=lambda r: (r.head.i, r.tail.i, r.head.j))
        merged: list[Range] = []
        for r in rs:
            p = merged[-1] if merged else None
            if p and p.head.i == r.head.i and p.tail.i == r.tail.i and r.head.j <= p.tail.j + 1:
                if r.tail.j > p.tail.j:
                    merged[-1] = Range(p.head, CellAddr(p.tail.i, r.tail.j))
                changed = True
            else:
                merged.append(r)
        rs = merged
        rs.sort(key=lambda r: (r.head.j, r.tail.j, r.head.i))
        merged = []
        for r in rs:
            p = merged[-1] if merged else None
            if p and p.head.j == r.head.j and p.tail.j == r.tail.j and r.head.i <= p.tail.i + 1:
                if r.tail.i > p.tail.i:
                    merged[-1] = Range(p.head, CellAddr(r.tail.i, p.tail.j))
                changed = True
            else:
                merged.append(r)
        rs = merged
    return sorted(rs, key=lambda r: (r.head.i, r.head.j))
