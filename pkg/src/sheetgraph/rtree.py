"""An in-memory R-tree over integer rectangles.

This is the spatial index behind every graph engine here: vertices (ranges)
are indexed so the set overlapping a probe rectangle can be found without a
full scan. Rectangles are (i1, j1, i2, j2) tuples with inclusive corners.
Entries are (rect, handle) pairs; handles are compared by identity, so the
same rectangle may be indexed many times under distinct handles.

Insert and delete are the classic quadratic-split / condense algorithms;
overlap search walks only subtrees whose bounding boxes intersect the probe.
A bulk loader packs a whole entry list bottom-up for graphs built in one
shot.
"""

from __future__ import annotations

_MAX = 16   # max entries per node
_MIN = 6    # min fill before condensing


class _Node:
    __slots__ = ("leaf", "rects", "children")

    def __init__(self, leaf: bool):
        self.leaf = leaf
        self.rects: list[tuple[int, int, int, int]] = []
        self.children: list = []   # _Node for internal nodes, handles for leaves


def _union(a, b):
    return (
        a[0] if a[0] < b[0] else b[0],
        a[1] if a[1] < b[1] else b[1],
        a[2] if a[2] > b[2] else b[2],
        a[3] if a[3] > b[3] else b[3],
    )


def _mbr(rects):
    i1 = min(r[0] for r in rects)
    j1 = min(r[1] for r in rects)
    i2 = max(r[2] for r in rects)
    j2 = max(r[3] for r in rects)
    return (i1, j1, i2, j2)


def _area(r):
    return (r[2] - r[0] + 1) * (r[3] - r[1] + 1)


class RTreeIndex:
    """Set of (rect, handle) entries with rectangle-overlap search."""

    def __init__(self):
        self._root = _Node(leaf=True)
        self._size = 0

    def __len__(self) -> int:
        return self._size

    # -- search --------------------------------------------------------------

    def search(self, rect) -> list:
        """Handles of all entries whose rectangle intersects `rect`."""
        qi1, qj1, qi2, qj2 = rect
        out = []
        stack = [self._root]
        while stack:
            node = stack.pop()
            rects = node.rects
            children = node.children
            if node.leaf:
                for k in range(len(rects)):
                    r = rects[k]
                    if r[0] <= qi2 and qi1 <= r[2] and r[1] <= qj2 and qj1 <= r[3]:
                        out.append(children[k])
            else:
                for k in range(len(rects)):
                    r = rects[k]
                    if r[0] <= qi2 and qi1 <= r[2] and r[1] <= qj2 and qj1 <= r[3]:
                        stack.append(children[k])
        return out

    # -- insert --------------------------------------------------------------

    def insert(self, rect, handle) -> None:
        node = self._root
        path = []
        while not node.leaf:
            best, best_enlarge, best_area = -1, None, None
            for k, r in enumerate(node.rects):
                u = _union(r, rect)
                enlarge = _area(u) - _area(r)
                area = _area(r)
                if best < 0 or enlarge < best_enlarge or (
                    enlarge == best_enlarge and area < best_area
                ):
                    best, best_enlarge, best_area = k, enlarge, area
            path.append((node, best))
            node.rects[best] = _union(node.rects[best], rect)
            node = node.children[best]

        node.rects.append(rect)
        node.children.append(handle)
        self._size += 1

        if len(node.rects) > _MAX:
            self._split_upward(node, path)

    def _split_upward(self, node, path):
        sibling = _quadratic_split(node)
        while path:
            parent, k = path.pop()
            parent.rects[k] = _mbr(node.rects)
            parent.rects.append(_mbr(sibling.rects))
            parent.children.append(sibling)
            if len(parent.rects) <= _MAX:
                return
            node = parent
            sibling = _quadratic_split(parent)
        old_root = self._root
        self._root = _Node(leaf=False)
        self._root.rects = [_mbr(old_root.rects), _mbr(sibling.rects)]
        self._root.children = [old_root, sibling]

    # -- delete --------------------------------------------------------------

    def delete(self, rect, handle) -> None:
        """Remove one entry (matched by identity of `handle`)."""
        found = self._find_leaf(self._root, rect, handle, [])
        if found is None:
            raise KeyError(f"entry not in index: {rect} {handle!r}")
        leaf, path = found
        k = next(
            i for i, h in enumerate(leaf.children) if h is handle and leaf.rects[i] == rect
        )
        leaf.rects.pop(k)
        leaf.children.pop(k)
        self._size -= 1
        self._condense(leaf, path)

    def _find_leaf(self, node, rect, handle, path):
        if node.leaf:
            for i, h in enumerate(node.children):
                if h is handle and node.rects[i] == rect:
                    return node, path
            return None
        for k, r in enumerate(node.rects):
            if r[0] <= rect[0] and r[1] <= rect[1] and r[2] >= rect[2] and r[3] >= rect[3]:
                found = self._find_leaf(node.children[k], rect, handle, path + [(node, k)])
                if found is not None:
                    return found
        return None

    def _condense(self, node, path):
        orphans = []
        while path:
            parent, k = path.pop()
            if len(node.rects) < _MIN:
                parent.rects.pop(k)
                parent.children.pop(k)
                _collect_leaf_entries(node, orphans)
            else:
                parent.rects[k] = _mbr(node.rects)
            node = parent
        root = self._root
        if not root.leaf and len(root.children) == 1:
            self._root = root.children[0]
        elif not root.leaf and len(root.children) == 0:
            self._root = _Node(leaf=True)
        self._size -= len(orphans)
        for rect, handle in orphans:
            self.insert(rect, handle)

    # -- bulk load -----------------------------------------------------------

    @classmethod
    def from_entries(cls, entries) -> "RTreeIndex":
        """Sort-tile-recursive packing of (rect, handle) pairs."""
        idx = cls()
        items = list(entries)
        idx._size = len(items)
        if not items:
            return idx
        level = _pack_level(items, leaf=True)
        while len(level) > 1:
            level = _pack_level([( _mbr(n.rects), n) for n in level], leaf=False)
        idx._root = level[0]
        return idx


def _pack_level(items, leaf):
    import math

    n = len(items)
    slices = max(1, math.ceil(math.sqrt(n / _MAX)))
    per_slice = math.ceil(n / slices)
    items.sort(key=lambda e: e[0][0] + e[0][2])
    nodes = []
    for s in range(0, n, per_slice):
        chunk = sorted(items[s : s + per_slice], key=lambda e: e[0][1] + e[0][3])
        for t in range(0, len(chunk), _MAX):
            node = _Node(leaf=leaf)
            for rect, h in chunk[t : t + _MAX]:
                node.rects.append(rect)
                node.children.append(h)
            nodes.append(node)
    return nodes


def _collect_leaf_entries(node, out):
    if node.leaf:
        out.extend(zip(node.rects, node.children))
        return
    for child in node.children:
        _collect_leaf_entries(child, out)


def _quadratic_split(node) -> _Node:
    """Split an overfull node in place, returning the new sibling."""
    rects, children = node.rects, node.children
    n = len(rects)
    worst, s1, s2 = -1, 0, 1
    for a in range(n):
        ra = rects[a]
        for b in range(a + 1, n):
            dead = _area(_union(ra, rects[b])) - _area(ra) - _area(rects[b])
            if dead > worst:
                worst, s1, s2 = dead, a, b

    g1_r, g1_c = [rects[s1]], [children[s1]]
    g2_r, g2_c = [rects[s2]], [children[s2]]
    mbr1, mbr2 = rects[s1], rects[s2]
    rest = [k for k in range(n) if k != s1 and k != s2]
    while rest:
        if len(g1_r) + len(rest) == _MIN:
            for k in rest:
                g1_r.append(rects[k])
                g1_c.append(children[k])
            break
        if len(g2_r) + len(rest) == _MIN:
            for k in rest:
                g2_r.append(rects[k])
                g2_c.append(children[k])
            break
        best_k, best_diff, best_growths = rest[0], -1, (0, 0)
        for k in rest:
            d1 = _area(_union(mbr1, rects[k])) - _area(mbr1)
            d2 = _area(_union(mbr2, rects[k])) - _area(mbr2)
            diff = abs(d1 - d2)
            if diff > best_diff:
                best_k, best_diff, best_growths = k, diff, (d1, d2)
        rest.remove(best_k)
        d1, d2 = best_growths
        if d1 < d2 or (d1 == d2 and len(g1_r) <= len(g2_r)):
            g1_r.append(rects[best_k])
            g1_c.append(children[best_k])
            mbr1 = _union(mbr1, rects[best_k])
        else:
            g2_r.append(rects[best_k])
            g2_c.append(children[best_k])
            mbr2 = _union(mbr2, rects[best_k])

    node.rects, node.children = g1_r, g1_c
    sibling = _Node(leaf=node.leaf)
    sibling.rects, sibling.children = g2_r, g2_c
    return sibling
