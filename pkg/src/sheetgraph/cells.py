"""Cell and range coordinate algebra on the spreadsheet grid.

Coordinates are 1-based integers: ``i`` is the column index, ``j`` the row
index. A range is a rectangle identified by its top-left (head) and
bottom-right (tail) cells. All values are immutable and freely shareable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

MAX_COL = 16384       # column "XFD"
MAX_ROW = 1_048_576   # 2**20

COLUMN = "column"
ROW = "row"


class A1ParseError(ValueError):
    """Raised when a string is not valid A1 notation."""


class GridBoundsError(ValueError):
    """Raised when a coordinate falls outside the spreadsheet grid."""


@dataclass(frozen=True, slots=True, order=True)
class CellAddr:
    """A single cell position: column ``i``, row ``j`` (both 1-based)."""

    i: int
    j: int

    def __add__(self, o: Offset) -> CellAddr:
        return CellAddr(self.i + o.p, self.j + o.q)

    def __sub__(self, other: CellAddr | Offset) -> Offset | CellAddr:
        if isinstance(other, CellAddr):
            return Offset(self.i - other.i, self.j - other.j)
        return CellAddr(self.i - other.p, self.j - other.q)


@dataclass(frozen=True, slots=True)
class Offset:
    """A relative position: ``p`` columns across, ``q`` rows down."""

    p: int
    q: int

    def __neg__(self) -> Offset:
        return Offset(-self.p, -self.q)


@dataclass(frozen=True, slots=True)
class Range:
    """A rectangular cell region; a single cell is a range with head == tail."""

    head: CellAddr
    tail: CellAddr

    def __post_init__(self) -> None:
        if self.head.i > self.tail.i or self.head.j > self.tail.j:
            raise ValueError(f"inverted range corners: {self.head} .. {self.tail}")

    @property
    def is_cell(self) -> bool:
        return self.head == self.tail

    @property
    def width(self) -> int:
        return self.tail.i - self.head.i + 1

    @property
    def height(self) -> int:
        return self.tail.j - self.head.j + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    @property
    def rect(self) -> tuple[int, int, int, int]:
        """(i1, j1, i2, j2) tuple form, used by the spatial indexes."""
        return (self.head.i, self.head.j, self.tail.i, self.tail.j)

    def cells(self):
        """Iterate cells column-major (all of column i1 top-down, then i1+1, ...)."""
        for i in range(self.head.i, self.tail.i + 1):
            for j in range(self.head.j, self.tail.j + 1):
                yield CellAddr(i, j)

    def __str__(self) -> str:
        return print_a1(self)


def cell_range(c: CellAddr) -> Range:
    return Range(c, c)


def in_grid(c: CellAddr) -> bool:
    return 1 <= c.i <= MAX_COL and 1 <= c.j <= MAX_ROW


def col_letters(i: int) -> str:
    """Column index to letters, bijective base-26 (1 -> A, 27 -> AA)."""
    if i < 1:
        raise ValueError(f"column index must be >= 1, got {i}")
    out = []
    while i > 0:
        i, rem = divmod(i - 1, 26)
        out.append(chr(ord("A") + rem))
    return "".join(reversed(out))


def letters_to_col(s: str) -> int:
    i = 0
    for ch in s:
        i = i * 26 + (ord(ch) - ord("A") + 1)
    return i


_CELL_RE = re.compile(r"\$?([A-Z]+)\$?([0-9]+)")


def _parse_cell(text: str) -> CellAddr:
    m = _CELL_RE.fullmatch(text)
    if m is None:
        raise A1ParseError(f"not a cell reference: {text!r}")
    col, row = letters_to_col(m.group(1)), int(m.group(2))
    c = CellAddr(col, row)
    if not in_grid(c):
        raise GridBoundsError(f"{text!r} is outside the {MAX_COL}x{MAX_ROW} grid")
    return c


def parse_a1(text: str) -> CellAddr | Range:
    """Parse A1 notation into a CellAddr or Range.

    Dollar markers are accepted and stripped; fixedness is the formula
    parser's concern. Raises A1ParseError on malformed text and
    GridBoundsError on out-of-grid coordinates.
    """
    if ":" in text:
        left, sep, right = text.partition(":")
        if ":" in right:
            raise A1ParseError(f"not a range reference: {text!r}")
        a, b = _parse_cell(left), _parse_cell(right)
        if a.i > b.i or a.j > b.j:
            raise A1ParseError(f"range corners out of order: {text!r}")
        return Range(a, b)
    return _parse_cell(text)


def parse_range(text: str) -> Range:
    """Like parse_a1 but single cells come back as one-cell ranges."""
    v = parse_a1(text)
    return cell_range(v) if isinstance(v, CellAddr) else v


def print_a1(v: CellAddr | Range) -> str:
    if isinstance(v, CellAddr):
        return f"{col_letters(v.i)}{v.j}"
    if v.is_cell:
        return print_a1(v.head)
    return f"{print_a1(v.head)}:{print_a1(v.tail)}"


def bbox(a: Range, b: Range) -> Range:
    """Minimal bounding range of two ranges (commutative, associative, idempotent)."""
    return Range(
        CellAddr(min(a.head.i, b.head.i), min(a.head.j, b.head.j)),
        CellAddr(max(a.tail.i, b.tail.i), max(a.tail.j, b.tail.j)),
    )


def intersect(a: Range, b: Range) -> Range | None:
    """Component-wise max of heads / min of tails; None when disjoint."""
    hi = max(a.head.i, b.head.i)
    hj = max(a.head.j, b.head.j)
    ti = min(a.tail.i, b.tail.i)
    tj = min(a.tail.j, b.tail.j)
    if hi > ti or hj > tj:
        return None
    return Range(CellAddr(hi, hj), CellAddr(ti, tj))


def overlaps(a: Range, b: Range) -> bool:
    return not (
        a.tail.i < b.head.i or b.tail.i < a.head.i
        or a.tail.j < b.head.j or b.tail.j < a.head.j
    )


def contains(a: Range, b: Range) -> bool:
    """True when b lies entirely inside a."""
    return (
        a.head.i <= b.head.i and b.tail.i <= a.tail.i
        and a.head.j <= b.head.j and b.tail.j <= a.tail.j
    )


def subtract(a: Range, b: Range) -> list[Range]:
    """Disjoint ranges covering exactly a minus b.

    Guillotine decomposition in a fixed order (top strip, bottom strip,
    left strip, right strip) so downstream edge sets are deterministic.
    Returns [] when b covers a, [a] when they are disjoint.
    """
    c = intersect(a, b)
    if c is None:
        return [a]
    out = []
    if a.head.j < c.head.j:   # top strip, full width
        out.append(Range(a.head, CellAddr(a.tail.i, c.head.j - 1)))
    if c.tail.j < a.tail.j:   # bottom strip, full width
        out.append(Range(CellAddr(a.head.i, c.tail.j + 1), a.tail))
    if a.head.i < c.head.i:   # left strip, clipped to c's rows
        out.append(Range(CellAddr(a.head.i, c.head.j), CellAddr(c.head.i - 1, c.tail.j)))
    if c.tail.i < a.tail.i:   # right strip, clipped to c's rows
        out.append(Range(CellAddr(c.tail.i + 1, c.head.j), CellAddr(a.tail.i, c.tail.j)))
    return out


def shift(r: Range, o: Offset) -> Range:
    """Translate a range; raises GridBoundsError when the result leaves the grid."""
    head, tail = r.head + o, r.tail + o
    if not in_grid(head) or not in_grid(tail):
        raise GridBoundsError(f"shift of {print_a1(r)} by ({o.p},{o.q}) leaves the grid")
    return Range(head, tail)


def adjacent(a: Range, b: Range, axis: str) -> bool:
    """Edge-sharing adjacency along one axis only, never diagonal.

    Along the column axis the two ranges must span identical columns and
    touch row-wise; the row axis is the transposed condition.
    """
    if axis == COLUMN:
        return (
            a.head.i == b.head.i and a.tail.i == b.tail.i
            and (b.head.j == a.tail.j + 1 or a.head.j == b.tail.j + 1)
        )
    if axis == ROW:
        return (
            a.head.j == b.head.j and a.tail.j == b.tail.j
            and (b.head.i == a.tail.i + 1 or a.head.i == b.tail.i + 1)
        )
    raise ValueError(f"unknown axis: {axis!r}")
