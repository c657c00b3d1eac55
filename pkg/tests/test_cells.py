import random

import pytest

from sheetgraph.cells import (
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
    col_letters,
    contains,
    intersect,
    parse_a1,
    parse_range,
    print_a1,
    shift,
    subtract,
)


def cellset(r):
    """Brute-force cell enumeration of a range (oracle helper)."""
    if r is None:
        return set()
    return {(i, j) for i in range(r.head.i, r.tail.i + 1) for j in range(r.head.j, r.tail.j + 1)}


def letters_oracle(s):
    """Independent bijective base-26 decoding used to check parse_a1."""
    n = 0
    for ch in s:
        n = n * 26 + ord(ch) - ord("A") + 1
    return n


def rand_range(rng, size=20):
    i1, i2 = sorted(rng.randint(1, size) for _ in range(2))
    j1, j2 = sorted(rng.randint(1, size) for _ in range(2))
    return Range(CellAddr(i1, j1), CellAddr(i2, j2))


def test_parse_single_cells():
    assert parse_a1("A1") == CellAddr(1, 1)
    assert parse_a1("N3") == CellAddr(14, 3)
    assert parse_a1("XFD1048576") == CellAddr(letters_oracle("XFD"), 1048576)
    assert parse_a1("XFD1048576") == CellAddr(16384, 1048576)


def test_parse_strips_dollar_markers():
    assert parse_a1("$B$1") == CellAddr(2, 1)
    assert parse_a1("$B$1:B4") == Range(CellAddr(2, 1), CellAddr(2, 4))


def test_parse_errors():
    for bad in ["", "1A", "A", "12", "A1:B2:C3", "Z-1", "a1"]:
        with pytest.raises(A1ParseError):
            parse_a1(bad)
    for out in ["XFE1", "A1048577", "A0"]:
        with pytest.raises(GridBoundsError):
            parse_a1(out)
    with pytest.raises(A1ParseError):
        parse_a1("B2:A1")


def test_parse_print_roundtrip_random():
    rng = random.Random(7)
    for _ in range(1000):
        c = CellAddr(rng.randint(1, 16384), rng.randint(1, 1048576))
        assert parse_a1(print_a1(c)) == c
    for _ in range(200):
        r = rand_range(rng, 100)
        assert parse_range(print_a1(r)) == r


def test_col_letters_known_values():
    assert col_letters(1) == "A"
    assert col_letters(26) == "Z"
    assert col_letters(27) == "AA"
    assert col_letters(702) == "ZZ"
    assert col_letters(703) == "AAA"
    assert col_letters(16384) == "XFD"


def test_bbox_merges_overlapping_column_ranges():
    assert bbox(parse_range("A1:A3"), parse_range("A2:A5")) == parse_range("A1:A5")


def test_bbox_algebra():
    rng = random.Random(11)
    for _ in range(300):
        a, b, c = (rand_range(rng) for _ in range(3))
        assert bbox(a, a) == a
        assert bbox(a, b) == bbox(b, a)
        assert bbox(bbox(a, b), c) == bbox(a, bbox(b, c))
        # join of the containment lattice
        assert contains(bbox(a, b), a) and contains(bbox(a, b), b)
    assert bbox(cell_range(CellAddr(1, 1)), cell_range(CellAddr(3, 3))) == parse_range("A1:C3")


def test_intersect_examples():
    assert intersect(parse_range("A1:B3"), parse_range("B2:C4")) == parse_range("B2:B3")
    r = parse_range("D2:F9")
    assert intersect(r, r) == r
    assert intersect(parse_range("A1:A2"), parse_range("C1:C2")) is None


def test_subtract_examples():
    assert subtract(parse_range("C1:C4"), parse_range("C2")) == [
        parse_range("C1"),
        parse_range("C3:C4"),
    ]
    r = parse_range("B2:E5")
    assert subtract(r, r) == []
    assert subtract(parse_range("A1:C3"), parse_range("B2")) == [
        parse_range("A1:C1"),
        parse_range("A3:C3"),
        parse_range("A2"),
        parse_range("C2"),
    ]


def test_subtract_intersect_conservation_random():
    # area(a \ b) + area(a ∩ b) == area(a); pieces disjoint; union is exact
    rng = random.Random(23)
    for _ in range(500):
        a, b = rand_range(rng), rand_range(rng)
        pieces = subtract(a, b)
        piece_cells = [cellset(p) for p in pieces]
        union = set().union(*piece_cells) if piece_cells else set()
        assert sum(len(pc) for pc in piece_cells) == len(union), "pieces overlap"
        assert union == cellset(a) - cellset(b)
        inter = intersect(a, b)
        assert sum(p.area for p in pieces) + (inter.area if inter else 0) == a.area


def test_shift():
    assert shift(parse_range("C4"), Offset(0, -1)) == parse_range("C3")
    assert shift(parse_range("B2:C3"), Offset(2, 1)) == parse_range("D3:E4")
    with pytest.raises(GridBoundsError):
        shift(parse_range("A1"), Offset(0, -1))
    with pytest.raises(GridBoundsError):
        shift(parse_range("XFD1"), Offset(1, 0))


def test_offset_negation_identity():
    rng = random.Random(3)
    for _ in range(200):
        c = CellAddr(rng.randint(1, 500), rng.randint(1, 500))
        o = Offset(rng.randint(-20, 20), rng.randint(-20, 20))
        assert (c + o) - o == c
        assert c + o + (-o) == c


def test_adjacent():
    assert adjacent(parse_range("C1:C3"), parse_range("C4"), COLUMN)
    assert adjacent(parse_range("C4"), parse_range("C1:C3"), COLUMN)
    assert not adjacent(parse_range("C1:C3"), parse_range("D1"), COLUMN)
    assert not adjacent(parse_range("C1:C3"), parse_range("D4"), COLUMN)  # diagonal
    assert not adjacent(parse_range("C1:C3"), parse_range("C5"), COLUMN)  # gap
    assert adjacent(parse_range("C4"), parse_range("D4"), ROW)
    assert not adjacent(parse_range("C4"), parse_range("C5"), ROW)
    with pytest.raises(ValueError):
        adjacent(parse_range("A1"), parse_range("A2"), "diagonal")


def test_range_validation():
    with pytest.raises(ValueError):
        Range(CellAddr(2, 1), CellAddr(1, 1))
    assert cell_range(CellAddr(4, 4)).is_cell
