import random

import pytest

from sheetgraph.cells import CellAddr, parse_a1, parse_range, print_a1
from sheetgraph.formulas import Dependency, FixednessHints, FormulaError, extract_refs


def refs_of(formula, at="C4"):
    return extract_refs(formula, parse_a1(at))


def test_anchored_sum():
    (d,) = refs_of("=SUM($B$1:B4)", "C4")
    assert d.prec == parse_range("B1:B4")
    assert d.dep == CellAddr(3, 4)
    assert d.hints == FixednessHints(True, True, False, False)
    assert d.hints.head_fixed and not d.hints.tail_fixed


def test_if_formula_dedup():
    deps = refs_of("=IF(A4=A3,N3+M4,M4)", "N4")
    assert [print_a1(d.prec) for d in deps] == ["A4", "A3", "N3", "M4"]
    assert all(d.dep == parse_a1("N4") for d in deps)


def test_no_references():
    assert refs_of("=7*3", "B1") == []
    assert refs_of("=1+2*(3-4)/5", "B1") == []


def test_single_cell_hints_equal():
    (d,) = refs_of("=$A1*2")
    assert d.hints.head_col_fixed and not d.hints.head_row_fixed
    assert (d.hints.head_col_fixed, d.hints.head_row_fixed) == (
        d.hints.tail_col_fixed,
        d.hints.tail_row_fixed,
    )


def test_first_occurrence_hints_win():
    deps = refs_of("=A1+$A$1")
    assert len(deps) == 1
    assert deps[0].hints == FixednessHints()


def test_concatenated_distinct_refs():
    rng = random.Random(5)
    for _ in range(50):
        k = rng.randint(1, 8)
        cells = rng.sample([f"{c}{r}" for c in "ABDEFGH" for r in range(1, 9)], k)
        formula = "=" + "+".join(cells)
        deps = extract_refs(formula, CellAddr(3, 40))
        assert len(deps) == k
        assert [print_a1(d.prec) for d in deps] == cells
        #.. and a second parse of each printed range is stable
        for d in deps:
            assert parse_range(print_a1(d.prec)) == d.prec


def test_string_literals_skipped():
    deps = refs_of('=IF(A1="B2","C3",D4)')
    assert [print_a1(d.prec) for d in deps] == ["A1", "D4"]
    deps = refs_of('=CONCAT("say ""E5"" loud",F6)')
    assert [print_a1(d.prec) for d in deps] == ["F6"]


def test_function_names_are_not_refs():
    deps = refs_of("=LOG10(A1)+MAX(B2:B3)")
    assert [print_a1(d.prec) for d in deps] == ["A1", "B2:B3"]


def test_parse_errors_carry_offsets():
    with pytest.raises(FormulaError) as e:
        refs_of("=SUM(A1")
    assert e.value.offset == len("=SUM(A1")
    with pytest.raises(FormulaError) as e:
        refs_of("=A1)")
    assert e.value.offset == 3
    with pytest.raises(FormulaError) as e:
        refs_of('="oops')
    assert e.value.offset == 1
    with pytest.raises(FormulaError):
        refs_of("no equals")


def test_rejected_reference_styles():
    with pytest.raises(FormulaError):
        refs_of("=Sheet2!A1")
    with pytest.raises(FormulaError):
        refs_of("=INDIRECT(A1)")
    with pytest.raises(FormulaError):
        refs_of("=my_named_range+1")
    with pytest.raises(FormulaError):
        refs_of("=Table1[Sales]")
    with pytest.raises(FormulaError):
        refs_of("=SUM(B2:A1)")
    with pytest.raises(FormulaError):
        refs_of("=XFE1")


def test_dedup_bound():
    # output size never exceeds the number of reference tokens
    deps = refs_of("=A1+A1+A1+B2")
    assert [print_a1(d.prec) for d in deps] == ["A1", "B2"]


def test_dependency_is_value_like():
    a = Dependency(parse_range("A1:A3"), CellAddr(2, 1))
    b = Dependency(parse_range("A1:A3"), CellAddr(2, 1))
    assert a == b and hash(a) == hash(b)
