import pytest

from sheetgraph.cells import parse_a1
from sheetgraph.sheetio import build_graph, format_dump
from sheetgraph.workloads import (
    TEMPLATES,
    GeneratedSheet,
    WorkloadSpec,
    generate,
    percentiles,
)


def content_at(sheet: GeneratedSheet, addr: str) -> str:
    table = dict(sheet.cells)
    return table[parse_a1(addr)]


def test_run_total_slow_formula_shape():
    sheet = generate(WorkloadSpec("runtotalslow", 3))
    assert content_at(sheet, "B3") == "=SUM($A$1:A3)"
    assert content_at(sheet, "B1") == "=SUM($A$1:A1)"


def test_run_total_fast_degenerate():
    sheet = generate(WorkloadSpec("runtotalfast", 1))
    formulas = [(a, c) for a, c in sheet.cells if c.startswith("=")]
    assert formulas == [(parse_a1("B1"), "=A1")]


def test_rate_formula_shape():
    sheet = generate(WorkloadSpec("rate", 4))
    assert content_at(sheet, "C4") == "=B4*$A$1"
    assert content_at(sheet, "A1") == "0.07"


def test_modify_edit_script():
    sheet = generate(WorkloadSpec("modifyslowtofast", 10, modify_rows=4))
    assert content_at(sheet, "B5") == "=SUM($A$1:A5)"  # base stays slow
    assert sheet.edits == [
        (parse_a1("B2"), "=A2+B1"),
        (parse_a1("B3"), "=A3+B2"),
        (parse_a1("B4"), "=A4+B3"),
        (parse_a1("B5"), "=A5+B4"),
    ]


def test_generation_is_deterministic():
    for kind, kw in [
        ("runtotalfast", {}),
        ("randompatterned", {"seed": 9, "outlier_pct": 0.3}),
    ]:
        a = generate(WorkloadSpec(kind, 20, **kw))
        b = generate(WorkloadSpec(kind, 20, **kw))
        assert format_dump(a.cells) == format_dump(b.cells)


def test_random_patterned_pure_sheets_compress_per_template():
    for seed in range(8):
        sheet = generate(WorkloadSpec("randompatterned", 14, seed=seed, outlier_pct=0.0))
        g = build_graph(sheet.cells, "taco")
        expected = sum(TEMPLATES[t] for t in sheet.templates)
        assert len(g.edges) == expected, (seed, sheet.templates)


def test_spec_validation():
    with pytest.raises(ValueError):
        WorkloadSpec("bogus", 5)
    with pytest.raises(ValueError):
        WorkloadSpec("rate", 0)
    with pytest.raises(ValueError):
        WorkloadSpec("rate", 2_000_000)
    with pytest.raises(ValueError):
        WorkloadSpec("modifyslowtofast", 5, modify_rows=9)
    with pytest.raises(ValueError):
        WorkloadSpec("randompatterned", 5, outlier_pct=1.5)


def test_percentiles_nearest_rank():
    assert percentiles([1, 2, 3, 4]) == {"max": 4, "p75": 3, "median": 2, "mean": 2.5}
    assert percentiles([7.5]) == {"max": 7.5, "p75": 7.5, "median": 7.5, "mean": 7.5}
    assert percentiles([0, 0, 0, 100])["mean"] == 25
    with pytest.raises(ValueError):
        percentiles([])
