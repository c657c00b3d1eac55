import random
import time
from collections import Counter

from sheetgraph.cells import COLUMN, ROW, CellAddr, Offset, Range, parse_a1, parse_range
from sheetgraph.formulas import Dependency
from sheetgraph.patterns import (
    ABOVE,
    EMPTY_META,
    CompressedEdge,
    PatternKind,
    PatternMeta,
    decompress,
    find_dep,
    find_prec,
    rel,
    remove_dep,
    run_axis,
    single_edge,
    try_compress,
)

from edgegen import PATTERN_KINDS, dep_subruns, make_edge, prec_probes
from oracles import cellset, oracle_decompress, oracle_find_dep, oracle_find_prec, raw_pair


def dep_of(prec_text, dep_text):
    return Dependency(parse_range(prec_text), parse_a1(dep_text))


def rr_edge_fig_a():
    # sliding-window example: C1:C4 each referencing a 2x3 window two
    # columns to the left
    meta = PatternMeta(h_rel=Offset(-2, 0), t_rel=Offset(-1, 2), axis=COLUMN)
    return CompressedEdge(parse_range("A1:B6"), parse_range("C1:C4"), PatternKind.RR, meta, 4)


def test_rel_examples():
    assert rel(dep_of("A5:B7", "C5")) == (Offset(-2, 0), Offset(-1, 2))
    assert rel(dep_of("B1", "B1")) == (Offset(0, 0), Offset(0, 0))
    assert rel(dep_of("A1:A3", "B2")) == (Offset(-1, -1), Offset(-1, 1))


def test_rr_extend():
    e = rr_edge_fig_a()
    merged = try_compress(e, dep_of("A5:B7", "C5"), PatternKind.RR, COLUMN)
    assert merged is not None
    assert merged.prec == parse_range("A1:B7")
    assert merged.dep == parse_range("C1:C5")
    assert merged.pattern is PatternKind.RR and merged.meta == e.meta
    assert merged.count == 5
    assert oracle_decompress(merged) == oracle_decompress(e) + Counter(
        [raw_pair(parse_range("A5:B7"), parse_a1("C5"))]
    )
    # mismatched relative positions are rejected
    assert try_compress(e, dep_of("A5:B9", "C5"), PatternKind.RR, COLUMN) is None


def test_ff_mint_from_singles():
    e = single_edge(dep_of("A1:B3", "C1"))
    merged = try_compress(e, dep_of("A1:B3", "C2"), PatternKind.FF, COLUMN)
    assert merged is not None
    assert merged.pattern is PatternKind.FF
    assert merged.meta.h_fix == CellAddr(1, 1) and merged.meta.t_fix == CellAddr(2, 3)
    assert merged.prec == parse_range("A1:B3") and merged.dep == parse_range("C1:C2")
    assert merged.count == 2


def test_find_dep_examples():
    assert find_dep(rr_edge_fig_a(), parse_range("A3:B3")) == parse_range("C1:C3")

    rf = CompressedEdge(
        parse_range("A1:B4"),
        parse_range("C1:C4"),
        PatternKind.RF,
        PatternMeta(h_rel=Offset(-2, 0), t_fix=CellAddr(2, 4), axis=COLUMN),
        4,
    )
    assert find_dep(rf, parse_range("A3")) == parse_range("C1:C3")

    ff = CompressedEdge(
        parse_range("A1:B3"),
        parse_range("C1:C4"),
        PatternKind.FF,
        PatternMeta(h_fix=CellAddr(1, 1), t_fix=CellAddr(2, 3), axis=COLUMN),
        4,
    )
    for probe in ["A1", "B2:B3", "A1:B3"]:
        assert find_dep(ff, parse_range(probe)) == parse_range("C1:C4")

    chain = CompressedEdge(
        parse_range("A1:A3"),
        parse_range("A2:A4"),
        PatternKind.RR_CHAIN,
        PatternMeta(h_rel=Offset(0, -1), t_rel=Offset(0, -1), chain_dir=ABOVE, axis=COLUMN),
        3,
    )
    assert find_dep(chain, parse_range("A1")) == parse_range("A2:A4")
    assert find_dep(chain, parse_range("A2")) == parse_range("A3:A4")


def test_find_prec_examples():
    assert find_prec(rr_edge_fig_a(), parse_range("C2:C3")) == parse_range("A2:B5")

    rf = CompressedEdge(
        parse_range("A1:B4"),
        parse_range("C1:C4"),
        PatternKind.RF,
        PatternMeta(h_rel=Offset(-2, 0), t_fix=CellAddr(2, 4), axis=COLUMN),
        4,
    )
    assert find_prec(rf, parse_range("C3")) == parse_range("A3:B4")

    ff = CompressedEdge(
        parse_range("A1:B3"),
        parse_range("C1:C4"),
        PatternKind.FF,
        PatternMeta(h_fix=CellAddr(1, 1), t_fix=CellAddr(2, 3), axis=COLUMN),
        4,
    )
    assert find_prec(ff, parse_range("C2:C4")) == parse_range("A1:B3")


def test_remove_dep_examples():
    pieces = remove_dep(rr_edge_fig_a(), parse_range("C2"))
    assert [(p.prec, p.dep, p.pattern, p.count) for p in pieces] == [
        (parse_range("A1:B3"), parse_range("C1"), PatternKind.SINGLE, 1),
        (parse_range("A3:B6"), parse_range("C3:C4"), PatternKind.RR, 2),
    ]
    assert pieces[0].meta == EMPTY_META
    assert pieces[1].meta == rr_edge_fig_a().meta

    assert remove_dep(rr_edge_fig_a(), parse_range("C1:C4")) == []

    chain = CompressedEdge(
        parse_range("A1:A3"),
        parse_range("A2:A4"),
        PatternKind.RR_CHAIN,
        PatternMeta(h_rel=Offset(0, -1), t_rel=Offset(0, -1), chain_dir=ABOVE, axis=COLUMN),
        3,
    )
    pieces = remove_dep(chain, parse_range("A3"))
    assert [(p.prec, p.dep, p.pattern) for p in pieces] == [
        (parse_range("A1"), parse_range("A2"), PatternKind.SINGLE),
        (parse_range("A3"), parse_range("A4"), PatternKind.SINGLE),
    ]


def test_kernels_match_oracle_randomized():
    rng = random.Random(42)
    for kind in PATTERN_KINDS:
        for axis in (COLUMN, ROW):
            for _ in range(25):
                e = make_edge(rng, kind, axis, rng.randint(2, 10))
                for r in prec_probes(e, rng):
                    got = find_dep(e, r)
                    assert cellset(got) == oracle_find_dep(e, r), (kind, axis, e, r)
                for s in dep_subruns(e):
                    assert cellset(find_prec(e, s)) == oracle_find_prec(e, s), (kind, axis, e, s)
                    pieces = remove_dep(e, s)
                    left = Counter()
                    for p in pieces:
                        left += oracle_decompress(p)
                    expect = Counter(
                        {pd: n for pd, n in oracle_decompress(e).items() if not _in_run(pd[1], s)}
                    )
                    assert left == expect, (kind, axis, e, s)


def _in_run(c, s):
    return s.head.i <= c[0] <= s.tail.i and s.head.j <= c[1] <= s.tail.j


def test_try_compress_rebuilds_random_edges():
    # inserting an edge's own dependencies one by one reproduces it exactly
    rng = random.Random(99)
    for kind in PATTERN_KINDS:
        for axis in (COLUMN, ROW):
            for _ in range(25):
                target = make_edge(rng, kind, axis, rng.randint(2, 10))
                deps = [Dependency(prec, c) for prec, c in decompress(target)]
                if rng.random() < 0.5:
                    deps.reverse()  # grow from either end
                e = single_edge(deps[0])
                for d in deps[1:]:
                    e = try_compress(e, d, kind, axis)
                    assert e is not None, (kind, axis, target)
                assert (e.prec, e.dep, e.pattern, e.meta, e.count) == (
                    target.prec,
                    target.dep,
                    target.pattern,
                    target.meta,
                    target.count,
                )
                assert oracle_decompress(e) == oracle_decompress(target)


def test_try_compress_rejects_mismatches():
    rng = random.Random(7)
    rejected = 0
    for _ in range(200):
        kind = rng.choice(PATTERN_KINDS)
        e = make_edge(rng, kind, COLUMN, 4)
        # a dependency adjacent below the run but with perturbed geometry
        c = CellAddr(e.dep.tail.i, e.dep.tail.j + 1)
        prec = Range(
            CellAddr(max(1, c.i + rng.randint(-9, 9)), max(1, c.j + rng.randint(-9, 9))),
            CellAddr(c.i + 12, c.j + 12),
        )
        merged = try_compress(e, Dependency(prec, c), kind, COLUMN)
        if merged is None:
            rejected += 1
        else:
            assert oracle_decompress(merged) == oracle_decompress(e) + Counter([raw_pair(prec, c)])
    assert rejected > 150  # nearly all random perturbations are incompatible


def test_run_axis():
    assert run_axis(parse_range("C1:C4")) == COLUMN
    assert run_axis(parse_range("C4:D4")) == ROW
    assert run_axis(parse_range("C4")) == COLUMN


def _best_of(fn, n=7, loops=200):
    best = float("inf")
    for _ in range(n):
        t0 = time.perf_counter()
        for _ in range(loops):
            fn()
        best = min(best, time.perf_counter() - t0)
    return best


def test_key_functions_time_independent_of_count():
    # kernel work must not scale with the number of compressed dependencies
    rng = random.Random(1)
    small = make_edge(rng, PatternKind.RR, COLUMN, 10)
    big_dep = Range(CellAddr(50, 1), CellAddr(50, 1_000_000))
    big = CompressedEdge(
        Range(big_dep.head + small.meta.h_rel, big_dep.tail + small.meta.t_rel),
        big_dep,
        PatternKind.RR,
        small.meta,
        big_dep.area,
    )
    for e in (small, big):
        assert find_dep(e, e.prec) == e.dep

    probe_small = Range(small.prec.head, small.prec.head)
    probe_big = Range(big.prec.head, big.prec.head)
    cases = [
        (lambda: find_dep(small, probe_small), lambda: find_dep(big, probe_big)),
        (lambda: find_prec(small, small.dep), lambda: find_prec(big, big.dep)),
        (
            lambda: remove_dep(small, Range(small.dep.head, small.dep.head)),
            lambda: remove_dep(big, Range(big.dep.head, big.dep.head)),
        ),
    ]
    for f_small, f_big in cases:
        t_small, t_big = _best_of(f_small), _best_of(f_big)
        assert t_big < 2 * t_small + 1e-4, (t_small, t_big)
