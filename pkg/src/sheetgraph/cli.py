"""Command-line interface: ingest, query, mutate, benchmark, serve.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from .cells import parse_range
from .rangeset import coalesce
from .sheetio import ENGINES, apply_set, build_graph, load_sheet, patterns_from_env
from .workloads import KINDS, WorkloadSpec, generate, percentiles


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sheetgraph",
        description="Compressed spreadsheet formula dependency graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_engine(p):
        p.add_argument("--engine", choices=ENGINES, default="taco")

    p = sub.add_parser("stats", help="graph size statistics for a sheet dump")
    p.add_argument("file")
    add_engine(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("query", help="transitive dependents or precedents of a range")
    p.add_argument("file")
    p.add_argument("--range", required=True, dest="probe", metavar="A1[:B2]")
    p.add_argument("--dir", required=True, choices=("deps", "precs"))
    add_engine(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="build/query/modify timings as CSV")
    p.add_argument("--workload", required=True, choices=KINDS)
    p.add_argument("--rows", required=True, type=int)
    p.add_argument("--modify-rows", type=int, default=0)
    p.add_argument("--engine", choices=ENGINES, required=True)
    p.add_argument("--repeat", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="start the HTTP trace service")
    p.add_argument("--port", required=True, type=int)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--sheet", help="dump file to preload as a session")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="write the compressed graph as JSON")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    return parser


def cmd_stats(args) -> int:
    _, g = load_sheet(args.file, args.engine, patterns_from_env())
    stats = g.stats().as_dict()
    reduced = {str(k): v for k, v in g.reduced_by_pattern().items()}
    if args.json:
        print(json.dumps({**stats, "reduced": reduced}, indent=2))
        return 0
    for key, value in stats.items():
        shown = f"{value:.3f}" if isinstance(value, float) else value
        print(f"{key:12} {shown}")
    for name, value in reduced.items():
        print(f"reduced[{name}] {value}")
    return 0


def cmd_query(args) -> int:
    _, g = load_sheet(args.file, args.engine, patterns_from_env())
    probe = parse_range(args.probe)
    t0 = time.perf_counter()
    rs = g.find_dependents(probe) if args.dir == "deps" else g.find_precedents(probe)
    elapsed_ms = (time.perf_counter() - t0) * 1000
    ranges = [str(r) for r in coalesce(rs)]
    if args.json:
        print(json.dumps({"ranges": ranges, "elapsed_ms": elapsed_ms}))
    else:
        print(",".join(ranges))
        print(f"elapsed_ms {elapsed_ms:.3f}")
    return 0


def cmd_bench(args) -> int:
    spec = WorkloadSpec(args.workload, args.rows, modify_rows=args.modify_rows)
    sheet = generate(spec)
    patterns = patterns_from_env()
    repeat = max(1, args.repeat)

    builds, queries, modifies = [], [], []
    for _ in range(repeat):
        t0 = time.perf_counter()
        g = build_graph(sheet.cells, args.engine, patterns)
        builds.append((time.perf_counter() - t0) * 1000)

        probe = parse_range("A1")
        t0 = time.perf_counter()
        g.find_dependents(probe)
        queries.append((time.perf_counter() - t0) * 1000)

        if sheet.edits:
            contents = dict(sheet.cells)
            t0 = time.perf_counter()
            for addr, content in sheet.edits:
                apply_set(g, contents, addr, content)
            modifies.append((time.perf_counter() - t0) * 1000)

    def median(xs):
        return f"{percentiles(xs)['median']:.3f}" if xs else ""

    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["workload", "rows", "engine", "build_ms", "query_ms", "modify_ms"])
    writer.writerow(
        [args.workload, args.rows, args.engine, median(builds), median(queries), median(modifies)]
    )
    sys.stdout.write(out.getvalue())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(enabled_patterns=patterns_from_env(), preload=args.sheet)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_export(args) -> int:
    _, g = load_sheet(args.file, "taco", patterns_from_env())
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(g.to_json())
        fh.write("\n")
    print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return 130
    except Exception as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
