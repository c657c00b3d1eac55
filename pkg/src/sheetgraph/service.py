"""HTTP facade over loaded sheets for tracing and editing dependencies.

Sessions are in-memory: POST a sheet dump, then trace dependents or
precedents of ranges, window into the grid, and apply edits. Each session
carries a reader-writer lock: traces and grid reads share it, edits take it
exclusively so a trace observes either the pre- or post-edit graph, never a
partial state. An edit that cannot acquire the lock in time is answered
with 409 rather than queueing forever.
"""

from __future__ import annotations

import secrets
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .cells import CellAddr, cell_range, contains, parse_a1, parse_range, print_a1
from .formulas import extract_refs
from .graph import CompressedGraph
from .sheetio import build_graph, parse_dump

EDIT_LOCK_TIMEOUT = 30.0


class _RWLock:
    """Many readers or one writer; writers can time out."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writing = False

    @contextmanager
    def reading(self):
        with self._cond:
            self._cond.wait_for(lambda: not self._writing)
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if not self._readers:
                    self._cond.notify_all()

    def acquire_write(self, timeout: float) -> bool:
        with self._cond:
            if not self._cond.wait_for(
                lambda: not self._writing and not self._readers, timeout
            ):
                return False
            self._writing = True
            return True

    def release_write(self) -> None:
        with self._cond:
            self._writing = False
            self._cond.notify_all()


@dataclass
class SheetSession:
    id: str
    cells: dict[CellAddr, str]
    graph: CompressedGraph
    lock: _RWLock = field(default_factory=_RWLock)


class CreateSheetBody(BaseModel):
    dump: str


class EditOp(BaseModel):
    op: str
    range: str | None = None
    cell: str | None = None
    content: str | None = None


class EditsBody(BaseModel):
    ops: list[EditOp]


class ApiError(Exception):
    def __init__(self, status: int, detail: str):
        self.status = status
        self.detail = detail


def _loc_path(loc) -> str:
    parts = []
    for piece in loc:
        if piece == "body":
            continue
        if isinstance(piece, int):
            parts.append(f"[{piece}]")
        else:
            parts.append(f".{piece}" if parts else str(piece))
    return "".join(parts) or "body"


def create_app(enabled_patterns=None, preload: str | None = None, edit_timeout: float = EDIT_LOCK_TIMEOUT) -> FastAPI:
    app = FastAPI(title="sheetgraph trace service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, SheetSession] = {}
    sessions_lock = threading.Lock()
    app.state.sessions = sessions

    def new_session(dump_text: str) -> SheetSession:
        try:
            cells, lines = parse_dump(dump_text)
            graph = build_graph(cells, "taco", enabled_patterns, lines)
        except ValueError as err:
            raise ApiError(400, f"dump: {err}") from err
        ses = SheetSession(secrets.token_hex(8), dict(cells), graph)
        with sessions_lock:
            sessions[ses.id] = ses
        return ses

    def get_session(sheet_id: str) -> SheetSession:
        with sessions_lock:
            ses = sessions.get(sheet_id)
        if ses is None:
            raise ApiError(404, f"unknown sheet id {sheet_id!r}")
        return ses

    @app.exception_handler(ApiError)
    def _api_error(_: Request, err: ApiError):
        return JSONResponse(status_code=err.status, content={"detail": err.detail})

    @app.exception_handler(RequestValidationError)
    def _validation_error(_: Request, err: RequestValidationError):
        first = err.errors()[0]
        detail = f"{_loc_path(first.get('loc', ()))}: {first.get('msg', 'invalid')}"
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.post("/sheets")
    def create_sheet(body: CreateSheetBody):
        ses = new_session(body.dump)
        return {"id": ses.id}

    @app.get("/sheets/{sheet_id}/grid")
    def grid(sheet_id: str, window: str = "A1:Z100"):
        ses = get_session(sheet_id)
        try:
            w = parse_range(window)
        except ValueError as err:
            raise ApiError(400, f"window: {err}") from err
        with ses.lock.reading():
            rows = [
                {"addr": print_a1(addr), "content": content}
                for addr, content in sorted(ses.cells.items(), key=lambda c: (c[0].i, c[0].j))
                if contains(w, cell_range(addr))
            ]
        return {"cells": rows}

    @app.get("/sheets/{sheet_id}/trace")
    def trace(
        sheet_id: str,
        range_: str = Query(alias="range"),
        direction: str = Query("deps", alias="dir"),
        transitive: bool = True,
    ):
        ses = get_session(sheet_id)
        if direction not in ("deps", "precs"):
            raise ApiError(400, "dir: expected 'deps' or 'precs'")
        try:
            probe = parse_range(range_)
        except ValueError as err:
            raise ApiError(400, f"range: {err}") from err
        with ses.lock.reading():
            t0 = time.perf_counter_ns()
            if direction == "deps":
                rs = ses.graph.find_dependents(probe, transitive)
            else:
                rs = ses.graph.find_precedents(probe, transitive)
            elapsed_us = (time.perf_counter_ns() - t0) // 1000
        return {"ranges": [print_a1(r) for r in rs.ranges()], "elapsed_us": elapsed_us}

    @app.post("/sheets/{sheet_id}/edits")
    def edits(sheet_id: str, body: EditsBody):
        ses = get_session(sheet_id)
        plan = _validate_ops(body.ops)
        if not ses.lock.acquire_write(edit_timeout):
            raise ApiError(409, "edit conflict: session is busy with another edit")
        try:
            for action in plan:
                action(ses)
        finally:
            ses.lock.release_write()
        return ses.graph.stats().as_dict()

    @app.get("/sheets/{sheet_id}/stats")
    def stats(sheet_id: str):
        ses = get_session(sheet_id)
        with ses.lock.reading():
            return ses.graph.stats().as_dict()

    @app.delete("/sheets/{sheet_id}")
    def delete_sheet(sheet_id: str):
        with sessions_lock:
            if sessions.pop(sheet_id, None) is None:
                raise ApiError(404, f"unknown sheet id {sheet_id!r}")
        return {"deleted": True}

    if preload:
        with open(preload, encoding="utf-8") as fh:
            ses = new_session(fh.read())
        print(f"preloaded {preload} as session {ses.id}", flush=True)

    return app


def _validate_ops(ops: list[EditOp]):
    """Pre-validate every op so an edit batch applies atomically or not at all."""
    plan = []
    for k, op in enumerate(ops):
        if op.op == "clear":
            if not op.range:
                raise ApiError(400, f"ops[{k}].range: required for clear")
            try:
                target = parse_range(op.range)
            except ValueError as err:
                raise ApiError(400, f"ops[{k}].range: {err}") from err

            def do_clear(ses, target=target):
                ses.graph.clear_cells(target)
                for addr in [a for a in ses.cells if contains(target, cell_range(a))]:
                    del ses.cells[addr]

            plan.append(do_clear)
        elif op.op == "set":
            if not op.cell:
                raise ApiError(400, f"ops[{k}].cell: required for set")
            if op.content is None:
                raise ApiError(400, f"ops[{k}].content: required for set")
            try:
                addr = parse_a1(op.cell)
                if not isinstance(addr, CellAddr):
                    raise ValueError("expected a single cell")
            except ValueError as err:
                raise ApiError(400, f"ops[{k}].cell: {err}") from err
            content = op.content
            try:
                deps = extract_refs(content, addr) if content.startswith("=") else []
            except ValueError as err:
                raise ApiError(400, f"ops[{k}].content: {err}") from err
            for d in deps:
                if contains(d.prec, cell_range(addr)):
                    raise ApiError(400, f"ops[{k}].content: formula references its own cell")

            def do_set(ses, addr=addr, content=content, deps=deps):
                ses.graph.update_cell(addr, deps)
                ses.cells[addr] = content

            plan.append(do_set)
        else:
            raise ApiError(400, f"ops[{k}].op: expected 'clear' or 'set'")
    return plan
