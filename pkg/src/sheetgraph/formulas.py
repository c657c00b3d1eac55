"""Extraction of range references and their dollar-sign hints from formulas.

Only reference extraction matters to the dependency graph, so this is a
lightweight tokenizer (strings, numbers, words, punctuation) rather than a
full expression grammar. Formulas are never evaluated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .cells import (
    A1ParseError,
    CellAddr,
    GridBoundsError,
    Range,
    cell_range,
    in_grid,
    letters_to_col,
)


class FormulaError(ValueError):
    """Formula rejected; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


@dataclass(frozen=True, slots=True)
class FixednessHints:
    """Which corners of a reference carried `$` column/row markers."""

    head_col_fixed: bool = False
    head_row_fixed: bool = False
    tail_col_fixed: bool = False
    tail_row_fixed: bool = False

    @property
    def head_fixed(self) -> bool:
        """A corner counts as fixed only when both its markers are set."""
        return self.head_col_fixed and self.head_row_fixed

    @property
    def tail_fixed(self) -> bool:
        return self.tail_col_fixed and self.tail_row_fixed


NO_HINTS = FixednessHints()


@dataclass(frozen=True, slots=True)
class Dependency:
    """One uncompressed edge: referenced range -> formula cell."""

    prec: Range
    dep: CellAddr
    hints: FixednessHints = NO_HINTS


_WORD_RE = re.compile(r"[A-Za-z0-9_.$]+")
_CELL_TOKEN_RE = re.compile(r"(\$?)([A-Za-z]{1,3})(\$?)([0-9]{1,7})")

# Functions whose references are computed at evaluation time; the graph
# cannot represent them, so they are rejected rather than silently dropped.
_DYNAMIC_REF_FUNCS = {"INDIRECT", "OFFSET"}


def _cell_of(token: str, offset: int) -> tuple[CellAddr, bool, bool]:
    m = _CELL_TOKEN_RE.fullmatch(token)
    if m is None:
        raise FormulaError(f"malformed reference {token!r}", offset)
    c = CellAddr(letters_to_col(m.group(2).upper()), int(m.group(4)))
    if not in_grid(c):
        raise FormulaError(f"reference {token!r} is outside the grid", offset)
    return c, m.group(1) == "$", m.group(3) == "$"


def _looks_like_cell(token: str) -> bool:
    return _CELL_TOKEN_RE.fullmatch(token) is not None


def extract_refs(formula: str, at: CellAddr) -> list[Dependency]:
    """Extract one Dependency per distinct referenced range.

    The formula must begin with '='. References are literal A1-style; names,
    table references, dynamic-reference functions and cross-sheet references
    are rejected. Duplicated ranges are reported once, first occurrence
    winning (its hints are the ones kept). A formula with no references
    returns [].
    """
    if not formula.startswith("="):
        raise FormulaError("formula must begin with '='", 0)

    deps: list[Dependency] = []
    seen: set[Range] = set()
    depth = 0
    k, n = 1, len(formula)
    while k < n:
        ch = formula[k]
        if ch in " \t":
            k += 1
            continue
        if ch == '"':
            end = k + 1
            while True:
                nxt = formula.find('"', end)
                if nxt == -1:
                    raise FormulaError("unterminated string literal", k)
                if nxt + 1 < n and formula[nxt + 1] == '"':   # doubled quote escape
                    end = nxt + 2
                    continue
                k = nxt + 1
                break
            continue
        if ch == "'":
            raise FormulaError("quoted sheet names are not supported", k)
        if ch == "(":
            depth += 1
            k += 1
            continue
        if ch == ")":
            depth -= 1
            if depth < 0:
                raise FormulaError("unbalanced parentheses", k)
            k += 1
            continue
        m = _WORD_RE.match(formula, k)
        if m is None:
            if ch in "+-*/^&%,;<>=.{}":
                k += 1
                continue
            raise FormulaError(f"unexpected character {ch!r}", k)

        word, start = m.group(0), k
        k = m.end()
        follower = formula[k] if k < n else ""
        if word[0].isdigit() or word[0] == ".":
            continue  # numeric literal (incl. 1e5-style exponents)
        if follower == "(":
            if word.upper() in _DYNAMIC_REF_FUNCS:
                raise FormulaError(f"dynamic reference function {word}()", start)
            continue  # ordinary function name
        if follower == "!":
            raise FormulaError("cross-sheet references are not supported", start)
        if follower == "[":
            raise FormulaError("table references are not supported", start)
        if not _looks_like_cell(word):
            raise FormulaError(f"unknown name {word!r}", start)

        head, hcf, hrf = _cell_of(word, start)
        if follower == ":":
            m2 = _WORD_RE.match(formula, k + 1)
            if m2 is None or not _looks_like_cell(m2.group(0)):
                raise FormulaError("malformed range tail", k + 1)
            tail, tcf, trf = _cell_of(m2.group(0), k + 1)
            k = m2.end()
            if head.i > tail.i or head.j > tail.j:
                raise FormulaError("range corners out of order", start)
            prec = Range(head, tail)
            hints = FixednessHints(hcf, hrf, tcf, trf)
        else:
            prec = cell_range(head)
            hints = FixednessHints(hcf, hrf, hcf, hrf)

        if prec not in seen:
            seen.add(prec)
            deps.append(Dependency(prec, at, hints))

    if depth != 0:
        raise FormulaError("unbalanced parentheses", n)
    return deps
