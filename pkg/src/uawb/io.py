"""Plain-text algebra files.

::

    algebra Z2
    size 2
    op mul 2
    0 1
    1 0
    op e 0
    0
    end

Tables are row-major with the last argument varying fastest.  ``#`` starts
a comment that runs to the end of the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .algebra import FiniteAlgebra, OperationTable


class AlgebraFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


_TOKEN = re.compile(r"\S+")


def _tokens(text: str) -> list[_Token]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for m in _TOKEN.finditer(line):
            out.append(_Token(m.group(), i, m.start() + 1))
    return out


def _int(tok: _Token, what: str) -> int:
    if not re.fullmatch(r"-?\d+", tok.text):
        raise AlgebraFormatError(f"expected {what}, found {tok.text!r}", tok.line, tok.column)
    return int(tok.text)


def parse_algebra(text: str) -> FiniteAlgebra:
    toks = _tokens(text)
    pos = 0
    last_line = max(1, len(text.splitlines()))

    def take(what: str) -> _Token:
        nonlocal pos
        if pos >= len(toks):
            raise AlgebraFormatError(f"unexpected end of file, expected {what}", last_line, 1)
        pos += 1
        return toks[pos - 1]

    def keyword(word: str) -> _Token:
        tok = take(f"'{word}'")
        if tok.text != word:
            raise AlgebraFormatError(f"expected '{word}', found {tok.text!r}", tok.line, tok.column)
        return tok

    keyword("algebra")
    name = take("algebra name").text
    keyword("size")
    size_tok = take("size")
    n = _int(size_tok, "a size")
    if n < 1:
        raise AlgebraFormatError("size must be at least 1", size_tok.line, size_tok.column)
    ops = []
    seen = set()
    while True:
        tok = take("'op' or 'end'")
        if tok.text == "end":
            break
        if tok.text != "op":
            raise AlgebraFormatError(f"expected 'op' or 'end', found {tok.text!r}", tok.line, tok.column)
        name_tok = take("operation name")
        if name_tok.text in seen:
            raise AlgebraFormatError(f"duplicate operation {name_tok.text!r}",
                                     name_tok.line, name_tok.column)
        seen.add(name_tok.text)
        ar_tok = take("arity")
        k = _int(ar_tok, "an arity")
        if k < 0:
            raise AlgebraFormatError("arity must be non-negative", ar_tok.line, ar_tok.column)
        values = []
        for _ in range(n ** k):
            t = take(f"table entry for {name_tok.text!r} ({n ** k} expected)")
            if t.text in ("op", "end"):
                raise AlgebraFormatError(
                    f"table of {name_tok.text!r} has {len(values)} entries, expected {n ** k}",
                    t.line, t.column)
            v = _int(t, "a table entry")
            if not 0 <= v < n:
                raise AlgebraFormatError(f"entry {v} out of range 0..{n - 1}", t.line, t.column)
            values.append(v)
        ops.append(OperationTable.from_flat(name_tok.text, k, n, values))
    if pos < len(toks):
        t = toks[pos]
        raise AlgebraFormatError(f"trailing text {t.text!r} after 'end'", t.line, t.column)
    return FiniteAlgebra(name, n, ops)


def print_algebra(A: FiniteAlgebra) -> str:
    """Canonical text: one table row of n entries per line."""
    lines = [f"algebra {A.name}", f"size {A.size}"]
    n = A.size
    for op in A.operations:
        lines.append(f"op {op.name} {op.arity}")
        flat = op.flat()
        row = n if op.arity else 1
        for i in range(0, len(flat), row):
            lines.append(" ".join(map(str, flat[i:i + row])))
    lines.append("end")
    return "\n".join(lines) + "\n"


def read_algebra(path: str | Path) -> FiniteAlgebra:
    return parse_algebra(Path(path).read_text())


def write_algebra(A: FiniteAlgebra, path: str | Path) -> None:
    Path(path).write_text(print_algebra(A))
