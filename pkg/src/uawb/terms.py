"""Terms over a signature: trees of operation symbols with variable leaves."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence, Union

import numpy as np

if TYPE_CHECKING:
    from .algebra import FiniteAlgebra


class TermError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    op: str
    args: tuple["Term", ...] = ()

    def __str__(self):
        return f"{self.op}({','.join(map(str, self.args))})"


Term = Union[Var, App]

_VAR_ALIASES = {"x": 0, "y": 1, "z": 2}
_TOKEN = re.compile(r"\s*([(),]|[^\s(),]+)")


def parse_term(text: str) -> Term:
    """Parse ``mul(mul(x,inv(y)),z)`` style terms.

    ``x``, ``y``, ``z`` and ``x<k>`` are variables; any other bare name is a
    nullary operation.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise TermError(f"cannot tokenize term at {pos}: {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    i = 0

    def expect(tok):
        nonlocal i
        if i >= len(tokens) or tokens[i] != tok:
            raise TermError(f"expected {tok!r} in {text!r}")
        i += 1

    def parse() -> Term:
        nonlocal i
        if i >= len(tokens) or tokens[i] in "(),":
            raise TermError(f"unexpected end or symbol in {text!r}")
        name = tokens[i]
        i += 1
        if i < len(tokens) and tokens[i] == "(":
            i += 1
            args = []
            if tokens[i] != ")":
                args.append(parse())
                while tokens[i] == ",":
                    i += 1
                    args.append(parse())
            expect(")")
            return App(name, tuple(args))
        if name in _VAR_ALIASES:
            return Var(_VAR_ALIASES[name])
        if re.fullmatch(r"x\d+", name):
            return Var(int(name[1:]))
        return App(name, ())

    term = parse()
    if i != len(tokens):
        raise TermError(f"trailing input in {text!r}")
    return term


def num_vars(t: Term) -> int:
    """One more than the largest variable index (0 for ground terms)."""
    if isinstance(t, Var):
        return t.index + 1
    return max((num_vars(a) for a in t.args), default=0)


def check_term(A: "FiniteAlgebra", t: Term) -> None:
    if isinstance(t, Var):
        if t.index < 0:
            raise TermError("negative variable index")
        return
    op = A.operation(t.op)  # raises on unknown name
    if op.arity != len(t.args):
        raise TermError(f"{t.op} has arity {op.arity}, used with {len(t.args)} arguments")
    for a in t.args:
        check_term(A, a)


def eval_term(A: "FiniteAlgebra", t: Term, args: Sequence[int]) -> int:
    check_term(A, t)
    if len(args) < num_vars(t):
        raise TermError(f"term needs {num_vars(t)} arguments, got {len(args)}")

    def ev(s: Term) -> int:
        if isinstance(s, Var):
            return args[s.index]
        op = A.operation(s.op)
        return int(op.table[tuple(ev(a) for a in s.args)])

    return ev(t)


def eval_term_array(A: "FiniteAlgebra", t: Term, args: Sequence[np.ndarray]) -> np.ndarray:
    """Evaluate ``t`` elementwise over broadcastable index arrays."""
    check_term(A, t)
    if len(args) < num_vars(t):
        raise TermError(f"term needs {num_vars(t)} arguments, got {len(args)}")
    args = [np.asarray(a) for a in args]
    shape = np.broadcast_shapes(*(a.shape for a in args)) if args else ()

    def ev(s: Term) -> np.ndarray:
        if isinstance(s, Var):
            return args[s.index]
        table = A.operation(s.op).table
        if not s.args:
            return np.broadcast_to(table[()], shape)
        return table[tuple(ev(a) for a in s.args)]

    return np.broadcast_to(ev(t), shape)
