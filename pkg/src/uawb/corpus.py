"""Builtin algebras used by the tests, the verification suite and the CLI."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .algebra import FiniteAlgebra, OperationTable
from .terms import Term, Var, parse_term

GROUP_SIGNATURE = (("mul", 2), ("inv", 1), ("e", 0))
MODULE_SIGNATURE = (("+", 2), ("-", 1), ("0", 0))
LATTICE_SIGNATURE = (("meet", 2), ("join", 2))

GROUP_D = parse_term("mul(mul(x,inv(y)),z)")
MODULE_D = parse_term("+(+(x,-(y)),z)")
PROJECTION_D = Var(0)

BUILTIN_TERMS: dict[str, Term] = {
    "group_d": GROUP_D,
    "module_d": MODULE_D,
    "lattice_d": PROJECTION_D,
    "projection": PROJECTION_D,
}


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    algebra: FiniteAlgebra
    kind: str  # group | module | lattice | set
    difference_term: Term | None
    labels: tuple[str, ...]
    # whether the variety generated by the algebra is known to be residually small
    residually_small_variety: bool | None = None
    abelian_group: bool = False

    def element(self, label: str) -> int:
        return self.labels.index(label)


def group_from_elements(name: str, elements: Sequence, mul: Callable, labels=None) -> FiniteAlgebra:
    """Group algebra (mul, inv, e) on ``elements``; the identity must come first."""
    elements = list(elements)
    index = {g: i for i, g in enumerate(elements)}
    n = len(elements)
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    if any(table[0][i] != i or table[i][0] != i for i in range(n)):
        raise ValueError(f"{name}: first element is not the identity")
    inv = [row.index(0) for row in table]
    return FiniteAlgebra(name, n, [
        OperationTable.from_flat("mul", 2, n, [v for row in table for v in row]),
        OperationTable.from_flat("inv", 1, n, inv),
        OperationTable.from_flat("e", 0, n, [0]),
    ])


def cyclic_group(n: int, name: str | None = None) -> FiniteAlgebra:
    return group_from_elements(name or f"Z{n}", range(n), lambda a, b: (a + b) % n)


def abelian_group(orders: Sequence[int], name: str) -> FiniteAlgebra:
    elements = list(itertools.product(*[range(k) for k in orders]))
    return group_from_elements(
        name, elements, lambda a, b: tuple((x + y) % k for x, y, k in zip(a, b, orders)))


def dihedral_group(n: int = 4, name: str | None = None) -> FiniteAlgebra:
    # (i, j) stands for r^i s^j, encoded as i + n*j
    elements = [(i, j) for j in range(2) for i in range(n)]

    def mul(a, b):
        i, j = a
        k, l = b
        return ((i + (k if j == 0 else -k)) % n, (j + l) % 2)

    return group_from_elements(name or f"D{n}", elements, mul)


_QUAT = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def quaternion_group(name: str = "Q8") -> FiniteAlgebra:
    elements = [(s, u) for u in "1ijk" for s in (1, -1)]

    def mul(a, b):
        sign, unit = _QUAT[(a[1], b[1])]
        return (a[0] * b[0] * sign, unit)

    return group_from_elements(name, elements, mul)


def symmetric_group(k: int = 3, name: str | None = None) -> FiniteAlgebra:
    perms = sorted(itertools.permutations(range(k)))
    return group_from_elements(name or f"S{k}", perms,
                               lambda p, q: tuple(p[q[x]] for x in range(k)))


def module_zn(n: int, name: str | None = None) -> FiniteAlgebra:
    return FiniteAlgebra(name or f"Z{n}mod", n, [
        OperationTable.from_function("+", 2, n, lambda a, b: (a + b) % n),
        OperationTable.from_function("-", 1, n, lambda a: (-a) % n),
        OperationTable.from_flat("0", 0, n, [0]),
    ])


def lattice_from_order(name: str, n: int, leq: Callable[[int, int], bool]) -> FiniteAlgebra:
    def bound(a, b, upper):
        cands = [c for c in range(n) if (leq(a, c) and leq(b, c) if upper else leq(c, a) and leq(c, b))]
        best = [c for c in cands if all((leq(c, d) if upper else leq(d, c)) for d in cands)]
        if len(best) != 1:
            raise ValueError(f"{name}: not a lattice at {a}, {b}")
        return best[0]

    return FiniteAlgebra(name, n, [
        OperationTable.from_function("meet", 2, n, lambda a, b: bound(a, b, False)),
        OperationTable.from_function("join", 2, n, lambda a, b: bound(a, b, True)),
    ])


def chain(n: int) -> FiniteAlgebra:
    return lattice_from_order(f"chain{n}", n, lambda a, b: a <= b)


def m3() -> FiniteAlgebra:
    # 0 bottom, 1-3 atoms, 4 top
    return lattice_from_order("M3", 5, lambda a, b: a == b or a == 0 or b == 4)


def n5() -> FiniteAlgebra:
    # 0 < 1 < 2 < 4 and 0 < 3 < 4
    order = {(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)}
    return lattice_from_order("N5", 5, lambda a, b: a == b or (a, b) in order)


def bare_set(n: int) -> FiniteAlgebra:
    return FiniteAlgebra(f"set{n}", n, [])


def _labels_dihedral():
    return tuple(("r%d" % i if i else "e") if j == 0 else ("r%ds" % i if i else "s")
                 for j in range(2) for i in range(4))


@lru_cache(maxsize=None)
def _entries() -> tuple[CorpusEntry, ...]:
    quat = tuple(("" if s > 0 else "-") + u for u in "1ijk" for s in (1, -1))
    s3 = tuple("".join(map(str, p)) for p in sorted(itertools.permutations(range(3))))
    num = lambda n: tuple(str(i) for i in range(n))  # noqa: E731

    def group(name, alg, labels, rs, abelian):
        return CorpusEntry(name, alg, "group", GROUP_D, labels, rs, abelian)

    entries = [
        group("trivial", cyclic_group(1, "trivial"), ("e",), True, True),
        group("z2", cyclic_group(2), num(2), True, True),
        group("z3", cyclic_group(3), num(3), True, True),
        group("z4", cyclic_group(4), num(4), True, True),
        group("z6", cyclic_group(6), num(6), True, True),
        group("z8", cyclic_group(8), num(8), True, True),
        group("klein", abelian_group((2, 2), "V4"), ("00", "01", "10", "11"), True, True),
        group("z2xz4", abelian_group((2, 4), "Z2xZ4"),
              tuple(f"{a}{b}" for a in range(2) for b in range(4)), True, True),
        group("z2^3", abelian_group((2, 2, 2), "Z2^3"),
              tuple(f"{a}{b}{c}" for a in range(2) for b in range(2) for c in range(2)), True, True),
        # varieties of finite groups are residually small iff all Sylow subgroups are abelian
        group("d4", dihedral_group(4, "D4"), _labels_dihedral(), False, False),
        group("q8", quaternion_group("Q8"), quat, False, False),
        group("s3", symmetric_group(3, "S3"), s3, True, False),
        CorpusEntry("z4mod", module_zn(4, "Z4mod"), "module", MODULE_D, num(4), True, False),
        CorpusEntry("chain2", chain(2), "lattice", PROJECTION_D, num(2), True),
        CorpusEntry("chain3", chain(3), "lattice", PROJECTION_D, num(3), True),
        CorpusEntry("chain5", chain(5), "lattice", PROJECTION_D, num(5), True),
        CorpusEntry("m3", m3(), "lattice", PROJECTION_D, ("0", "a", "b", "c", "1"), True),
        CorpusEntry("n5", n5(), "lattice", PROJECTION_D, ("0", "a", "b", "c", "1"), True),
        CorpusEntry("set3", bare_set(3), "set", None, num(3), None),
        CorpusEntry("set4", bare_set(4), "set", None, num(4), None),
    ]
    return tuple(entries)


def builtin_corpus() -> list[CorpusEntry]:
    return list(_entries())


def corpus_entry(name: str) -> CorpusEntry:
    for e in _entries():
        if e.name == name:
            return e
    raise KeyError(f"no builtin algebra named {name!r}")


def corpus_algebra(name: str) -> FiniteAlgebra:
    return corpus_entry(name).algebra


def corpus_names() -> list[str]:
    return [e.name for e in _entries()]
