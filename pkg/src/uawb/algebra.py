"""Finite algebras as operation tables, with products, quotients, subalgebras
and homomorphisms.

Elements of an algebra of size ``n`` are the integers ``0..n-1``.  A k-ary
operation is an ``n**k`` table stored row-major with the last argument varying
fastest, i.e. a C-ordered array of shape ``(n,) * k``.

Products encode a tuple ``(a_1, ..., a_m)`` in mixed radix with the first
factor most significant, exactly as ``numpy.ravel_multi_index`` does.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .partition import Partition


class SignatureError(ValueError):
    pass


class NotACongruenceError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class OperationTable:
    name: str
    arity: int
    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        if self.arity < 0:
            raise ValueError("negative arity")
        if table.ndim != self.arity or (self.arity and len(set(table.shape)) != 1):
            raise ValueError(f"operation {self.name}: table shape {table.shape} "
                             f"does not fit arity {self.arity}")
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    @classmethod
    def from_flat(cls, name: str, arity: int, n: int, values: Sequence[int]) -> "OperationTable":
        if len(values) != n ** arity:
            raise ValueError(f"operation {name}: expected {n ** arity} entries, got {len(values)}")
        return cls(name, arity, np.asarray(values, dtype=np.int64).reshape((n,) * arity))

    @classmethod
    def from_function(cls, name: str, arity: int, n: int, fn) -> "OperationTable":
        values = [fn(*args) for args in itertools.product(range(n), repeat=arity)]
        return cls.from_flat(name, arity, n, values)

    def flat(self) -> list[int]:
        return [int(v) for v in self.table.reshape(-1)]

    def __call__(self, *args: int) -> int:
        return int(self.table[args])


class FiniteAlgebra:
    """A finite algebra on {0..size-1}.

    ``factors`` is set by :func:`make_product` so that product congruences can
    be formed against the stable element encoding.
    """

    def __init__(self, name: str, size: int, operations: Iterable[OperationTable],
                 factors: tuple["FiniteAlgebra", ...] | None = None):
        if size < 1:
            raise ValueError("algebras must be non-empty")
        self.name = name
        self.size = int(size)
        self.operations = tuple(operations)
        self.factors = factors
        self._ops = {}
        for op in self.operations:
            if op.name in self._ops:
                raise SignatureError(f"duplicate operation name {op.name!r}")
            if op.arity and op.table.shape[0] != size:
                raise ValueError(f"operation {op.name}: table is not over {size} elements")
            if op.table.size and (op.table.min() < 0 or op.table.max() >= size):
                raise ValueError(f"operation {op.name}: entry out of range 0..{size - 1}")
            self._ops[op.name] = op
        # lazily filled by other modules; never affects results
        self._cache: dict = {}

    @property
    def signature(self) -> tuple[tuple[str, int], ...]:
        return tuple((op.name, op.arity) for op in self.operations)

    @property
    def universe(self) -> range:
        return range(self.size)

    def operation(self, name: str) -> OperationTable:
        try:
            return self._ops[name]
        except KeyError:
            raise SignatureError(f"no operation {name!r} in {self.name}") from None

    def __getitem__(self, name: str) -> OperationTable:
        return self.operation(name)

    def same_tables(self, other: "FiniteAlgebra") -> bool:
        return (self.size == other.size and self.signature == other.signature
                and all(np.array_equal(a.table, b.table)
                        for a, b in zip(self.operations, other.operations)))

    def __repr__(self):
        sig = ", ".join(f"{n}/{k}" for n, k in self.signature)
        return f"FiniteAlgebra({self.name!r}, size={self.size}, [{sig}])"


def check_compatible(algebras: Sequence[FiniteAlgebra]) -> None:
    first = algebras[0].signature
    for other in algebras[1:]:
        sig = other.signature
        if sig == first:
            continue
        for (n1, k1), (n2, k2) in itertools.zip_longest(first, sig, fillvalue=(None, None)):
            if (n1, k1) != (n2, k2):
                raise SignatureError(
                    f"signature mismatch between {algebras[0].name} and {other.name} "
                    f"at operation {n1 if n1 is not None else n2!r}")


@dataclass(frozen=True, eq=False)
class Homomorphism:
    """A map between algebras; not verified on construction."""
    source: FiniteAlgebra
    target: FiniteAlgebra
    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(v) for v in self.map)
        if len(m) != self.source.size or any(not 0 <= v < self.target.size for v in m):
            raise ValueError("map is not a total function into the target universe")
        object.__setattr__(self, "map", m)

    def __call__(self, a: int) -> int:
        return self.map[a]

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.map, dtype=np.int64)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.map)))

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.size


def homomorphism_witness(h: Homomorphism):
    """First ``(operation name, argument tuple)`` not preserved by ``h``.

    Operations are scanned in order of increasing arity, then declaration
    order, so constants are reported before anything else.
    """
    check_compatible([h.source, h.target])
    m = h.array
    for op in sorted(h.source.operations, key=lambda o: o.arity):
        lhs = m[op.table]
        target = h.target.operation(op.name).table
        if op.arity == 0:
            if lhs != target:
                return op.name, ()
            continue
        rhs = target[np.ix_(*[m] * op.arity)]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return op.name, tuple(int(v) for v in bad[0])
    return None


def is_homomorphism(h: Homomorphism) -> bool:
    return homomorphism_witness(h) is None


def is_embedding(h: Homomorphism) -> bool:
    return h.is_injective() and is_homomorphism(h)


def identity_map(A: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(A, A, tuple(range(A.size)))


def compose_maps(g: Homomorphism, h: Homomorphism) -> Homomorphism:
    """``g`` after ``h``."""
    return Homomorphism(h.source, g.target, tuple(g.map[v] for v in h.map))


def make_product(factors: Sequence[FiniteAlgebra], name: str | None = None
                 ) -> tuple[FiniteAlgebra, list[Homomorphism]]:
    if not factors:
        raise ValueError("empty product")
    check_compatible(factors)
    sizes = tuple(F.size for F in factors)
    N = int(np.prod(sizes))
    coords = np.unravel_index(np.arange(N), sizes)
    ops = []
    for j, (opname, k) in enumerate(factors[0].signature):
        parts = []
        for i, F in enumerate(factors):
            T = F.operations[j].table
            if k == 0:
                parts.append(T)
                continue
            idx = tuple(coords[i].reshape((N,) if k == 1 else
                                          tuple(N if a == b else 1 for b in range(k)))
                        for a in range(k))
            parts.append(T[idx])
        table = np.ravel_multi_index(tuple(parts), sizes)
        ops.append(OperationTable(opname, k, table))
    name = name or "x".join(F.name for F in factors)
    P = FiniteAlgebra(name, N, ops, factors=tuple(factors))
    projections = [Homomorphism(P, F, tuple(coords[i])) for i, F in enumerate(factors)]
    return P, projections


def encode(sizes: Sequence[int], coords: Sequence[int]) -> int:
    return int(np.ravel_multi_index(tuple(coords), tuple(sizes)))


def decode(sizes: Sequence[int], u: int) -> tuple[int, ...]:
    return tuple(int(c) for c in np.unravel_index(u, tuple(sizes)))


def make_quotient(A: FiniteAlgebra, theta: Partition, name: str | None = None
                  ) -> tuple[FiniteAlgebra, Homomorphism]:
    from .congruence import congruence_witness

    if theta.size != A.size:
        raise ValueError("size mismatch")
    w = congruence_witness(A, theta)
    if w is not None:
        raise NotACongruenceError(f"not a congruence of {A.name}: {w}", w)
    reps = np.unique(theta.array)
    block = np.searchsorted(reps, theta.array)
    ops = []
    for op in A.operations:
        if op.arity == 0:
            table = block[op.table]
        else:
            table = block[op.table[np.ix_(*[reps] * op.arity)]]
        ops.append(OperationTable(op.name, op.arity, table))
    Q = FiniteAlgebra(name or f"{A.name}/[{theta}]", len(reps), ops)
    return Q, Homomorphism(A, Q, tuple(block))


def subalgebra_generated(A: FiniteAlgebra, seed: Iterable[int]) -> frozenset[int]:
    """Least subuniverse containing ``seed``."""
    inside = np.zeros(A.size, dtype=bool)
    for x in seed:
        if not 0 <= x < A.size:
            raise ValueError(f"{x} is not in the universe of {A.name}")
        inside[x] = True
    for op in A.operations:
        if op.arity == 0:
            inside[op.table[()]] = True
    if not inside.any():
        raise ValueError("empty seed and no constants: the empty subuniverse is not representable")
    while True:
        members = np.flatnonzero(inside)
        before = members.size
        for op in A.operations:
            if op.arity:
                inside[op.table[np.ix_(*[members] * op.arity)].reshape(-1)] = True
        if np.count_nonzero(inside) == before:
            return frozenset(int(x) for x in members)


def is_subuniverse(A: FiniteAlgebra, subset: Iterable[int]) -> bool:
    s = frozenset(subset)
    return bool(s) and subalgebra_generated(A, s) == s


def make_subalgebra(A: FiniteAlgebra, subset: Iterable[int], name: str | None = None
                    ) -> tuple[FiniteAlgebra, Homomorphism]:
    """Subalgebra on a subuniverse, relabelled in ascending order, with its inclusion."""
    members = np.array(sorted(set(subset)), dtype=np.int64)
    if not is_subuniverse(A, members.tolist()):
        raise ValueError("subset is not closed under the operations")
    relabel = np.full(A.size, -1, dtype=np.int64)
    relabel[members] = np.arange(members.size)
    ops = []
    for op in A.operations:
        sub = op.table[np.ix_(*[members] * op.arity)] if op.arity else op.table
        ops.append(OperationTable(op.name, op.arity, relabel[sub]))
    S = FiniteAlgebra(name or f"{A.name}|{{{','.join(map(str, members))}}}", members.size, ops)
    return S, Homomorphism(S, A, tuple(members))


def all_subuniverses(A: FiniteAlgebra) -> list[frozenset[int]]:
    """Every non-empty subuniverse, ordered by (size, elements)."""
    found = set()
    frontier = [subalgebra_generated(A, [x]) for x in A.universe]
    found.update(frontier)
    while frontier:
        nxt = []
        for S in frontier:
            for x in A.universe:
                if x not in S:
                    T = subalgebra_generated(A, S | {x})
                    if T not in found:
                        found.add(T)
                        nxt.append(T)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _generating_sequence(A: FiniteAlgebra) -> list[int]:
    gens: list[int] = []
    have = subalgebra_generated(A, []) if any(op.arity == 0 for op in A.operations) else frozenset()
    while len(have) < A.size:
        x = min(set(A.universe) - have)
        gens.append(x)
        have = subalgebra_generated(A, gens)
    return gens


def find_isomorphism(A: FiniteAlgebra, B: FiniteAlgebra) -> Homomorphism | None:
    """Brute-force isomorphism search, extending images of a generating set."""
    if A.size != B.size or A.signature != B.signature:
        return None
    if all(op.arity == 0 for op in A.operations):
        # only constants: match them up, then anything goes
        fixed = {}
        for op in A.operations:
            a, b = int(op.table[()]), int(B.operation(op.name).table[()])
            if fixed.get(a, b) != b:
                return None
            fixed[a] = b
        if len(set(fixed.values())) != len(fixed):
            return None
        rest_a = [x for x in A.universe if x not in fixed]
        rest_b = [y for y in B.universe if y not in set(fixed.values())]
        mapping = {**fixed, **dict(zip(rest_a, rest_b))}
        return Homomorphism(A, B, tuple(mapping[x] for x in A.universe))
    gens = _generating_sequence(A)
    for images in itertools.permutations(range(B.size), len(gens)):
        m = _extend(A, B, dict(zip(gens, images)))
        if m is not None:
            h = Homomorphism(A, B, tuple(m[x] for x in A.universe))
            if h.is_injective() and is_homomorphism(h):
                return h
    return None


def _extend(A: FiniteAlgebra, B: FiniteAlgebra, m: dict[int, int]) -> dict[int, int] | None:
    for op in A.operations:
        if op.arity == 0:
            a, b = int(op.table[()]), int(B.operation(op.name).table[()])
            if m.setdefault(a, b) != b:
                return None
    used = {}
    for a, b in m.items():
        if used.setdefault(b, a) != a:
            return None
    changed = True
    while changed:
        changed = False
        known = list(m)
        for op in A.operations:
            if op.arity == 0:
                continue
            TB = B.operation(op.name).table
            for args in itertools.product(known, repeat=op.arity):
                a = int(op.table[args])
                b = int(TB[tuple(m[x] for x in args)])
                if a in m:
                    if m[a] != b:
                        return None
                else:
                    if b in used:
                        return None
                    m[a] = b
                    used[b] = a
                    changed = True
        if len(m) == A.size:
            return m
    return m if len(m) == A.size else None


def is_isomorphic(A: FiniteAlgebra, B: FiniteAlgebra) -> bool:
    return find_isomorphism(A, B) is not None
