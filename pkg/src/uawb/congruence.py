"""Congruences of finite algebras and their lattices."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .algebra import FiniteAlgebra, Homomorphism
from .partition import Partition, canonical_reps, merge_reps, meet, partition_join

# rows of translation images materialised at once
_CHUNK_CELLS = 1 << 22


@dataclass(frozen=True)
class CongruenceViolation:
    operation: str
    position: int
    constants: tuple[int, ...]
    pair: tuple[int, int]
    images: tuple[int, int]

    def __str__(self):
        return (f"{self.operation} at argument {self.position} with constants "
                f"{self.constants} maps related {self.pair} to unrelated {self.images}")


def _translations(A: FiniteAlgebra) -> Callable[[np.ndarray], Iterator[np.ndarray]]:
    """Images of elements under every basic unary translation.

    For an index array ``U`` the callback yields arrays of shape
    ``(len(U), m)`` whose column ``j`` is a fixed translation, so images of
    different element arrays can be compared column by column.
    """
    mats = A._cache.get("translations")
    if mats is None:
        # row x of a matrix lists op(.., x, ..) over all choices of the other arguments
        mats = [np.ascontiguousarray(np.moveaxis(op.table, p, 0)).reshape(A.size, -1)
                for op in A.operations if op.arity > 0 for p in range(op.arity)]
        A._cache["translations"] = mats

    def images(U: np.ndarray) -> Iterator[np.ndarray]:
        for M in mats:
            yield M[U]

    return images


def close_reps(reps: np.ndarray, images, chunk_cells: int = _CHUNK_CELLS) -> np.ndarray:
    """Smallest partition above ``reps`` closed under the translations ``images``."""
    n = reps.shape[0]
    frontier = np.flatnonzero(reps != np.arange(n))
    while frontier.size:
        src, dst = [], []
        probe = next(images(frontier[:1]), None)
        width = max(1, probe.shape[1]) if probe is not None else 1
        step = max(1, chunk_cells // width)
        for start in range(0, frontier.size, step):
            U = frontier[start:start + step]
            R = reps[U]
            for iu, ir in zip(images(U), images(R)):
                bad = reps[iu] != reps[ir]
                if bad.any():
                    src.append(iu[bad])
                    dst.append(ir[bad])
        if not src:
            break
        new = merge_reps(reps, np.concatenate(src), np.concatenate(dst))
        frontier = np.flatnonzero(new != reps)
        reps = new
    return reps


def congruence_witness(A: FiniteAlgebra, p: Partition) -> CongruenceViolation | None:
    """First unary translation that breaks ``p``, or None if ``p`` is a congruence."""
    if p.size != A.size:
        raise ValueError(f"partition on {p.size} elements, algebra has {A.size}")
    reps = p.array
    for op in A.operations:
        if op.arity == 0:
            continue
        labels = reps[op.table]
        for pos in range(op.arity):
            moved = np.take(labels, reps, axis=pos)
            bad = np.argwhere(moved != labels)
            if bad.size:
                cell = tuple(int(v) for v in bad[0])
                x = cell[pos]
                y = int(reps[x])
                consts = cell[:pos] + cell[pos + 1:]
                args_x = cell
                args_y = cell[:pos] + (y,) + cell[pos + 1:]
                return CongruenceViolation(op.name, pos, consts, (y, x),
                                           (int(op.table[args_y]), int(op.table[args_x])))
    return None


def is_congruence(A: FiniteAlgebra, p: Partition) -> bool:
    return congruence_witness(A, p) is None


def generate_congruence(A: FiniteAlgebra, pairs: Iterable[tuple[int, int]] = (),
                        start: Partition | None = None) -> Partition:
    """Least congruence containing ``start`` and ``pairs``."""
    pairs = list(pairs)
    reps = np.arange(A.size) if start is None else start.array.copy()
    if pairs:
        a = np.array([x for x, _ in pairs], dtype=np.int64)
        b = np.array([y for _, y in pairs], dtype=np.int64)
        reps = merge_reps(reps, a, b)
    return Partition._trusted(close_reps(reps, _translations(A)))


def principal_congruence(A: FiniteAlgebra, a: int, b: int) -> Partition:
    if not (0 <= a < A.size and 0 <= b < A.size):
        raise ValueError("elements out of range")
    if a == b:
        return Partition.zero(A.size)
    key = (min(a, b), max(a, b))
    cache = A._cache.setdefault("cg", {})
    if key not in cache:
        cache[key] = generate_congruence(A, [key])
    return cache[key]


def join(A: FiniteAlgebra, p: Partition, q: Partition) -> Partition:
    """Congruence join: transitive closure of the union, then congruence closure."""
    return generate_congruence(A, start=partition_join(p, q))


class CongruenceLattice:
    """All congruences of an algebra, sorted by their canonical arrays."""

    def __init__(self, algebra: FiniteAlgebra, elements: Iterable[Partition]):
        self.algebra = algebra
        self.elements = tuple(sorted(set(elements), key=lambda p: p.reps))
        self._index = {p: i for i, p in enumerate(self.elements)}
        n = algebra.size
        self.bottom = self._index[Partition.zero(n)]
        self.top = self._index[Partition.one(n)]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p):
        return p in self._index

    def __getitem__(self, i: int) -> Partition:
        return self.elements[i]

    def index(self, p: Partition) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise ValueError(f"{p} is not a congruence of {self.algebra.name}") from None

    @property
    def zero(self) -> Partition:
        return self.elements[self.bottom]

    @property
    def one(self) -> Partition:
        return self.elements[self.top]

    @cached_property
    def leq(self) -> np.ndarray:
        """``leq[i, j]`` iff element i refines element j."""
        P = np.array([p.reps for p in self.elements], dtype=np.int64)
        m = len(P)
        out = np.empty((m, m), dtype=bool)
        for j in range(m):
            out[:, j] = (P[j][P] == P[j]).all(axis=1)
        out.flags.writeable = False
        return out

    @cached_property
    def join_table(self) -> np.ndarray:
        return self._bound_table(self.leq)

    @cached_property
    def meet_table(self) -> np.ndarray:
        return self._bound_table(self.leq.T)

    @staticmethod
    def _bound_table(leq: np.ndarray) -> np.ndarray:
        # least upper bound = the upper bound with the most elements above it
        m = leq.shape[0]
        upcount = leq.sum(axis=1)
        out = np.empty((m, m), dtype=np.int64)
        for i in range(m):
            common = leq[i][None, :] & leq
            out[i] = np.where(common, upcount[None, :], -1).argmax(axis=1)
        return out

    @cached_property
    def covers(self) -> np.ndarray:
        """``covers[i, j]`` iff j covers i."""
        strict = self.leq & ~np.eye(len(self), dtype=bool)
        between = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        return strict & ~between

    def meet(self, p: Partition, q: Partition) -> Partition:
        return self.elements[self.meet_table[self.index(p), self.index(q)]]

    def join(self, p: Partition, q: Partition) -> Partition:
        return self.elements[self.join_table[self.index(p), self.index(q)]]

    def upper_covers(self, p: Partition) -> list[Partition]:
        i = self.index(p)
        return [self.elements[j] for j in np.flatnonzero(self.covers[i])]

    def lower_covers(self, p: Partition) -> list[Partition]:
        j = self.index(p)
        return [self.elements[i] for i in np.flatnonzero(self.covers[:, j])]

    def atoms(self) -> list[Partition]:
        return self.upper_covers(self.zero)

    def height(self) -> int:
        """Length of the longest chain from 0 to 1."""
        order = np.argsort(self.leq.sum(axis=0))  # fewer elements below first
        depth = np.zeros(len(self), dtype=np.int64)
        for j in order:
            below = np.flatnonzero(self.covers[:, j])
            if below.size:
                depth[j] = depth[below].max() + 1
        return int(depth[self.top])

    def above(self, p: Partition) -> list[Partition]:
        i = self.index(p)
        return [self.elements[j] for j in np.flatnonzero(self.leq[i])]

    def below(self, p: Partition) -> list[Partition]:
        j = self.index(p)
        return [self.elements[i] for i in np.flatnonzero(self.leq[:, j])]

    def meet_all(self, ps: Iterable[Partition]) -> Partition:
        i = self.top
        for p in ps:
            i = self.meet_table[i, self.index(p)]
        return self.elements[i]

    def join_all(self, ps: Iterable[Partition]) -> Partition:
        i = self.bottom
        for p in ps:
            i = self.join_table[i, self.index(p)]
        return self.elements[i]


def principal_congruences(A: FiniteAlgebra) -> dict[tuple[int, int], Partition]:
    return {(a, b): principal_congruence(A, a, b)
            for a in range(A.size) for b in range(a + 1, A.size)}


def congruence_lattice(A: FiniteAlgebra) -> CongruenceLattice:
    """Con(A): principal congruences closed under binary joins, plus 0."""
    if "lattice" in A._cache:
        return A._cache["lattice"]
    n = A.size
    principals = sorted(set(principal_congruences(A).values()), key=lambda p: p.reps)
    found = {Partition.zero(n), *principals}
    # every congruence is a join of principal ones, and joins of congruences
    # are their joins as equivalence relations
    frontier = list(principals)
    while frontier:
        nxt = []
        for p in frontier:
            for q in principals:
                r = partition_join(p, q)
                if r not in found:
                    found.add(r)
                    nxt.append(r)
        frontier = nxt
    L = CongruenceLattice(A, found)
    A._cache["lattice"] = L
    return L


def interval(L: CongruenceLattice, lo: Partition, hi: Partition) -> list[Partition]:
    i, j = L.index(lo), L.index(hi)
    if not L.leq[i, j]:
        raise ValueError(f"{lo} is not below {hi}")
    return [L.elements[k] for k in np.flatnonzero(L.leq[i] & L.leq[:, j])]


def pentagon_witness(L: CongruenceLattice) -> tuple[Partition, ...] | None:
    """Five elements forming N5 (bottom, low, high, side, top), or None."""
    J, M, leq = L.join_table, L.meet_table, L.leq
    m = len(L)
    for b in range(m):
        # a <= c  ==>  a v (b ^ c) == (a v b) ^ c
        lhs = J[np.arange(m)[:, None], M[b][None, :]]
        rhs = M[J[:, b][:, None], np.arange(m)[None, :]]
        bad = np.argwhere(leq & (lhs != rhs))
        if bad.size:
            a, c = (int(v) for v in bad[0])
            low, high = lhs[a, c], rhs[a, c]
            idx = (M[b, c], low, high, b, J[a, b])
            return tuple(L.elements[int(i)] for i in idx)
    return None


def is_modular(L: CongruenceLattice) -> bool:
    return pentagon_witness(L) is None


def density_witness(L: CongruenceLattice, alpha: Partition) -> Partition | None:
    """A nonzero congruence meeting ``alpha`` in zero, or None if ``alpha`` is dense."""
    a = L.index(alpha)
    for i, p in enumerate(L.elements):
        if i != L.bottom and L.meet_table[i, a] == L.bottom:
            return p
    return None


def is_dense(L: CongruenceLattice, alpha: Partition) -> bool:
    return density_witness(L, alpha) is None


def meet_irreducibles(L: CongruenceLattice) -> list[Partition]:
    """Elements other than 1 with exactly one upper cover."""
    counts = L.covers.sum(axis=1)
    return [p for i, p in enumerate(L.elements) if i != L.top and counts[i] == 1]


def fsi_witness(A: FiniteAlgebra) -> tuple[Partition, Partition] | None:
    """Two nonzero congruences with zero meet, or None when 0 is meet irreducible.

    The one-element algebra has 0 = 1, which is not meet irreducible; its
    witness is ``(1, 1)``.
    """
    L = congruence_lattice(A)
    if len(L) == 1:
        return L.one, L.one
    atoms = L.atoms()
    if len(atoms) == 1:
        return None
    return atoms[0], atoms[1]


def is_fsi(A: FiniteAlgebra) -> bool:
    return fsi_witness(A) is None


def is_si(A: FiniteAlgebra) -> bool:
    """A unique atom lies below every nonzero congruence (finite lattice)."""
    L = congruence_lattice(A)
    atoms = L.atoms()
    if len(atoms) != 1:
        return False
    i = L.index(atoms[0])
    return all(L.leq[i, j] for j in range(len(L)) if j != L.bottom)


def restrict(theta: Partition, emb: Homomorphism) -> Partition:
    if theta.size != emb.target.size:
        raise ValueError("partition does not live on the embedding's target")
    return Partition.from_labels(theta.array[emb.array])


def product_congruence(parts: Sequence[Partition]) -> Partition:
    """Coordinatewise relation on the mixed-radix product of the parts' universes."""
    sizes = tuple(p.size for p in parts)
    N = int(np.prod(sizes))
    coords = np.unravel_index(np.arange(N), sizes)
    labels = np.ravel_multi_index(tuple(p.array[c] for p, c in zip(parts, coords)), sizes)
    return Partition.from_labels(labels)


class NotProductCongruence(ValueError):
    def __init__(self, pair, parts):
        super().__init__(f"not a product congruence: {pair} is related coordinatewise only")
        self.pair = pair
        self.parts = parts


def project_congruence(theta: Partition, sizes: Sequence[int], i: int) -> Partition:
    """Equivalence on factor ``i`` generated by coordinate ``i`` of related pairs."""
    coords = np.unravel_index(np.arange(theta.size), tuple(sizes))[i]
    reps = merge_reps(np.arange(sizes[i]), coords, coords[theta.array])
    return Partition._trusted(reps)


def split_product_congruence(theta: Partition, sizes: Sequence[int]) -> tuple[Partition, ...]:
    """Factors ``(theta_1, ..., theta_n)`` with ``theta = prod theta_i``.

    Raises :class:`NotProductCongruence` carrying the least pair of the
    re-multiplied relation that ``theta`` misses.
    """
    sizes = tuple(sizes)
    if int(np.prod(sizes)) != theta.size:
        raise ValueError("sizes do not match the product")
    parts = tuple(project_congruence(theta, sizes, i) for i in range(len(sizes)))
    back = product_congruence(parts)
    if back == theta:
        return parts
    r, t = back.array, theta.array
    for a in range(theta.size):
        for b in range(theta.size):
            if r[a] == r[b] and t[a] != t[b]:
                raise NotProductCongruence((a, b), parts)
    raise AssertionError("unreachable")


def is_product_congruence(theta: Partition, sizes: Sequence[int]) -> bool:
    try:
        split_product_congruence(theta, sizes)
    except NotProductCongruence:
        return False
    return True


@dataclass(frozen=True)
class Relation:
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_symmetric(self) -> bool:
        return bool((self.matrix == self.matrix.T).all())

    @property
    def is_transitive(self) -> bool:
        m = self.matrix.astype(np.int64)
        return bool(((m @ m > 0) <= self.matrix).all())

    def pairs(self) -> list[tuple[int, int]]:
        return [tuple(int(v) for v in p) for p in np.argwhere(self.matrix)]

    def __eq__(self, other):
        return isinstance(other, Relation) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())


def relation_of(p: Partition) -> Relation:
    a = p.array
    return Relation(a[:, None] == a[None, :])


def compose(theta: Partition, phi: Partition) -> Relation:
    """``x (theta o phi) z`` iff ``x theta y phi z`` for some ``y``."""
    if theta.size != phi.size:
        raise ValueError("size mismatch")
    t = relation_of(theta).matrix.astype(np.int64)
    f = relation_of(phi).matrix.astype(np.int64)
    return Relation((t @ f) > 0)


def saturate(S: Iterable[int], theta: Partition) -> frozenset[int]:
    """Union of the ``theta`` classes meeting ``S``."""
    reps = {theta.reps[x] for x in S}
    return frozenset(x for x, r in enumerate(theta.reps) if r in reps)


def kernel(h: Homomorphism) -> Partition:
    return Partition.from_labels(h.array)


def congruence_from_relation(pairs: np.ndarray, n: int) -> Partition | None:
    """The partition whose pair set is exactly the boolean matrix ``pairs``."""
    p = Partition._trusted(merge_reps(np.arange(n), *np.nonzero(pairs)))
    return p if np.array_equal(relation_of(p).matrix, pairs) else None
