"""Brute-force reference computations, independent of the main algorithms."""
from __future__ import annotations

import itertools

import numpy as np

from .algebra import FiniteAlgebra
from .congruence import is_congruence
from .partition import Partition, all_partitions


def brute_force_congruences(A: FiniteAlgebra) -> list[Partition]:
    """All partitions of the universe that are compatible, in canonical order."""
    return sorted((p for p in all_partitions(A.size) if is_congruence(A, p)),
                  key=lambda p: p.reps)


def brute_force_principal(A: FiniteAlgebra, a: int, b: int) -> Partition:
    """Least compatible partition relating ``a`` and ``b``."""
    found = [p for p in brute_force_congruences(A) if p.relates(a, b)]
    return min(found, key=lambda p: sum(1 for x in range(A.size) for y in range(A.size)
                                        if p.relates(x, y)))


class GroupTable:
    """A group read off the ``mul`` table of a group-signature algebra."""

    def __init__(self, A: FiniteAlgebra):
        self.n = A.size
        self.mul = np.asarray(A.operation("mul").table)
        ident = [e for e in range(self.n)
                 if all(self.mul[e, g] == g and self.mul[g, e] == g for g in range(self.n))]
        if len(ident) != 1:
            raise ValueError(f"{A.name} has no identity for mul")
        self.e = ident[0]
        self.inv = [next(h for h in range(self.n) if self.mul[g, h] == self.e) for g in range(self.n)]

    def is_subgroup(self, S: frozenset[int]) -> bool:
        return self.e in S and all(self.mul[a, b] in S for a in S for b in S)

    def is_normal(self, S: frozenset[int]) -> bool:
        return all(self.mul[self.mul[g, s], self.inv[g]] in S for g in range(self.n) for s in S)

    def normal_subgroups(self) -> list[frozenset[int]]:
        out = []
        for mask in range(1, 1 << self.n):
            S = frozenset(i for i in range(self.n) if mask >> i & 1)
            if self.is_subgroup(S) and self.is_normal(S):
                out.append(S)
        return out

    def generated(self, gens) -> frozenset[int]:
        S = {self.e} | set(gens)
        while True:
            new = {int(self.mul[a, b]) for a in S for b in S} | S
            if new == S:
                return frozenset(S)
            S = new

    def commutator(self, M, N) -> frozenset[int]:
        m = self.mul
        return self.generated(int(m[m[m[a, b], self.inv[a]], self.inv[b]]) for a in M for b in N)

    def center(self) -> frozenset[int]:
        return frozenset(z for z in range(self.n)
                         if all(self.mul[z, g] == self.mul[g, z] for g in range(self.n)))

    def congruence_of(self, N) -> Partition:
        """``x ~ y`` iff ``x y^-1`` lies in ``N``."""
        labels = [min(int(self.mul[n, x]) for n in N) for x in range(self.n)]
        return Partition.from_labels(labels)

    def subgroup_of(self, theta: Partition) -> frozenset[int]:
        return frozenset(theta.block_of(self.e))


def group_commutator_oracle(A: FiniteAlgebra, alpha: Partition, beta: Partition) -> Partition:
    G = GroupTable(A)
    return G.congruence_of(G.commutator(G.subgroup_of(alpha), G.subgroup_of(beta)))


def group_center_oracle(A: FiniteAlgebra) -> Partition:
    G = GroupTable(A)
    return G.congruence_of(G.center())


def distributive_commutator_oracle(alpha: Partition, beta: Partition) -> Partition:
    return alpha & beta


def center_by_lattice_scan(A: FiniteAlgebra, **kw) -> Partition:
    """Largest congruence centralizing 1, found by scanning Con(A)."""
    from .commutator import is_central_congruence
    from .congruence import congruence_lattice

    L = congruence_lattice(A)
    central = [t for t in L if is_central_congruence(A, t, **kw)]
    best = [t for t in central if all(s <= t for s in central)]
    if len(best) != 1:
        raise AssertionError("central congruences have no largest element")
    return best[0]


def brute_force_pentagon(elements: list[Partition], join) -> tuple | None:
    """Five lattice elements forming N5, by trying every triple ``a < c``, ``b``."""
    for a, b, c in itertools.permutations(elements, 3):
        if a < c and not (a <= b or b <= a or c <= b or b <= c):
            if join(a, b) == join(c, b) and (a & b) == (c & b):
                return a, b, c
    return None
