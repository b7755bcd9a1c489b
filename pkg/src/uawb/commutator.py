"""The modular commutator, the center, and derived predicates.

``[alpha, beta]`` is read off the pair algebra ``A(alpha) = {(x, y) : x alpha y}``
(a subalgebra of A x A): let Delta be the congruence of A(alpha) generated by
all ``((b, b), (c, c))`` with ``b beta c``.  Then ``x [alpha, beta] y`` iff
``(x, x) Delta (x, y)``.  The orientation was pinned against the group and
distributive-lattice oracles in ``tests/test_commutator.py``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .algebra import FiniteAlgebra, Homomorphism, make_quotient, make_subalgebra
from .config import DEFAULT_LIMITS, Limits
from .congruence import (close_reps, compose, congruence_from_relation, congruence_lattice,
                         join, pentagon_witness, principal_congruence, relation_of, restrict,
                         product_congruence)
from .errors import NotModularError, SizeLimitError, VerificationFailure
from .partition import Partition, merge_reps, meet
from .terms import Term, eval_term_array

_CHUNK_CELLS = 1 << 22


def is_malcev_term(A: FiniteAlgebra, t: Term) -> bool:
    """``t(x, y, y) = x`` and ``t(x, x, y) = y`` throughout A."""
    x = np.arange(A.size)[:, None]
    y = np.arange(A.size)[None, :]
    return bool((eval_term_array(A, t, [x, y, y]) == x).all()
                and (eval_term_array(A, t, [x, x, y]) == y).all())


def require_modular(A: FiniteAlgebra, malcev: Term | None = None,
                    limits: Limits = DEFAULT_LIMITS) -> None:
    """Refuse unless Con(A) is known to be modular.

    A verified Mal'cev term makes congruences permute, hence modular; otherwise
    Con(A) is computed and searched for a pentagon.
    """
    verdict = A._cache.get("modular")
    if verdict is True:
        return
    if verdict is None:
        if malcev is not None and is_malcev_term(A, malcev):
            A._cache["modular"] = True
            return
        if A.size > limits.max_modularity_check:
            raise SizeLimitError(f"modularity check for {A.name}", A.size,
                                 limits.max_modularity_check)
        w = pentagon_witness(congruence_lattice(A))
        verdict = A._cache["modular"] = True if w is None else w
        if verdict is True:
            return
    raise NotModularError(A.name, verdict)


def _pair_algebra_images(A: FiniteAlgebra, X: np.ndarray, Y: np.ndarray, idx: np.ndarray):
    N = X.size
    ops = [op for op in A.operations if op.arity > 0]

    def images(U: np.ndarray) -> Iterator[np.ndarray]:
        xu, yu = X[U][:, None], Y[U][:, None]
        for op in ops:
            k = op.arity
            consts = (np.indices((N,) * (k - 1)).reshape(k - 1, -1) if k > 1
                      else np.zeros((0, 1), dtype=np.int64))
            for p in range(k):
                xs, ys = [], []
                j = 0
                for q in range(k):
                    if q == p:
                        xs.append(xu)
                        ys.append(yu)
                    else:
                        xs.append(X[consts[j]][None, :])
                        ys.append(Y[consts[j]][None, :])
                        j += 1
                out = idx[op.table[tuple(xs)], op.table[tuple(ys)]]
                yield out.reshape(len(U), -1)

    return images


def _delta_commutator(A: FiniteAlgebra, alpha: Partition, beta: Partition,
                      limits: Limits) -> Partition:
    n = A.size
    rel = relation_of(alpha).matrix
    X, Y = np.nonzero(rel)
    N = X.size
    if N > limits.max_pair_algebra:
        raise SizeLimitError(f"pair algebra of {A.name}", N, limits.max_pair_algebra)
    idx = np.full((n, n), -1, dtype=np.int64)
    idx[X, Y] = np.arange(N)
    diag = idx[np.arange(n), np.arange(n)]
    reps = merge_reps(np.arange(N), diag, diag[beta.array])
    reps = close_reps(reps, _pair_algebra_images(A, X, Y, idx), _CHUNK_CELLS)
    related = np.zeros((n, n), dtype=bool)
    related[X, Y] = reps[np.arange(N)] == reps[diag[X]]
    result = congruence_from_relation(related, n)
    if result is None:
        raise VerificationFailure(f"commutator read-off on {A.name} is not an equivalence")
    return result


def commutator(A: FiniteAlgebra, alpha: Partition, beta: Partition, *,
               malcev: Term | None = None, limits: Limits = DEFAULT_LIMITS) -> Partition:
    require_modular(A, malcev, limits)
    if alpha.size != A.size or beta.size != A.size:
        raise ValueError("partition size does not match the algebra")
    zero = Partition.zero(A.size)
    if alpha.is_zero() or beta.is_zero():
        return zero
    table = commutator_table(A)
    return table.get(alpha, beta, limits)


@dataclass
class CommutatorTable:
    """Memo of commutators of one algebra, keyed by the ordered congruence pair."""
    algebra: FiniteAlgebra
    entries: dict = field(default_factory=dict)

    def get(self, alpha: Partition, beta: Partition, limits: Limits = DEFAULT_LIMITS) -> Partition:
        key = (alpha, beta)
        if key not in self.entries:
            value = _delta_commutator(self.algebra, alpha, beta, limits)
            if not value <= meet(alpha, beta):
                raise VerificationFailure(
                    f"[{alpha}, {beta}] = {value} is not below the meet in {self.algebra.name}")
            self.entries[key] = value
        return self.entries[key]


def commutator_table(A: FiniteAlgebra) -> CommutatorTable:
    return A._cache.setdefault("commutators", CommutatorTable(A))


def center(A: FiniteAlgebra, *, malcev: Term | None = None,
           limits: Limits = DEFAULT_LIMITS) -> Partition:
    """Pairs (a, b) whose principal congruence centralizes 1."""
    require_modular(A, malcev, limits)
    if "center" in A._cache:
        return A._cache["center"]
    n = A.size
    one = Partition.one(n)
    rel = np.eye(n, dtype=bool)
    for a in range(n):
        for b in range(a + 1, n):
            if commutator(A, principal_congruence(A, a, b), one, limits=limits).is_zero():
                rel[a, b] = rel[b, a] = True
    zeta = congruence_from_relation(rel, n)
    if zeta is None:
        raise VerificationFailure(f"center of {A.name} is not an equivalence relation")
    A._cache["center"] = zeta
    return zeta


def is_abelian_congruence(A: FiniteAlgebra, theta: Partition, **kw) -> bool:
    return commutator(A, theta, theta, **kw).is_zero()


def is_central_congruence(A: FiniteAlgebra, theta: Partition, **kw) -> bool:
    return commutator(A, theta, Partition.one(A.size), **kw).is_zero()


def is_abelian(A: FiniteAlgebra, **kw) -> bool:
    return is_abelian_congruence(A, Partition.one(A.size), **kw)


def is_centerless(A: FiniteAlgebra, **kw) -> bool:
    return center(A, **kw).is_zero()


def derived_congruence(A: FiniteAlgebra, **kw) -> Partition:
    """``[1, 1]``."""
    one = Partition.one(A.size)
    return commutator(A, one, one, **kw)


@dataclass(frozen=True)
class C1Failure:
    alpha: Partition
    beta: Partition
    left: Partition
    right: Partition

    def __str__(self):
        return (f"alpha={self.alpha}, beta={self.beta}: alpha ^ [beta,beta] = {self.left} "
                f"but [alpha ^ beta, beta] = {self.right}")


def c1_witness(A: FiniteAlgebra, **kw) -> C1Failure | None:
    """First (alpha, beta) with ``alpha ^ [beta, beta] != [alpha ^ beta, beta]``."""
    L = congruence_lattice(A)
    for alpha in L:
        for beta in L:
            left = meet(alpha, commutator(A, beta, beta, **kw))
            right = commutator(A, meet(alpha, beta), beta, **kw)
            if left != right:
                return C1Failure(alpha, beta, left, right)
    return None


def check_c1(A: FiniteAlgebra, **kw) -> bool:
    """Whether the identity holds on this algebra (says nothing about its variety)."""
    return c1_witness(A, **kw) is None


def abelian_permutation_witness(A: FiniteAlgebra, **kw):
    """First (theta, phi) with theta abelian whose compositions differ from the join."""
    L = congruence_lattice(A)
    for theta in L:
        if not is_abelian_congruence(A, theta, **kw):
            continue
        for phi in L:
            j = relation_of(L.join(theta, phi))
            if compose(theta, phi) != j or compose(phi, theta) != j:
                return theta, phi
    return None


def check_abelian_permutes(A: FiniteAlgebra, **kw) -> bool:
    return abelian_permutation_witness(A, **kw) is None


def quotient_partition(phi: Partition, nat: Homomorphism) -> Partition:
    """``phi / pi`` on A/pi, for ``phi`` above the kernel of ``nat``."""
    labels = np.empty(nat.target.size, dtype=np.int64)
    labels[nat.array] = phi.array
    return Partition.from_labels(labels)


@dataclass(frozen=True)
class FactOutcome:
    name: str
    holds: bool
    checked: int
    witness: str | None = None


def check_fact_properties(A: FiniteAlgebra, subalgebra: Homomorphism | None = None,
                          partner: FiniteAlgebra | None = None, *,
                          additivity_limit: int = 12,
                          only: set[str] | None = None, **kw) -> list[FactOutcome]:
    """Exhaustively test the standard commutator facts on ``A``.

    ``subalgebra`` is an embedding B -> A used for the restriction facts;
    ``partner`` is a second algebra B used for the center-of-product fact.
    ``only`` restricts the run to the named facts.
    """
    L = congruence_lattice(A)
    comm = lambda a, b: commutator(A, a, b, **kw)  # noqa: E731
    want = lambda name: only is None or name in only  # noqa: E731
    out = []

    def record(name, checked, witness):
        out.append(FactOutcome(name, witness is None, checked, witness))

    if want("below-meet"):
        w, count = None, 0
        for a in L:
            for b in L:
                count += 1
                if w is None and not comm(a, b) <= meet(a, b):
                    w = f"[{a},{b}]={comm(a, b)} not below {meet(a, b)}"
        record("below-meet", count, w)

    if want("symmetry"):
        w, count = None, 0
        for a in L:
            for b in L:
                count += 1
                if w is None and comm(a, b) != comm(b, a):
                    w = f"[{a},{b}]={comm(a, b)} but [{b},{a}]={comm(b, a)}"
        record("symmetry", count, w)

    w, count = None, 0
    if want("join-additivity") and len(L) <= additivity_limit:
        for a in L:
            for b1 in L:
                for b2 in L:
                    count += 1
                    lhs = comm(a, L.join(b1, b2))
                    rhs = L.join(comm(a, b1), comm(a, b2))
                    if w is None and lhs != rhs:
                        w = f"alpha={a}, beta1={b1}, beta2={b2}: {lhs} != {rhs}"
    if want("join-additivity"):
        record("join-additivity", count, w)

    if want("quotient"):
        w, count = None, 0
        for pi in L:
            Q, nat = make_quotient(A, pi)
            for a in L.above(pi):
                for b in L.above(pi):
                    count += 1
                    lhs = commutator(Q, quotient_partition(a, nat), quotient_partition(b, nat), **kw)
                    rhs = quotient_partition(L.join(comm(a, b), pi), nat)
                    if w is None and lhs != rhs:
                        w = f"pi={pi}, phi={a}, psi={b}: {lhs} != {rhs}"
        record("quotient", count, w)

    if subalgebra is not None:
        B = subalgebra.source
        if want("restriction"):
            w, count = None, 0
            for a in L:
                for b in L:
                    count += 1
                    lhs = commutator(B, restrict(a, subalgebra), restrict(b, subalgebra), **kw)
                    rhs = restrict(comm(a, b), subalgebra)
                    if w is None and not lhs <= rhs:
                        w = f"phi={a}, psi={b}: {lhs} not below {rhs}"
            record("restriction", count, w)
        if want("center-restriction"):
            zr, zb = restrict(center(A, **kw), subalgebra), center(B, **kw)
            record("center-restriction", 1, None if zr <= zb else f"{zr} not below {zb}")

    if partner is not None and want("center-of-product"):
        from .algebra import make_product
        P, _ = make_product([A, partner])
        lhs, rhs = center(P, **kw), product_congruence([center(A, **kw), center(partner, **kw)])
        record("center-of-product", 1, None if lhs == rhs else f"{lhs} != {rhs}")

    if want("abelian-permutes"):
        perm = abelian_permutation_witness(A, **kw)
        record("abelian-permutes", len(L) ** 2,
               None if perm is None else f"theta={perm[0]}, phi={perm[1]}")
    return out
