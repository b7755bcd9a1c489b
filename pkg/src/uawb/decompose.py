"""Subdirect representations, essential extensions and decomposition procedures."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import (FiniteAlgebra, Homomorphism, find_isomorphism, is_homomorphism,
                      make_product, make_quotient)
from .commutator import (c1_witness, center, commutator, derived_congruence, is_abelian,
                         is_centerless, require_modular)
from .config import DEFAULT_LIMITS, Limits
from .congruence import (CongruenceLattice, compose, congruence_lattice, density_witness,
                         is_si, meet_irreducibles, principal_congruences, product_congruence,
                         restrict, saturate, fsi_witness)
from .errors import PreconditionError, SizeLimitError, VerificationFailure
from .partition import Partition, canonical_reps
from .terms import Term


def pullback(phi_bar: Partition, nat: Homomorphism) -> Partition:
    """The congruence of the source corresponding to ``phi_bar`` on the target."""
    return Partition.from_labels(phi_bar.array[nat.array])


def push(phi: Partition, nat: Homomorphism) -> Partition:
    """``phi / ker nat`` on the quotient, for ``phi`` above the kernel."""
    labels = np.empty(nat.target.size, dtype=np.int64)
    labels[nat.array] = phi.array
    return Partition.from_labels(labels)


def meet_of(parts: Sequence[Partition], n: int) -> Partition:
    """Meet of equivalence relations; the empty meet is 1."""
    if not parts:
        return Partition.one(n)
    keys = np.stack([p.array for p in parts], axis=1)
    _, labels = np.unique(keys, axis=0, return_inverse=True)
    return Partition._trusted(canonical_reps(labels.reshape(-1)))


# -- essential embeddings -----------------------------------------------------

def essential_witness(emb: Homomorphism, lattice: CongruenceLattice | None = None, *,
                      limits: Limits = DEFAULT_LIMITS) -> Partition | None:
    """A nonzero congruence of the target restricting to 0 on the source, or None.

    Without a lattice only principal congruences are scanned: any offending
    congruence contains an offending principal one.
    """
    B = emb.target
    if not emb.is_injective():
        raise PreconditionError("not an embedding: map is not injective")
    if lattice is not None:
        for theta in lattice:
            if not theta.is_zero() and restrict(theta, emb).is_zero():
                return theta
        return None
    if B.size > limits.max_size:
        raise SizeLimitError(f"congruences of {B.name}", B.size, limits.max_size)
    inside = np.zeros(B.size, dtype=bool)
    inside[emb.array] = True
    for (a, b), theta in principal_congruences(B).items():
        if inside[a] and inside[b]:
            continue
        if restrict(theta, emb).is_zero():
            return theta
    return None


def is_essential(emb: Homomorphism, lattice: CongruenceLattice | None = None, **kw) -> bool:
    return essential_witness(emb, lattice, **kw) is None


# -- subdirect representations ------------------------------------------------

@dataclass(eq=False)
class SubdirectRepresentation:
    algebra: FiniteAlgebra
    kernels: tuple[Partition, ...]
    factors: tuple[FiniteAlgebra, ...]
    naturals: tuple[Homomorphism, ...]
    product: FiniteAlgebra
    embedding: Homomorphism

    @classmethod
    def from_kernels(cls, A: FiniteAlgebra, kernels: Sequence[Partition]) -> "SubdirectRepresentation":
        kernels = tuple(kernels)
        if not kernels:
            raise PreconditionError("need at least one kernel")
        if not meet_of(kernels, A.size).is_zero():
            raise PreconditionError("kernels do not meet to 0")
        quotients = [make_quotient(A, eta, name=f"{A.name}/{i + 1}") for i, eta in enumerate(kernels)]
        factors = tuple(q for q, _ in quotients)
        naturals = tuple(nat for _, nat in quotients)
        P, _ = make_product(factors)
        sizes = tuple(F.size for F in factors)
        codes = np.ravel_multi_index(tuple(nat.array for nat in naturals), sizes)
        emb = Homomorphism(A, P, tuple(codes.tolist()))
        if not emb.is_injective() or not is_homomorphism(emb):
            raise VerificationFailure("induced map into the product is not an embedding")
        return cls(A, kernels, factors, naturals, P, emb)

    @property
    def n(self) -> int:
        return len(self.kernels)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(F.size for F in self.factors)

    def others(self, i: int) -> Partition:
        return meet_of([k for j, k in enumerate(self.kernels) if j != i], self.algebra.size)

    @property
    def alphas(self) -> tuple[Partition, ...]:
        L = congruence_lattice(self.algebra)
        return tuple(L.join(eta, self.others(i)) for i, eta in enumerate(self.kernels))

    @property
    def alpha_bars(self) -> tuple[Partition, ...]:
        return tuple(push(a, nat) for a, nat in zip(self.alphas, self.naturals))

    def is_surjective(self) -> bool:
        return self.embedding.is_surjective()


def product_essential_witness(rep: SubdirectRepresentation) -> tuple[Partition, ...] | None:
    """A tuple of factor congruences, not all 0, whose product restricts to 0.

    Restriction is monotone, so it suffices to try tuples with one nonzero
    entry; the first such tuple in index and lattice order is returned.
    """
    for i, (F, nat) in enumerate(zip(rep.factors, rep.naturals)):
        rest = rep.others(i)
        for phi in congruence_lattice(F):
            if phi.is_zero():
                continue
            if meet_of([pullback(phi, nat), rest], rep.algebra.size).is_zero():
                return tuple(phi if j == i else Partition.zero(G.size)
                             for j, G in enumerate(rep.factors))
    return None


def product_essential_witness_exhaustive(rep: SubdirectRepresentation) -> tuple[Partition, ...] | None:
    """Same question by enumerating every tuple and restricting the product congruence."""
    lattices = [congruence_lattice(F) for F in rep.factors]
    for parts in itertools.product(*[L.elements for L in lattices]):
        if all(p.is_zero() for p in parts):
            continue
        if restrict(product_congruence(parts), rep.embedding).is_zero():
            return tuple(parts)
    return None


def is_product_essential(rep: SubdirectRepresentation) -> bool:
    return product_essential_witness(rep) is None


def meet_maximality_witness(A: FiniteAlgebra, etas: Sequence[Partition]
                            ) -> tuple[Partition, ...] | None:
    """A tuple ``phi_i >= eta_i`` with zero meet and some ``phi_i != eta_i``.

    Exhaustive over the product of the upper sets; None when the system is
    meet-maximal.
    """
    L = congruence_lattice(A)
    for phis in itertools.product(*[L.above(e) for e in etas]):
        if phis != tuple(etas) and meet_of(phis, A.size).is_zero():
            return tuple(phis)
    return None


@dataclass
class Maximization:
    etas: tuple[Partition, ...]
    phis: tuple[Partition, ...]
    # (index, from, to) for every cover step taken
    chain: list[tuple[int, Partition, Partition]] = field(default_factory=list)


def maximize_meet_system(A: FiniteAlgebra, etas: Sequence[Partition]) -> Maximization:
    """Raise each congruence in turn as far as the running meet stays 0.

    Steps go through upper covers, always taking the first admissible cover
    in lattice order.
    """
    etas = tuple(etas)
    n = A.size
    if not meet_of(etas, n).is_zero():
        raise PreconditionError("the congruences do not meet to 0")
    L = congruence_lattice(A)
    phis = list(etas)
    out = Maximization(etas, etas)
    for i in range(len(phis)):
        rest = meet_of(phis[:i] + phis[i + 1:], n)
        moved = True
        while moved:
            moved = False
            for c in L.upper_covers(phis[i]):
                if L.meet(c, rest).is_zero():
                    out.chain.append((i, phis[i], c))
                    phis[i] = c
                    moved = True
                    break
    out.phis = tuple(phis)
    w = meet_maximality_witness(A, out.phis)
    if w is not None:
        raise VerificationFailure(f"maximized system is not meet-maximal: {w}")
    return out


# -- the proof pipeline for product-essential representations -----------------

@dataclass(frozen=True)
class SubCheck:
    name: str
    holds: bool
    checked: int
    witness: str | None = None
    skipped: str | None = None


def lemma_37_witness(rep: SubdirectRepresentation, betas: Sequence[Partition], *,
                     malcev: Term | None = None, limits: Limits = DEFAULT_LIMITS):
    """First ``(k, pair)`` where the two compositions differ, or None.

    ``k`` is 1-based.  Raises PreconditionError naming the broken hypothesis.
    """
    A = rep.algebra
    alphas = rep.alphas
    if len(betas) != rep.n:
        raise PreconditionError("one beta per kernel is needed")
    for i, (eta, beta, alpha) in enumerate(zip(rep.kernels, betas, alphas)):
        if not (eta <= beta <= alpha):
            raise PreconditionError(f"beta_{i + 1} is not between eta_{i + 1} and alpha_{i + 1}")
        F, nat = rep.factors[i], rep.naturals[i]
        bb = push(beta, nat)
        if not commutator(F, bb, Partition.one(F.size), malcev=malcev, limits=limits).is_zero():
            raise PreconditionError(f"beta_{i + 1}/eta_{i + 1} is not central")
    for k in range(1, rep.n):
        lhs = compose(meet_of(betas[:k], A.size), betas[k])
        rhs = compose(meet_of(rep.kernels[:k], A.size), rep.kernels[k])
        if lhs != rhs:
            x, y = (int(v) for v in np.argwhere(lhs.matrix != rhs.matrix)[0])
            return k, (x, y)
    return None


def verify_lemma_37(rep: SubdirectRepresentation, betas: Sequence[Partition], **kw) -> bool:
    return lemma_37_witness(rep, betas, **kw) is None


def admissible_betas(rep: SubdirectRepresentation, *, malcev: Term | None = None,
                     limits: Limits = DEFAULT_LIMITS) -> list[tuple[Partition, ...]]:
    """Every tuple with ``eta_i <= beta_i <= alpha_i`` and ``beta_i/eta_i`` central."""
    L = congruence_lattice(rep.algebra)
    options = []
    for eta, alpha, F, nat in zip(rep.kernels, rep.alphas, rep.factors, rep.naturals):
        one = Partition.one(F.size)
        options.append([b for b in L.above(eta) if b <= alpha and
                        commutator(F, push(b, nat), one, malcev=malcev, limits=limits).is_zero()])
    return list(itertools.product(*options))


def verify_theorem_33(rep: SubdirectRepresentation, *, malcev: Term | None = None,
                      limits: Limits = DEFAULT_LIMITS) -> list[SubCheck]:
    """Replay every step of the argument that product-essential implies essential."""
    w = product_essential_witness(rep)
    if w is not None:
        raise PreconditionError(f"representation is not product-essential: {tuple(map(str, w))}")
    P = rep.product
    if P.size > limits.max_size:
        raise SizeLimitError(f"congruences of {P.name}", P.size, limits.max_size)
    require_modular(P, malcev, limits)
    Lp = congruence_lattice(P)
    one = Partition.one(P.size)
    emb = rep.embedding
    image = frozenset(emb.map)
    out: list[SubCheck] = []

    zero_restrict = [t for t in Lp if restrict(t, emb).is_zero()]
    bad = None
    for t in zero_restrict:
        if not commutator(P, t, one, malcev=malcev, limits=limits).is_zero():
            bad = bad or str(t)
    out.append(SubCheck("prop35", bad is None, len(zero_restrict), bad))

    abars = rep.alpha_bars
    alpha_prod = product_congruence(abars)
    dw = density_witness(Lp, alpha_prod)
    out.append(SubCheck("lemma36", dw is None, len(Lp), None if dw is None else str(dw)))

    zetas = [center(F, malcev=malcev, limits=limits) for F in rep.factors]
    beta_bars = [a & z for a, z in zip(abars, zetas)]
    betas = tuple(rep.alphas[i] & pullback(z, rep.naturals[i]) for i, z in enumerate(zetas))
    lw = lemma_37_witness(rep, betas, malcev=malcev, limits=limits)
    out.append(SubCheck("lemma37", lw is None, max(rep.n - 1, 0), None if lw is None else str(lw)))

    beta_prod = product_congruence(beta_bars)
    below = [t for t in Lp if t <= beta_prod]
    bad = next((str(t) for t in below if saturate(image, t) != image), None)
    out.append(SubCheck("lemma38", bad is None, len(below), bad))

    bad, count = None, 0
    for t in Lp:
        if restrict(t, emb).is_zero() and saturate(image, t) == image and \
                commutator(P, t, one, malcev=malcev, limits=limits).is_zero():
            count += 1
            if not t.is_zero():
                bad = bad or str(t)
    out.append(SubCheck("prop34", bad is None, count, bad))

    ew = essential_witness(emb, Lp)
    out.append(SubCheck("thm33", ew is None, len(Lp), None if ew is None else str(ew)))
    return out


# -- decomposition procedures -------------------------------------------------

@dataclass
class DecompositionReport:
    algebra: FiniteAlgebra
    outcome: str  # product | proper-extension | c1-failure | vacuous
    kernels: tuple[Partition, ...] = ()
    factors: tuple[FiniteAlgebra, ...] = ()
    embedding: Homomorphism | None = None
    chain: list = field(default_factory=list)
    essential: bool | None = None
    factor_si: tuple[bool, ...] = ()
    theta: Partition | None = None
    psi: Partition | None = None
    zeta: Partition | None = None
    derived: Partition | None = None
    centerless: bool | None = None
    abelian: bool | None = None
    c1_holds: bool | None = None
    c1_witness: str | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        def s(p):
            return None if p is None else str(p)

        return {
            "algebra": self.algebra.name,
            "outcome": self.outcome,
            "kernels": [str(k) for k in self.kernels],
            "factor_sizes": [F.size for F in self.factors],
            "surjective": None if self.embedding is None else self.embedding.is_surjective(),
            "essential": self.essential,
            "factor_si": list(self.factor_si),
            "chain": [[i, str(a), str(b)] for i, a, b in self.chain],
            "theta": s(self.theta), "psi": s(self.psi), "zeta": s(self.zeta),
            "derived": s(self.derived), "centerless": self.centerless, "abelian": self.abelian,
            "c1_holds": self.c1_holds, "c1_witness": self.c1_witness,
            "notes": list(self.notes),
        }


def longest_irredundant_meet(L: CongruenceLattice) -> tuple[Partition, ...]:
    """Longest irredundant representation of 0 as a meet of meet-irreducibles.

    Depth-first over meet-irreducibles in lattice order; each step must lower
    the running meet, so the depth never exceeds the height of L.
    """
    n = L.algebra.size
    mi = meet_irreducibles(L)
    height = L.height()
    best: list[tuple[Partition, ...]] = [()]

    def irredundant(rep):
        return all(not meet_of(rep[:i] + rep[i + 1:], n).is_zero() for i in range(len(rep)))

    def search(start, current, running):
        if len(best[0]) == height:
            return
        if running.is_zero():
            if len(current) > len(best[0]) and irredundant(current):
                best[0] = tuple(current)
            return
        if len(current) >= height:
            return
        for j in range(start, len(mi)):
            m = L.meet(running, mi[j])
            if m != running:
                search(j + 1, current + [mi[j]], m)

    search(0, [], L.one)
    return best[0]


def decompose_absolute_retract(A: FiniteAlgebra, *, malcev: Term | None = None,
                               limits: Limits = DEFAULT_LIMITS) -> DecompositionReport:
    """Subdirect decomposition through a longest irredundant meet, made product-essential.

    Either the embedding is onto (a product of subdirectly irreducibles) or it
    is a proper essential extension, showing A is not an absolute retract.
    """
    if A.size > limits.max_size:
        raise SizeLimitError(f"congruences of {A.name}", A.size, limits.max_size)
    require_modular(A, malcev, limits)
    L = congruence_lattice(A)
    if A.size == 1:
        return DecompositionReport(A, "product", notes=["trivial algebra: the empty product"])
    etas = longest_irredundant_meet(L)
    mx = maximize_meet_system(A, etas)
    rep = SubdirectRepresentation.from_kernels(A, mx.phis)
    pw = product_essential_witness(rep)
    if pw is not None:
        raise VerificationFailure(f"maximized representation is not product-essential: {pw}")
    ew = essential_witness(rep.embedding, limits=limits)
    if ew is not None:
        raise VerificationFailure(f"product-essential representation is not essential: {ew}")
    report = DecompositionReport(A, "", mx.phis, rep.factors, rep.embedding, mx.chain, True)
    if rep.is_surjective():
        report.outcome = "product"
        report.factor_si = tuple(is_si(F) for F in rep.factors)
        if not all(report.factor_si):
            raise VerificationFailure("a factor of the decomposition is not subdirectly irreducible")
    else:
        report.outcome = "proper-extension"
        report.notes.append(f"{A.name} embeds essentially and properly in the product, "
                            f"so it is not an absolute retract")
    return report


def split_center_abelian(A: FiniteAlgebra, *, malcev: Term | None = None,
                         limits: Limits = DEFAULT_LIMITS) -> DecompositionReport:
    """Split A along a maximal pair ``theta >= zeta``, ``psi >= [1,1]`` with zero meet."""
    if A.size > limits.max_size:
        raise SizeLimitError(f"congruences of {A.name}", A.size, limits.max_size)
    require_modular(A, malcev, limits)
    zeta = center(A, malcev=malcev, limits=limits)
    derived = derived_congruence(A, malcev=malcev, limits=limits)
    cw = c1_witness(A, malcev=malcev, limits=limits)
    report = DecompositionReport(A, "", zeta=zeta, derived=derived, c1_holds=cw is None,
                                 c1_witness=None if cw is None else str(cw))
    common = zeta & derived
    if not common.is_zero():
        report.outcome = "c1-failure"
        report.notes.append(f"zeta ^ [1,1] = {common} is not 0, so (C1) fails on this algebra")
        return report
    mx = maximize_meet_system(A, (zeta, derived))
    theta, psi = mx.phis
    rep = SubdirectRepresentation.from_kernels(A, mx.phis)
    if product_essential_witness(rep) is not None:
        raise VerificationFailure("maximized pair is not product-essential")
    ew = essential_witness(rep.embedding, limits=limits)
    if ew is not None:
        raise VerificationFailure(f"product-essential pair is not essential: {ew}")
    report.kernels, report.factors, report.embedding = mx.phis, rep.factors, rep.embedding
    report.chain, report.theta, report.psi, report.essential = mx.chain, theta, psi, True
    report.centerless = is_centerless(rep.factors[0], malcev=malcev, limits=limits)
    report.abelian = is_abelian(rep.factors[1], malcev=malcev, limits=limits)
    if rep.is_surjective():
        report.outcome = "product"
        if theta != zeta:
            raise VerificationFailure(f"theta = {theta} differs from the center {zeta}")
        if not report.centerless:
            raise VerificationFailure("A/theta is not centerless")
        if not report.abelian:
            raise VerificationFailure("A/psi is not abelian")
    else:
        report.outcome = "proper-extension"
        report.notes.append(f"{A.name} embeds essentially and properly in A/theta x A/psi")
    return report


# -- direct decompositions ----------------------------------------------------

def factor_pairs(A: FiniteAlgebra) -> list[tuple[Partition, Partition]]:
    """Ordered pairs of nontrivial complementary permuting congruences."""
    L = congruence_lattice(A)
    out = []
    for t in L:
        if t.is_zero() or t.is_one():
            continue
        for p in L:
            if p.is_zero() or p.is_one() or not (t & p).is_zero():
                continue
            if compose(t, p).matrix.all():
                out.append((t, p))
    return out


def is_directly_indecomposable(A: FiniteAlgebra) -> bool:
    return A.size > 1 and not factor_pairs(A)


def direct_factorizations(A: FiniteAlgebra) -> list[tuple[Partition, ...]]:
    """Every factorization into directly indecomposable factors, as kernel tuples.

    The trivial algebra is the empty product.  Results are sorted so the
    output is deterministic.
    """
    if A.size > DEFAULT_LIMITS.max_size:
        raise SizeLimitError(f"congruences of {A.name}", A.size, DEFAULT_LIMITS.max_size)
    if A.size == 1:
        return [()]
    pairs = factor_pairs(A)
    if not pairs:
        return [(Partition.zero(A.size),)]
    found: set[frozenset] = set()
    for t, p in pairs:
        Q, _ = make_quotient(A, t)
        if factor_pairs(Q):
            continue
        R, nat = make_quotient(A, p)
        for fs in direct_factorizations(R):
            found.add(frozenset({t} | {pullback(k, nat) for k in fs}))
    return sorted((tuple(sorted(f, key=lambda q: q.reps)) for f in found),
                  key=lambda ks: [k.reps for k in ks])


@dataclass
class FactorizationReport:
    algebra: FiniteAlgebra
    factorizations: list[tuple[Partition, ...]]
    # isomorphism-class labels of the factors of each factorization, sorted
    multisets: list[tuple[int, ...]]
    class_sizes: list[int]
    unique: bool


def enumerate_direct_decompositions(A: FiniteAlgebra) -> FactorizationReport:
    reps: list[FiniteAlgebra] = []

    def klass(F: FiniteAlgebra) -> int:
        for i, R in enumerate(reps):
            if R.size == F.size and find_isomorphism(R, F) is not None:
                return i
        reps.append(F)
        return len(reps) - 1

    facts = direct_factorizations(A)
    multisets = []
    for ks in facts:
        factors = [make_quotient(A, k)[0] for k in ks]
        if ks:
            rep = SubdirectRepresentation.from_kernels(A, ks)
            if not rep.is_surjective():
                raise VerificationFailure(f"factorization {ks} is not a direct decomposition")
        multisets.append(tuple(sorted(klass(F) for F in factors)))
    unique = len(set(multisets)) <= 1
    return FactorizationReport(A, facts, multisets, [R.size for R in reps], unique)


def check_unique_factorization(A: FiniteAlgebra) -> bool:
    return enumerate_direct_decompositions(A).unique


def verify_theorem_41(A: FiniteAlgebra, *, limits: Limits = DEFAULT_LIMITS) -> DecompositionReport:
    """For a non-FSI algebra, a maximized pair with zero meet gives an essential embedding."""
    w = fsi_witness(A)
    if w is None:
        return DecompositionReport(A, "vacuous", notes=[f"{A.name} is finitely subdirectly irreducible"])
    mx = maximize_meet_system(A, w)
    rep = SubdirectRepresentation.from_kernels(A, mx.phis)
    if product_essential_witness(rep) is not None:
        raise VerificationFailure("maximized pair is not product-essential")
    ew = essential_witness(rep.embedding, limits=limits)
    if ew is not None:
        raise VerificationFailure(f"product-essential pair is not essential: {ew}")
    outcome = "product" if rep.is_surjective() else "proper-extension"
    return DecompositionReport(A, outcome, mx.phis, rep.factors, rep.embedding, mx.chain, True)

