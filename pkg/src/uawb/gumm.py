"""Difference terms and the constructions built from them.

A difference term ``d`` satisfies ``d(x, y, y) = x`` everywhere and
``d(x, x, y) = y`` on every abelian congruence.  Besides validating such a
term, this module checks the term-condition characterization of
``[phi, psi] = 0``, extends central congruences from a subalgebra, and
builds the cube extension ``B/theta -> A^3/Theta``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .algebra import (FiniteAlgebra, Homomorphism, is_homomorphism, make_product,
                      make_quotient, make_subalgebra, subalgebra_generated)
from .commutator import center, is_abelian_congruence, is_malcev_term, require_modular, commutator
from .config import DEFAULT_LIMITS, Limits
from .congruence import (congruence_from_relation, congruence_lattice, congruence_witness,
                         density_witness, kernel, product_congruence, relation_of, restrict)
from .errors import PreconditionError, SizeLimitError, VerificationFailure
from .partition import Partition
from .terms import Term, TermError, check_term, eval_term_array, num_vars

# cells evaluated per vectorised batch in the term-condition checks
_BATCH = 1 << 21


@dataclass(frozen=True)
class DifferenceTerm:
    term: Term
    validated_on: tuple[str, ...] = ()

    def validated(self, A: FiniteAlgebra, limits: Limits = DEFAULT_LIMITS) -> "DifferenceTerm":
        w = difference_term_witness(A, self.term, limits=limits)
        if w is not None:
            raise PreconditionError(f"{self.term} is not a difference term on {A.name}: {w}")
        if A.name in self.validated_on:
            return self
        return replace(self, validated_on=self.validated_on + (A.name,))


@dataclass(frozen=True)
class DifferenceTermFailure:
    clause: str  # "d(x,y,y)=x" or "d(x,x,y)=y"
    x: int
    y: int
    value: int
    theta: Partition | None = None

    def __str__(self):
        if self.theta is None:
            return f"d({self.x},{self.y},{self.y}) = {self.value} != {self.x}"
        return (f"d({self.x},{self.x},{self.y}) = {self.value} != {self.y} "
                f"with ({self.x},{self.y}) in abelian {self.theta}")


def _check_ternary(A: FiniteAlgebra, d: Term) -> None:
    check_term(A, d)
    if num_vars(d) > 3:
        raise TermError(f"{d} uses more than three variables")


def _d(A: FiniteAlgebra, d: Term) -> Callable:
    return lambda x, y, z: eval_term_array(A, d, [x, y, z])


def difference_term_witness(A: FiniteAlgebra, d: Term, *,
                            limits: Limits = DEFAULT_LIMITS) -> DifferenceTermFailure | None:
    """First violation of the difference-term laws on ``A``.

    The second law is tested on each abelian congruence in lattice order; a
    Mal'cev term passes it outright.
    """
    _check_ternary(A, d)
    dd = _d(A, d)
    x = np.arange(A.size)[:, None]
    y = np.arange(A.size)[None, :]
    v = np.broadcast_to(dd(x, y, y), (A.size, A.size))
    bad = np.argwhere(v != x)
    if bad.size:
        a, b = (int(t) for t in bad[0])
        return DifferenceTermFailure("d(x,y,y)=x", a, b, int(v[a, b]))
    if is_malcev_term(A, d):
        return None
    require_modular(A, None, limits)
    w = np.broadcast_to(dd(x, x, y), (A.size, A.size))
    for theta in congruence_lattice(A):
        if theta.is_zero() or not is_abelian_congruence(A, theta, limits=limits):
            continue
        bad = np.argwhere(relation_of(theta).matrix & (w != y))
        if bad.size:
            a, b = (int(t) for t in bad[0])
            return DifferenceTermFailure("d(x,x,y)=y", a, b, int(w[a, b]), theta)
    return None


def validate_difference_term(A: FiniteAlgebra, d: Term, **kw) -> bool:
    return difference_term_witness(A, d, **kw) is None


# -- term condition -----------------------------------------------------------

@dataclass(frozen=True)
class GummViolation:
    condition: str  # "i" or "ii"
    operation: str | None
    chains: tuple[tuple[int, int, int], ...]
    lhs: int
    rhs: int

    def __str__(self):
        if self.condition == "i":
            (x, y, z), = self.chains
            return f"d({y},{y},{z}) = {self.lhs} != {z}"
        return (f"{self.operation} does not commute with d on chains {list(self.chains)}: "
                f"{self.lhs} != {self.rhs}")


def chains(phi: Partition, psi: Partition) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All ``(x, y, z)`` with ``x phi y psi z``, lexicographically."""
    P = relation_of(phi).matrix
    Q = relation_of(psi).matrix
    X, Y, Z = np.nonzero(P[:, :, None] & Q[None, :, :])
    return X, Y, Z


def _commutation_failure(fn: Callable, k: int, X, Y, Z, D, dd) -> tuple | None:
    C = X.size
    if k == 0:
        c = fn([])
        return ((), int(c), int(dd(c, c, c))) if dd(c, c, c) != c else None
    rest = C ** (k - 1)
    step = max(1, _BATCH // max(rest, 1))
    tail = [np.arange(C).reshape((1,) + (1,) * j + (C,) + (1,) * (k - 2 - j)) for j in range(k - 1)]
    for start in range(0, C, step):
        head = np.arange(start, min(C, start + step)).reshape((-1,) + (1,) * (k - 1))
        idx = [head] + tail
        lhs = fn([D[i] for i in idx])
        rhs = dd(fn([X[i] for i in idx]), fn([Y[i] for i in idx]), fn([Z[i] for i in idx]))
        lhs, rhs = np.broadcast_arrays(lhs, rhs)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            cell = tuple(int(v) for v in bad[0])
            picks = (start + cell[0],) + cell[1:]
            return picks, int(lhs[cell]), int(rhs[cell])
    return None


def gumm_condition_witness(A: FiniteAlgebra, d: Term, phi: Partition, psi: Partition, *,
                           include_d: bool = True) -> GummViolation | None:
    """Test both term conditions over every chain ``x phi y psi z``.

    Condition (ii) is checked for the basic operations, and for ``d`` itself
    when ``include_d`` is set.
    """
    _check_ternary(A, d)
    if not psi <= phi:
        raise PreconditionError(f"need phi >= psi, got phi={phi}, psi={psi}")
    dd = _d(A, d)
    y = np.arange(A.size)[:, None]
    z = np.arange(A.size)[None, :]
    v = np.broadcast_to(dd(y, y, z), (A.size, A.size))
    bad = np.argwhere(relation_of(psi).matrix & (v != z))
    if bad.size:
        b, c = (int(t) for t in bad[0])
        return GummViolation("i", None, ((b, b, c),), int(v[b, c]), c)
    X, Y, Z = chains(phi, psi)
    D = np.broadcast_to(dd(X, Y, Z), X.shape)
    ops: list[tuple[str, int, Callable]] = [
        (op.name, op.arity, (lambda args, t=op.table: t[tuple(args)] if args else t[()]))
        for op in sorted(A.operations, key=lambda o: o.arity)]
    if include_d:
        ops.append(("d", 3, lambda args: dd(*args)))
    triples = list(zip(X.tolist(), Y.tolist(), Z.tolist()))
    for name, k, fn in ops:
        hit = _commutation_failure(fn, k, X, Y, Z, D, dd)
        if hit is not None:
            picks, lhs, rhs = hit
            return GummViolation("ii", name, tuple(triples[i] for i in picks), lhs, rhs)
    return None


def check_gumm_characterization(A: FiniteAlgebra, d: Term, phi: Partition, psi: Partition,
                                **kw) -> bool:
    return gumm_condition_witness(A, d, phi, psi, **kw) is None


def corollary_24_witness(A: FiniteAlgebra, d: Term, *,
                         limits: Limits = DEFAULT_LIMITS) -> tuple[int, int, int] | None:
    """First ``(a, x, y)`` with ``x zeta y`` and ``d(x, a, d(a, x, y)) != y``."""
    _check_ternary(A, d)
    zeta = center(A, malcev=d, limits=limits)
    dd = _d(A, d)
    n = A.size
    a = np.arange(n)[:, None, None]
    x = np.arange(n)[None, :, None]
    y = np.arange(n)[None, None, :]
    lhs = np.broadcast_to(dd(x, a, dd(a, x, y)), (n, n, n))
    mask = relation_of(zeta).matrix[None, :, :] & (lhs != y)
    bad = np.argwhere(mask)
    return tuple(int(t) for t in bad[0]) if bad.size else None


def check_corollary_24(A: FiniteAlgebra, d: Term, **kw) -> bool:
    return corollary_24_witness(A, d, **kw) is None


# -- extending central congruences -------------------------------------------

def extend_central_congruence(Abar: FiniteAlgebra, emb: Homomorphism, a: int,
                              alphabar: Partition, beta: Partition, d: Term, *,
                              zeta: Partition | None = None,
                              limits: Limits = DEFAULT_LIMITS) -> Partition:
    """``{(x, y) in zeta : d(a, x, y) in [a]beta}`` on ``Abar``.

    ``emb`` embeds A into ``Abar`` and ``a`` is an element of A.  ``zeta``
    is the center of ``Abar``; pass it when it is known by other means (for
    instance as a power of a center) to avoid recomputing it.  The result is
    checked to be a congruence below ``alphabar`` that restricts to ``beta``.
    """
    _check_ternary(Abar, d)
    if emb.target is not Abar:
        raise PreconditionError("embedding does not land in Abar")
    if not emb.is_injective():
        raise PreconditionError("map is not injective")
    if not 0 <= a < emb.source.size:
        raise PreconditionError(f"{a} is not an element of {emb.source.name}")
    if zeta is None:
        zeta = center(Abar, malcev=d, limits=limits)
    if not alphabar <= zeta:
        raise PreconditionError(f"alphabar={alphabar} is not below the center {zeta}")
    if not beta <= restrict(alphabar, emb):
        raise PreconditionError(f"beta={beta} is not below the restriction of alphabar")
    n = Abar.size
    abar = emb(a)
    in_class = np.zeros(n, dtype=bool)
    in_class[emb.array[beta.array == beta.array[a]]] = True
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    vals = np.broadcast_to(eval_term_array(Abar, d, [np.full((1, 1), abar), x, y]), (n, n))
    rel = relation_of(zeta).matrix & in_class[vals]
    betabar = congruence_from_relation(rel, n)
    if betabar is None:
        raise VerificationFailure(f"extension of {beta} to {Abar.name} is not an equivalence")
    w = congruence_witness(Abar, betabar)
    if w is not None:
        raise VerificationFailure(f"extension {betabar} is not a congruence: {w}")
    if not betabar <= alphabar:
        raise VerificationFailure(f"extension {betabar} is not below {alphabar}")
    back = restrict(betabar, emb)
    if back != beta:
        raise VerificationFailure(f"extension restricts to {back}, expected {beta}")
    return betabar


# -- the cube construction ----------------------------------------------------

@dataclass
class CubeExtension:
    base: FiniteAlgebra
    cube: FiniteAlgebra  # A^3
    B: FiniteAlgebra
    inclusion: Homomorphism  # B -> A^3
    d_map: Homomorphism  # B -> A
    theta: Partition  # on B
    Theta: Partition  # on A^3
    embedding: Homomorphism  # B/theta -> A^3/Theta
    base_point: tuple[int, int, int]
    non_abelian: bool
    center_dense: bool
    center_verified: bool
    proper: bool
    essential: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return self.non_abelian and self.center_dense


def chained_triples(A: FiniteAlgebra, zeta: Partition) -> list[int]:
    """Codes in A^3 of the triples ``(a, b, c)`` with ``a zeta b zeta c``."""
    n = A.size
    r = zeta.array
    c0, c1, c2 = np.unravel_index(np.arange(n ** 3), (n, n, n))
    return np.flatnonzero((r[c0] == r[c1]) & (r[c1] == r[c2])).tolist()


def build_cube_extension(A: FiniteAlgebra, d: Term, *, base_point: tuple[int, int, int] = (0, 0, 0),
                         check_essential: bool = True,
                         limits: Limits = DEFAULT_LIMITS) -> CubeExtension:
    """Embed ``B/ker d`` into ``A^3/Theta`` where B is the set of center-chained triples.

    The intended hypotheses (A non-abelian, center dense) are reported but do
    not block the construction.
    """
    from .decompose import essential_witness  # avoid an import cycle

    _check_ternary(A, d)
    if A.size ** 3 > limits.max_size:
        raise SizeLimitError(f"cube of {A.name}", A.size ** 3, limits.max_size)
    require_modular(A, d, limits)
    zeta = center(A, malcev=d, limits=limits)
    L = congruence_lattice(A)
    non_abelian = not zeta.is_one()
    dense = density_witness(L, zeta) is None
    n = A.size
    P, _ = make_product([A, A, A], name=f"{A.name}^3")
    members = chained_triples(A, zeta)
    if subalgebra_generated(P, members) != frozenset(members):
        raise VerificationFailure("center-chained triples are not closed")
    B, inc = make_subalgebra(P, members, name=f"B({A.name})")
    coords = np.unravel_index(inc.array, (n, n, n))
    d_map = Homomorphism(B, A, tuple(np.broadcast_to(_d(A, d)(*coords), (B.size,)).tolist()))
    if not is_homomorphism(d_map):
        raise VerificationFailure(f"d is not a homomorphism B -> {A.name}")
    if not d_map.is_surjective():
        raise VerificationFailure(f"d does not map B onto {A.name}")
    theta = kernel(d_map)
    base_code = int(np.ravel_multi_index(tuple(base_point), (n, n, n)))
    if base_code not in members:
        raise PreconditionError(f"base point {base_point} is not center-chained")
    base_index = members.index(base_code)

    zeta3 = product_congruence([zeta, zeta, zeta])
    notes = []
    pairs = int(relation_of(zeta3).matrix.sum())
    verified = pairs <= limits.max_pair_algebra
    if verified:
        if not commutator(P, zeta3, Partition.one(P.size), malcev=d, limits=limits).is_zero():
            raise VerificationFailure(f"the cube of the center of {A.name} is not central")
    else:
        notes.append(f"center of the cube taken as the cube of the center ({pairs} pairs, "
                     f"over the pair-algebra limit)")
    Theta = extend_central_congruence(P, inc, base_index, zeta3, theta, d, zeta=zeta3,
                                      limits=limits)
    Bq, nat_b = make_quotient(B, theta, name=f"{B.name}/ker d")
    Pq, nat_p = make_quotient(P, Theta, name=f"{P.name}/Theta")
    image = [-1] * Bq.size
    for b in range(B.size):
        v = nat_p(inc(b))
        q = nat_b(b)
        if image[q] not in (-1, v):
            raise VerificationFailure("induced map on B/theta is not well defined")
        image[q] = v
    emb = Homomorphism(Bq, Pq, tuple(image))
    if not emb.is_injective() or not is_homomorphism(emb):
        raise VerificationFailure("induced map B/theta -> A^3/Theta is not an embedding")
    ext = CubeExtension(A, P, B, inc, d_map, theta, Theta, emb, tuple(base_point), non_abelian,
                        dense, verified, proper=not emb.is_surjective(), notes=notes)
    if check_essential:
        w = essential_witness(emb, limits=limits)
        ext.essential = w is None
        if ext.hypotheses_hold and w is not None:
            raise VerificationFailure(
                f"cube extension of {A.name} is not essential: {w} restricts to 0")
    return ext


def cube_base_point_probe(A: FiniteAlgebra, d: Term, *,
                          limits: Limits = DEFAULT_LIMITS) -> dict[tuple[int, int, int], Partition]:
    """Theta for every base point of B, keyed by the base triple."""
    zeta = center(A, malcev=d, limits=limits)
    n = A.size
    P, _ = make_product([A, A, A], name=f"{A.name}^3")
    members = chained_triples(A, zeta)
    B, inc = make_subalgebra(P, members)
    coords = np.unravel_index(inc.array, (n, n, n))
    d_map = Homomorphism(B, A, tuple(np.broadcast_to(_d(A, d)(*coords), (B.size,)).tolist()))
    theta = kernel(d_map)
    zeta3 = product_congruence([zeta, zeta, zeta])
    out = {}
    for i, code in enumerate(members):
        key = tuple(int(c) for c in np.unravel_index(code, (n, n, n)))
        out[key] = extend_central_congruence(P, inc, i, zeta3, theta, d, zeta=zeta3, limits=limits)
    return out
