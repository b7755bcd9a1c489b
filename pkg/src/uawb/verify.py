"""Exhaustive verification suite over the builtin corpus.

Each check has a short id (used by ``uawb verify --check``), a one-line
title, and a default corpus slice.  Outcomes are pass, fail (with the
canonically least witness) or skipped (with a reason).  Reports contain no
timings so that repeated runs are byte-identical.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from .algebra import FiniteAlgebra, find_isomorphism, make_product, make_subalgebra, all_subuniverses
from .commutator import (c1_witness, center, check_fact_properties, commutator, derived_congruence,
                         is_abelian_congruence)
from .config import DEFAULT_LIMITS, Limits
from .congruence import (congruence_lattice, is_si, pentagon_witness, principal_congruence,
                         product_congruence, restrict, split_product_congruence, NotProductCongruence)
from .corpus import CorpusEntry, builtin_corpus
from .decompose import (SubdirectRepresentation, admissible_betas, decompose_absolute_retract,
                        enumerate_direct_decompositions, lemma_37_witness, maximize_meet_system,
                        meet_maximality_witness, meet_of, product_essential_witness,
                        product_essential_witness_exhaustive, split_center_abelian,
                        verify_theorem_33, verify_theorem_41)
from .errors import RefusalError, VerificationFailure
from .gumm import (build_cube_extension, chains, corollary_24_witness, cube_base_point_probe,
                   difference_term_witness, extend_central_congruence, gumm_condition_witness)
from .partition import Partition
from .terms import Term

# chain triples whose cube is evaluated when d itself is tested in the term condition
D_SCOPE_BUDGET = 1 << 18


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    title: str
    status: str  # pass | fail | skipped
    checked: int = 0
    witness: str | None = None
    reason: str | None = None
    details: tuple[str, ...] = ()

    def line(self) -> str:
        s = f"[{self.status.upper():7}] {self.name:9} {self.title} ({self.checked} instances)"
        if self.witness:
            s += f"\n          witness: {self.witness}"
        if self.reason:
            s += f"\n          reason: {self.reason}"
        for d in self.details:
            s += f"\n          note: {d}"
        return s


@dataclass
class Context:
    corpus: list[CorpusEntry]
    limits: Limits = DEFAULT_LIMITS
    seed: int | None = None
    cache: dict = field(default_factory=dict)

    def order(self, items: list) -> list:
        """Evaluation order; shuffled under a seed, which must not change any outcome."""
        items = list(items)
        if self.seed is not None:
            random.Random(self.seed).shuffle(items)
        return items

    def entries(self, pred: Callable[[CorpusEntry], bool] = lambda e: True) -> list[CorpusEntry]:
        return [e for e in self.corpus if pred(e)]


class Tally:
    """Counts instances and keeps the least failure key seen."""

    def __init__(self):
        self.checked = 0
        self.failures: list[tuple] = []
        self.notes: list[str] = []

    def fail(self, key: tuple, text: str) -> None:
        self.failures.append((key, text))

    def outcome(self, name: str, title: str) -> CheckOutcome:
        if self.failures:
            key, text = min(self.failures, key=lambda f: (repr(f[0]), f[1]))
            return CheckOutcome(name, title, "fail", self.checked, text,
                                details=tuple(self.notes) + (f"{len(self.failures)} failing instances",))
        return CheckOutcome(name, title, "pass", self.checked, details=tuple(self.notes))


def _modular(e: CorpusEntry) -> bool:
    return e.kind != "set"


def _with_d(e: CorpusEntry) -> bool:
    return e.difference_term is not None


# -- shared corpora -----------------------------------------------------------

def product_pairs(ctx: Context, max_size: int = 36) -> list[tuple[CorpusEntry, CorpusEntry]]:
    es = ctx.entries(_modular)
    return [(a, b) for a in es for b in es
            if a.kind == b.kind and a.algebra.size * b.algebra.size <= max_size]


def pair_product(ctx: Context, ea: CorpusEntry, eb: CorpusEntry) -> FiniteAlgebra:
    """A x B, built once per context so its congruence lattice is shared."""
    key = ("product", ea.name, eb.name)
    if key not in ctx.cache:
        ctx.cache[key] = make_product([ea.algebra, eb.algebra])[0]
    return ctx.cache[key]


def rep_sources(ctx: Context) -> list[tuple[str, FiniteAlgebra, Term | None]]:
    """Corpus algebras of size 2..8, plus a few small products of them."""
    if "sources" in ctx.cache:
        return ctx.cache["sources"]
    out = [(e.name, e.algebra, e.difference_term)
           for e in ctx.entries(lambda e: _modular(e) and 1 < e.algebra.size <= 8)]
    names = {e.name: e for e in ctx.corpus}
    for a, b in [("s3", "z2"), ("d4", "z2"), ("z2", "z3"), ("s3", "z3"), ("chain2", "chain3")]:
        if a in names and b in names:
            P, _ = make_product([names[a].algebra, names[b].algebra], name=f"{a}x{b}")
            out.append((P.name, P, names[a].difference_term))
    ctx.cache["sources"] = out
    return out


def kernel_tuples(A: FiniteAlgebra, max_n: int = 3) -> list[tuple[Partition, ...]]:
    L = congruence_lattice(A)
    out = []
    for k in range(1, max_n + 1):
        for etas in itertools.combinations(L.elements, k):
            if meet_of(etas, A.size).is_zero():
                out.append(etas)
    return out


def maximized_reps(ctx: Context) -> list[tuple[str, SubdirectRepresentation, Term | None]]:
    if "reps" in ctx.cache:
        return ctx.cache["reps"]
    out = []
    for name, A, d in rep_sources(ctx):
        seen = set()
        for etas in kernel_tuples(A):
            if any(e.is_one() for e in etas):
                continue
            phis = maximize_meet_system(A, etas).phis
            if phis in seen:
                continue
            seen.add(phis)
            rep = SubdirectRepresentation.from_kernels(A, phis)
            if rep.product.size <= 216:
                out.append((name, rep, d))
    ctx.cache["reps"] = out
    return out


def _key(name: str, parts: Iterable[Partition]) -> tuple:
    return (name,) + tuple(p.reps for p in parts)


# -- checks -------------------------------------------------------------------

def check_lemma21(ctx: Context) -> Tally:
    t = Tally()
    skipped = 0
    for ea, eb in ctx.order(product_pairs(ctx)):
        A, B = ea.algebra, eb.algebra
        Lp = congruence_lattice(pair_product(ctx, ea, eb))
        if pentagon_witness(Lp) is not None:
            skipped += 1
            continue
        LA, LB = congruence_lattice(A), congruence_lattice(B)
        sizes = (A.size, B.size)
        split = {}
        for i, th in enumerate(Lp):
            try:
                split[i] = split_product_congruence(th, sizes)
            except NotProductCongruence:
                split[i] = None
        for f1, f2 in itertools.product(LA, LA):
            if not f1 <= f2:
                continue
            for psi in LB:
                lo = Lp.index(product_congruence([f1, psi]))
                hi = Lp.index(product_congruence([f2, psi]))
                for i in np.flatnonzero(Lp.leq[lo] & Lp.leq[:, hi]):
                    t.checked += 1
                    parts = split[int(i)]
                    if parts is None or parts[1] != psi or not (f1 <= parts[0] <= f2):
                        t.fail(_key(f"{ea.name}x{eb.name}", [f1, f2, psi, Lp[int(i)]]),
                               f"{ea.name} x {eb.name}: theta={Lp[int(i)]} in the interval "
                               f"from {f1} x {psi} to {f2} x {psi} is not of the stated form")
    if skipped:
        t.notes.append(f"{skipped} products with non-modular congruence lattice skipped")
    return t


def _dense_flags(L) -> np.ndarray:
    nonzero = np.arange(len(L)) != L.bottom
    return np.array([bool((L.meet_table[i][nonzero] != L.bottom).all()) for i in range(len(L))])


def check_lemma22(ctx: Context) -> Tally:
    t = Tally()
    for ea, eb in ctx.order(product_pairs(ctx)):
        A, B = ea.algebra, eb.algebra
        Lp = congruence_lattice(pair_product(ctx, ea, eb))
        if pentagon_witness(Lp) is not None:
            continue
        LA, LB = congruence_lattice(A), congruence_lattice(B)
        da, db, dp = _dense_flags(LA), _dense_flags(LB), _dense_flags(Lp)
        for i, a in enumerate(LA):
            for j, b in enumerate(LB):
                if da[i] and db[j]:
                    t.checked += 1
                    if not dp[Lp.index(product_congruence([a, b]))]:
                        t.fail(_key(f"{ea.name}x{eb.name}", [a, b]),
                               f"{ea.name} x {eb.name}: {a} and {b} dense, product not dense")
    return t


def check_thm23(ctx: Context) -> Tally:
    t = Tally()
    d_scope = 0
    for e in ctx.order(ctx.entries(lambda e: _modular(e) and _with_d(e) and e.algebra.size <= 8)):
        A, d = e.algebra, e.difference_term
        L = congruence_lattice(A)
        for phi in L:
            for psi in L:
                if not psi <= phi:
                    continue
                t.checked += 1
                include_d = chains(phi, psi)[0].size ** 3 <= D_SCOPE_BUDGET
                d_scope += include_d
                w = gumm_condition_witness(A, d, phi, psi, include_d=include_d)
                zero = commutator(A, phi, psi, malcev=d, limits=ctx.limits).is_zero()
                if (w is None) != zero:
                    side = "conditions hold but [phi,psi] != 0" if w is None else \
                        f"[phi,psi] = 0 but conditions fail: {w}"
                    t.fail(_key(e.name, [phi, psi]), f"{e.name}: phi={phi}, psi={psi}: {side}")
    t.notes.append(f"d itself included in the term condition for {d_scope} of {t.checked} pairs")
    return t


def check_cor24(ctx: Context) -> Tally:
    t = Tally()
    for e in ctx.order(ctx.entries(lambda e: _modular(e) and _with_d(e))):
        t.checked += 1
        w = corollary_24_witness(e.algebra, e.difference_term, limits=ctx.limits)
        if w is not None:
            t.fail((e.name,), f"{e.name}: (a, x, y) = {w}")
    return t


def check_rem32a(ctx: Context) -> Tally:
    t = Tally()
    for name, A, d in ctx.order(rep_sources(ctx)):
        for etas in kernel_tuples(A):
            t.checked += 1
            rep = SubdirectRepresentation.from_kernels(A, etas)
            fast = product_essential_witness(rep) is None
            slow = product_essential_witness_exhaustive(rep) is None
            maximal = meet_maximality_witness(A, etas) is None
            if not (fast == slow == maximal):
                t.fail(_key(name, etas), f"{name}: kernels {[str(x) for x in etas]}: "
                                         f"product-essential {slow}, reduced test {fast}, "
                                         f"meet-maximal {maximal}")
    return t


def _pipeline(ctx: Context) -> dict[str, Tally]:
    if "pipeline" in ctx.cache:
        return ctx.cache["pipeline"]
    tallies = {k: Tally() for k in ("prop34", "prop35", "lemma36", "lemma37", "lemma38", "thm33")}
    for name, rep, d in ctx.order(maximized_reps(ctx)):
        for sub in verify_theorem_33(rep, malcev=d, limits=ctx.limits):
            if sub.name == "lemma37":
                continue
            tl = tallies[sub.name]
            tl.checked += sub.checked
            if not sub.holds:
                tl.fail(_key(name, rep.kernels), f"{name} kernels {[str(k) for k in rep.kernels]}: "
                                                 f"{sub.witness}")
        for betas in admissible_betas(rep, malcev=d, limits=ctx.limits):
            tl = tallies["lemma37"]
            tl.checked += 1
            w = lemma_37_witness(rep, betas, malcev=d, limits=ctx.limits)
            if w is not None:
                tl.fail(_key(name, betas), f"{name} betas {[str(b) for b in betas]}: k, pair = {w}")
    n = len(maximized_reps(ctx))
    for tl in tallies.values():
        tl.notes.append(f"over {n} maximized subdirect representations")
    ctx.cache["pipeline"] = tallies
    return tallies


def check_thm41(ctx: Context) -> Tally:
    t = Tally()
    vacuous = 0
    for name, A, d in ctx.order(rep_sources(ctx) + [(e.name, e.algebra, e.difference_term)
                                                    for e in ctx.entries(_modular)
                                                    if e.algebra.size == 1]):
        t.checked += 1
        try:
            r = verify_theorem_41(A, limits=ctx.limits)
        except VerificationFailure as exc:
            t.fail((name,), f"{name}: {exc}")
            continue
        vacuous += r.outcome == "vacuous"
    t.notes.append(f"{vacuous} finitely subdirectly irreducible inputs pass vacuously")
    return t


def check_thm42(ctx: Context) -> Tally:
    t = Tally()
    names = {e.name: e for e in ctx.corpus}
    for e in ctx.order(ctx.entries(_modular)):
        A, d = e.algebra, e.difference_term
        t.checked += 1
        try:
            r = decompose_absolute_retract(A, malcev=d, limits=ctx.limits)
        except VerificationFailure as exc:
            t.fail((e.name,), f"{e.name}: {exc}")
            continue
        if r.outcome == "proper-extension" and (r.embedding is None or r.embedding.is_surjective()):
            t.fail((e.name,), f"{e.name}: proper extension without a proper embedding")
        if A.size > 1 and is_si(A) and (r.outcome != "product" or len(r.factors) != 1):
            t.fail((e.name,), f"{e.name}: subdirectly irreducible but decomposed as {r.to_dict()}")
        if e.name == "z6":
            want = [names[k].algebra for k in ("z2", "z3") if k in names]
            got = sorted(r.factors, key=lambda F: F.size)
            if len(want) == 2 and not (len(got) == 2 and all(
                    find_isomorphism(F, W) is not None for F, W in zip(got, want))):
                t.fail((e.name,), "z6 does not decompose as Z2 x Z3")
        t.notes.append(f"{e.name}: {r.outcome} with factor sizes {[F.size for F in r.factors]}")
    t.notes.sort()
    return t


def check_thm43(ctx: Context) -> Tally:
    t = Tally()
    for e in ctx.order(ctx.entries(_modular)):
        A, d = e.algebra, e.difference_term
        t.checked += 1
        try:
            r = split_center_abelian(A, malcev=d, limits=ctx.limits)
        except VerificationFailure as exc:
            t.fail((e.name,), f"{e.name}: {exc}")
            continue
        if r.c1_holds and r.outcome == "c1-failure":
            t.fail((e.name,), f"{e.name}: (C1) holds but the split was refused")
        if e.abelian_group and not (r.outcome == "product" and r.theta.is_one() and r.psi.is_zero()):
            t.fail((e.name,), f"{e.name}: abelian group did not split as trivial x A")
        if e.name == "s3" and not (r.outcome == "product" and r.theta.is_zero() and r.psi.is_one()
                                   and r.centerless and r.abelian):
            t.fail((e.name,), "s3 did not split as S3 x trivial")
        if e.name == "d4":
            expected = principal_congruence(A, e.element("e"), e.element("r2"))
            if r.outcome != "c1-failure" or (r.zeta & r.derived) != expected:
                t.fail((e.name,), "d4 was not reported as a (C1) failure with zeta ^ [1,1] = Cg(e, r^2)")
        t.notes.append(f"{e.name}: {r.outcome}")
    t.notes.sort()
    return t


def check_thm44(ctx: Context) -> Tally:
    t = Tally()
    for e in ctx.order(ctx.entries(lambda e: e.algebra.size <= 16)):
        t.checked += 1
        r = enumerate_direct_decompositions(e.algebra)
        if not r.unique:
            t.fail((e.name,), f"{e.name}: factor multisets {r.multisets}")
        t.notes.append(f"{e.name}: {len(r.factorizations)} factorizations")
    t.notes.sort()
    return t


def check_propA1(ctx: Context) -> Tally:
    t = Tally()
    for e in ctx.order(ctx.entries(lambda e: _modular(e) and _with_d(e) and e.algebra.size <= 8)):
        Abar, d = e.algebra, e.difference_term
        zeta = center(Abar, malcev=d, limits=ctx.limits)
        L = congruence_lattice(Abar)
        for S in all_subuniverses(Abar):
            A, inc = make_subalgebra(Abar, S)
            LA = congruence_lattice(A)
            for ab in L.below(zeta):
                r = restrict(ab, inc)
                for beta in (b for b in LA if b <= r):
                    for a in range(A.size):
                        t.checked += 1
                        try:
                            extend_central_congruence(Abar, inc, a, ab, beta, d, zeta=zeta,
                                                      limits=ctx.limits)
                        except VerificationFailure as exc:
                            t.fail(_key(e.name, [ab, beta]) + (tuple(sorted(S)), a),
                                   f"{e.name}, subalgebra {sorted(S)}, a={a}: {exc}")
    return t


def check_propA2(ctx: Context) -> Tally:
    t = Tally()
    targets = ctx.entries(lambda e: e.kind == "group" and e.algebra.size ** 3 <= ctx.limits.max_size
                          and (e.abelian_group or e.name in ("d4", "q8")))
    for e in ctx.order(targets):
        A, d = e.algebra, e.difference_term
        t.checked += 1
        try:
            c = build_cube_extension(A, d, check_essential=e.name in ("d4", "q8"), limits=ctx.limits)
        except (VerificationFailure, RefusalError) as exc:
            t.fail((e.name,), f"{e.name}: {exc}")
            continue
        if e.abelian_group and c.proper:
            t.fail((e.name,), f"{e.name}: abelian but the cube extension is proper")
        if e.name in ("d4", "q8") and not (c.hypotheses_hold and c.proper and c.essential):
            t.fail((e.name,), f"{e.name}: expected a proper essential extension")
        t.notes.append(f"{e.name}: |B|={c.B.size}, |A^3/Theta|={c.embedding.target.size}, "
                       f"proper={c.proper}")
    if any(e.name == "d4" for e in targets):
        e = next(e for e in targets if e.name == "d4")
        probe = cube_base_point_probe(e.algebra, e.difference_term, limits=ctx.limits)
        distinct = len(set(probe.values()))
        t.notes.append(f"d4: Theta over {len(probe)} base points takes {distinct} distinct value(s)")
    t.notes.sort()
    return t


def _fact_tally(ctx: Context, facts: set[str], with_sub: bool = False,
                with_partner: bool = False) -> Tally:
    t = Tally()
    entries = ctx.entries(lambda e: _modular(e) and e.algebra.size <= 8)
    for e in ctx.order(entries):
        A, d = e.algebra, e.difference_term
        runs = [dict()]
        if with_sub:
            runs = [dict(subalgebra=make_subalgebra(A, S)[1]) for S in all_subuniverses(A)]
        if with_partner:
            runs = [dict(partner=f.algebra) for f in entries
                    if f.kind == e.kind and A.size * f.algebra.size <= 36]
        for kw in runs:
            for o in check_fact_properties(A, only=facts, malcev=d, limits=ctx.limits, **kw):
                t.checked += o.checked
                if not o.holds:
                    t.fail((e.name, o.name), f"{e.name} {o.name}: {o.witness}")
    return t


def check_fact1(ctx):
    return _fact_tally(ctx, {"below-meet", "symmetry", "join-additivity"})


def check_fact2(ctx):
    return _fact_tally(ctx, {"restriction"}, with_sub=True)


def check_fact3(ctx):
    return _fact_tally(ctx, {"quotient"})


def check_fact4(ctx):
    t = _fact_tally(ctx, {"abelian-permutes"})
    for extra in (_fact_tally(ctx, {"center-restriction"}, with_sub=True),
                  _fact_tally(ctx, {"center-of-product"}, with_partner=True)):
        t.checked += extra.checked
        t.failures += extra.failures
    return t


def check_fact5(ctx):
    t = Tally()
    for e in ctx.order(ctx.entries(lambda e: _modular(e) and _with_d(e))):
        t.checked += 1
        w = difference_term_witness(e.algebra, e.difference_term, limits=ctx.limits)
        if w is not None:
            t.fail((e.name,), f"{e.name}: {w}")
    return t


def check_fact6(ctx):
    """(C1) must hold wherever the generated variety is known to be residually small."""
    t = Tally()
    for e in ctx.order(ctx.entries(_modular)):
        t.checked += 1
        w = c1_witness(e.algebra, malcev=e.difference_term, limits=ctx.limits)
        if e.residually_small_variety and w is not None:
            t.fail((e.name,), f"{e.name}: {w}")
        t.notes.append(f"{e.name}: (C1) {'holds' if w is None else 'fails'} on this algebra")
    t.notes.sort()
    return t


def _from_pipeline(key):
    return lambda ctx: _pipeline(ctx)[key]


CHECKS: dict[str, tuple[str, Callable[[Context], Tally]]] = {
    "lemma21": ("congruences in an interval between product congruences are products", check_lemma21),
    "lemma22": ("products of dense congruences are dense", check_lemma22),
    "thm23": ("term condition for d agrees with [phi,psi] = 0", check_thm23),
    "cor24": ("d(x,a,d(a,x,y)) = y on the center", check_cor24),
    "rem32a": ("product-essential iff meet-maximal kernels", check_rem32a),
    "prop34": ("central, zero-restricting, saturating congruences vanish", _from_pipeline("prop34")),
    "prop35": ("zero-restricting congruences of the product are central", _from_pipeline("prop35")),
    "lemma36": ("product of the alpha-bars is dense", _from_pipeline("lemma36")),
    "lemma37": ("composition identity for admissible betas", _from_pipeline("lemma37")),
    "lemma38": ("congruences below the beta-bar product saturate to A", _from_pipeline("lemma38")),
    "thm33": ("product-essential subdirect embeddings are essential", _from_pipeline("thm33")),
    "thm41": ("maximized two-factor splits of non-FSI algebras are essential", check_thm41),
    "thm42": ("decomposition through a longest irredundant meet", check_thm42),
    "thm43": ("center / abelian split", check_thm43),
    "thm44": ("unique factorization into directly indecomposables", check_thm44),
    "propA1": ("extension of central congruences from a subalgebra", check_propA1),
    "propA2": ("cube extension B/ker d into A^3/Theta", check_propA2),
    "fact1": ("commutator below meet, symmetric, join-additive", check_fact1),
    "fact2": ("commutator of restrictions below restricted commutator", check_fact2),
    "fact3": ("commutator of quotients", check_fact3),
    "fact4": ("center of products and subalgebras; abelian congruences permute", check_fact4),
    "fact5": ("difference term laws", check_fact5),
    "fact6": ("(C1) where the variety is residually small", check_fact6),
}


def run_check(name: str, ctx: Context) -> CheckOutcome:
    title, fn = CHECKS[name]
    try:
        tally = fn(ctx)
    except RefusalError as exc:
        return CheckOutcome(name, title, "skipped", reason=str(exc))
    out = tally.outcome(name, title)
    if out.checked == 0 and out.status == "pass":
        return CheckOutcome(name, title, "skipped", reason="no instances in the selected corpus",
                            details=out.details)
    return out


def run_suite(checks: Iterable[str] | None = None, corpus: Iterable[str] | None = None, *,
              limits: Limits = DEFAULT_LIMITS, seed: int | None = None) -> list[CheckOutcome]:
    names = sorted(CHECKS) if checks is None else sorted(set(checks))
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    entries = builtin_corpus()
    if corpus is not None:
        wanted = set(corpus)
        missing = wanted - {e.name for e in entries}
        if missing:
            raise KeyError(f"unknown corpus name(s): {', '.join(sorted(missing))}")
        entries = [e for e in entries if e.name in wanted]
    ctx = Context(entries, limits, seed)
    return [run_check(n, ctx) for n in names]


def format_report(outcomes: list[CheckOutcome]) -> str:
    lines = [o.line() for o in outcomes]
    counts = {s: sum(o.status == s for o in outcomes) for s in ("pass", "fail", "skipped")}
    lines.append(f"summary: {counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped")
    lines.append("--- machine-readable ---")
    lines.append(json.dumps({"checks": [asdict(o) for o in outcomes], "summary": counts},
                            sort_keys=True, indent=1))
    return "\n".join(lines) + "\n"
