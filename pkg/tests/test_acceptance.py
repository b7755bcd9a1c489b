"""Acceptance criteria 1-14.

Each test prints (and records for the terminal summary) one PASS/FAIL line.
Timed criteria run on fresh copies of the corpus algebras so that caches
filled by earlier tests do not flatter the timings.
"""
import contextlib
import dataclasses
import itertools
import subprocess
import sys
import time

from uawb.algebra import find_isomorphism
from uawb.commutator import c1_witness, center, check_c1, commutator
from uawb.congruence import congruence_lattice, is_si, principal_congruence
from uawb.corpus import builtin_corpus, corpus_entry
from uawb.decompose import (decompose_absolute_retract, is_product_essential, split_center_abelian)
from uawb.gumm import build_cube_extension
from uawb.io import parse_algebra, print_algebra
from uawb.oracles import (brute_force_congruences, distributive_commutator_oracle, group_center_oracle,
                          group_commutator_oracle)
from uawb.partition import Partition
from uawb.verify import Context, maximized_reps, run_check

from conftest import ACCEPTANCE


def fresh(A):
    """Same tables, empty caches."""
    return parse_algebra(print_algebra(A))


def fresh_corpus():
    return [dataclasses.replace(e, algebra=fresh(e.algebra)) for e in builtin_corpus()]


@contextlib.contextmanager
def criterion(k: int, text: str):
    notes: list[str] = []
    t0 = time.perf_counter()
    ok = False
    try:
        yield notes
        ok = True
    finally:
        dt = time.perf_counter() - t0
        extra = f" [{'; '.join(notes)}]" if notes else ""
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'} - {text} ({dt:.1f}s){extra}"
        ACCEPTANCE[k] = line
        print(line)


def test_01_congruence_lattice_oracle():
    with criterion(1, "Con(A) equals brute-force enumeration for corpus algebras of size <= 8") as notes:
        t0 = time.perf_counter()
        entries = [e for e in fresh_corpus() if e.algebra.size <= 8]
        for e in entries:
            assert list(congruence_lattice(e.algebra)) == brute_force_congruences(e.algebra), e.name
        notes.append(f"{len(entries)} algebras")
        assert time.perf_counter() - t0 < 60


def test_02_commutator_oracles():
    with criterion(2, "commutators match group and lattice oracles") as notes:
        t0 = time.perf_counter()
        pairs = 0
        for name in ("z4", "z6", "klein", "d4", "q8", "s3"):
            e = corpus_entry(name)
            A = fresh(e.algebra)
            L = congruence_lattice(A)
            for a, b in itertools.product(L, repeat=2):
                pairs += 1
                assert commutator(A, a, b, malcev=e.difference_term) == group_commutator_oracle(A, a, b), \
                    (name, str(a), str(b))
        for e in fresh_corpus():
            if e.kind != "lattice":
                continue
            L = congruence_lattice(e.algebra)
            for a, b in itertools.product(L, repeat=2):
                pairs += 1
                assert commutator(e.algebra, a, b) == distributive_commutator_oracle(a, b), e.name
        notes.append(f"{pairs} pairs")
        assert time.perf_counter() - t0 < 60


def test_03_centers():
    with criterion(3, "centers of D4, Q8, abelian groups and S3"):
        for name in ("d4", "q8"):
            e = corpus_entry(name)
            A = fresh(e.algebra)
            z = center(A, malcev=e.difference_term)
            assert z == group_center_oracle(A)
            assert sorted(len(b) for b in z.blocks()) == [2, 2, 2, 2]
        for e in fresh_corpus():
            if e.abelian_group:
                assert center(e.algebra, malcev=e.difference_term).is_one(), e.name
        s3 = corpus_entry("s3")
        assert center(fresh(s3.algebra), malcev=s3.difference_term).is_zero()


def _suite_check(name, max_seconds=None):
    ctx = Context(fresh_corpus())
    t0 = time.perf_counter()
    out = run_check(name, ctx)
    return out, time.perf_counter() - t0


def test_04_product_interval_lemma():
    with criterion(4, "congruences between phi1 x psi and phi2 x psi are products, |A x B| <= 36") as notes:
        out, dt = _suite_check("lemma21")
        notes.append(f"{out.checked} instances")
        assert out.status == "pass", out.line()
        assert dt < 300


def test_05_dense_products():
    with criterion(5, "dense x dense is dense on the same product corpus") as notes:
        out, _ = _suite_check("lemma22")
        notes.append(f"{out.checked} instances")
        assert out.status == "pass", out.line()


def test_06_term_condition_and_identity():
    with criterion(6, "basic-operation term condition iff [phi,psi] = 0; identity on the center") as notes:
        tc, _ = _suite_check("thm23")
        cor, _ = _suite_check("cor24")
        notes.append(f"{tc.checked} congruence pairs, {cor.checked} algebras")
        assert tc.status == "pass", tc.line()
        assert cor.status == "pass", cor.line()


def test_07_product_essential_pipeline():
    with criterion(7, "every maximized subdirect representation passes the full pipeline") as notes:
        ctx = Context(fresh_corpus())
        t0 = time.perf_counter()
        reps = maximized_reps(ctx)
        assert all(is_product_essential(rep) for _, rep, _ in reps)
        names = ("prop35", "lemma36", "lemma37", "lemma38", "prop34", "thm33")
        outs = [run_check(n, ctx) for n in names]
        dt = time.perf_counter() - t0
        notes.append(f"{len(reps)} representations")
        for o in outs:
            assert o.status == "pass", o.line()
        assert dt < 600


def test_08_decomposition_procedure():
    with criterion(8, "Z6 decomposes as Z2 x Z3; Z4 and SI members give one factor") as notes:
        z6 = corpus_entry("z6")
        r = decompose_absolute_retract(fresh(z6.algebra), malcev=z6.difference_term)
        assert r.outcome == "product" and r.embedding.is_surjective()
        f2, f3 = sorted(r.factors, key=lambda F: F.size)
        assert find_isomorphism(f2, corpus_entry("z2").algebra) is not None
        assert find_isomorphism(f3, corpus_entry("z3").algebra) is not None
        assert is_si(f2) and is_si(f3)
        count = 0
        for e in fresh_corpus():
            if e.kind == "set" or e.algebra.size == 1 or not (is_si(e.algebra) or e.name == "z4"):
                continue
            r = decompose_absolute_retract(e.algebra, malcev=e.difference_term)
            assert r.outcome == "product" and len(r.factors) == 1, e.name
            assert find_isomorphism(r.factors[0], e.algebra) is not None, e.name
            count += 1
        notes.append(f"{count} SI members")


def test_09_center_abelian_split():
    with criterion(9, "split gives (trivial, A), (S3, trivial), and a (C1) failure on D4"):
        for e in fresh_corpus():
            if not e.abelian_group:
                continue
            r = split_center_abelian(e.algebra, malcev=e.difference_term)
            assert r.outcome == "product", e.name
            assert r.factors[0].size == 1 and r.factors[1].size == e.algebra.size, e.name
        s3 = corpus_entry("s3")
        r = split_center_abelian(fresh(s3.algebra), malcev=s3.difference_term)
        assert r.outcome == "product" and r.factors[0].size == 6 and r.factors[1].size == 1
        assert r.centerless and r.abelian
        d4 = corpus_entry("d4")
        A = fresh(d4.algebra)
        r = split_center_abelian(A, malcev=d4.difference_term)
        assert r.outcome == "c1-failure"
        assert r.zeta & r.derived == principal_congruence(A, d4.element("e"), d4.element("r2"))


def test_10_c1_check():
    with criterion(10, "(C1) holds on abelian members, Z6 and S3; fails on D4 with the expected witness"):
        for e in fresh_corpus():
            if e.abelian_group or e.name in ("z4mod", "z6", "s3"):
                assert check_c1(e.algebra, malcev=e.difference_term), e.name
        d4 = corpus_entry("d4")
        A = fresh(d4.algebra)
        w = c1_witness(A, malcev=d4.difference_term)
        cg = principal_congruence(A, d4.element("e"), d4.element("r2"))
        assert w is not None
        assert (w.alpha, w.beta, w.left, w.right) == (cg, Partition.one(8), cg, Partition.zero(8))


def test_11_central_extension_sweep():
    with criterion(11, "central congruence extension postconditions over all admissible inputs") as notes:
        out, _ = _suite_check("propA1")
        notes.append(f"{out.checked} instances")
        assert out.status == "pass", out.line()


def test_12_cube_extension():
    with criterion(12, "cube extension proper and essential on D4, Q8; not proper on abelian groups") as notes:
        for name in ("d4", "q8"):
            e = corpus_entry(name)
            t0 = time.perf_counter()
            c = build_cube_extension(fresh(e.algebra), e.difference_term)
            dt = time.perf_counter() - t0
            notes.append(f"{name} {dt:.1f}s")
            assert c.cube.size == 512
            assert c.proper and c.essential, name
            assert dt < 600
        for e in fresh_corpus():
            if e.abelian_group:
                c = build_cube_extension(e.algebra, e.difference_term, check_essential=False)
                assert not c.proper, e.name


def test_13_unique_factorization():
    with criterion(13, "unique factorization on every corpus algebra of size <= 16") as notes:
        out, _ = _suite_check("thm44")
        notes.append(f"{out.checked} algebras")
        assert out.status == "pass", out.line()


def test_14_verify_is_deterministic():
    with criterion(14, "two consecutive full verify runs are byte-identical"):
        cmd = [sys.executable, "-m", "uawb.cli", "verify"]
        first = subprocess.run(cmd, capture_output=True)
        second = subprocess.run(cmd, capture_output=True)
        assert first.returncode == second.returncode
        assert first.stdout == second.stdout and first.stdout
