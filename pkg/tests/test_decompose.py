import itertools

import pytest
from hypothesis import given, strategies as st

from uawb.algebra import Homomorphism, find_isomorphism, is_homomorphism, make_product, make_subalgebra
from uawb.commutator import center, derived_congruence
from uawb.congruence import congruence_lattice, principal_congruence
from uawb.corpus import builtin_corpus, corpus_algebra, corpus_entry
from uawb.decompose import (SubdirectRepresentation, admissible_betas, decompose_absolute_retract,
                            direct_factorizations, enumerate_direct_decompositions, essential_witness,
                            is_directly_indecomposable, is_essential, lemma_37_witness,
                            longest_irredundant_meet, maximize_meet_system, meet_maximality_witness,
                            meet_of, product_essential_witness, product_essential_witness_exhaustive,
                            split_center_abelian, verify_theorem_33, verify_theorem_41)
from uawb.partition import Partition


def kernels_of(name, *pairs):
    A = corpus_algebra(name)
    return A, [principal_congruence(A, a, b) for a, b in pairs]


def z6_kernels():
    # ker mod 2 relates 0,2,4; ker mod 3 relates 0,3
    return kernels_of("z6", (0, 2), (0, 3))


def cube_kernels():
    # the three coordinate projections of Z2^3; element 4a + 2b + c is (a, b, c)
    A = corpus_algebra("z2^3")
    return A, [Partition.from_labels([(x >> k) & 1 for x in range(8)]) for k in (2, 1, 0)]


def test_essential_examples():
    Z4 = corpus_algebra("z4")
    _, inc = make_subalgebra(Z4, {0, 2})
    assert is_essential(inc)
    Z2 = corpus_algebra("z2")
    P, (p0, p1) = make_product([Z2, Z2])
    diag = Homomorphism(Z2, P, (0, 3))
    assert is_homomorphism(diag)
    w = essential_witness(diag)
    assert w is not None and w in (Partition.from_labels(p0.map), Partition.from_labels(p1.map))


def test_essential_lattice_and_principal_scans_agree():
    for name in ("z4", "klein", "s3", "chain3"):
        A = corpus_algebra(name)
        P, _ = make_product([A, A])
        diag = Homomorphism(A, P, tuple(a * A.size + a for a in range(A.size)))
        fast = essential_witness(diag) is None
        slow = essential_witness(diag, congruence_lattice(P)) is None
        assert fast == slow


def test_product_essential_examples():
    A = corpus_algebra("z4")
    assert product_essential_witness(SubdirectRepresentation.from_kernels(A, [Partition.zero(4)])) is None
    Z6, ks = z6_kernels()
    rep = SubdirectRepresentation.from_kernels(Z6, ks)
    assert product_essential_witness(rep) is None and rep.is_surjective()


def test_s3_into_s3_times_z2_is_not_product_essential():
    s3 = corpus_entry("s3")
    S3 = s3.algebra
    derived = derived_congruence(S3)
    rep = SubdirectRepresentation.from_kernels(S3, [Partition.zero(6), derived])
    assert rep.sizes == (6, 2)
    w = product_essential_witness(rep)
    assert w == (Partition.zero(6), Partition.one(2))
    assert product_essential_witness_exhaustive(rep) == w


@given(st.sampled_from(["z6", "klein", "chain3", "s3", "z2^3", "m3", "d4"]), st.data())
def test_product_essential_iff_meet_maximal(name, data):
    A = corpus_algebra(name)
    L = list(congruence_lattice(A))
    k = data.draw(st.integers(1, 3))
    etas = data.draw(st.lists(st.sampled_from(L), min_size=k, max_size=k))
    if not meet_of(etas, A.size).is_zero():
        return
    rep = SubdirectRepresentation.from_kernels(A, etas)
    fast = product_essential_witness(rep) is None
    assert fast == (product_essential_witness_exhaustive(rep) is None)
    assert fast == (meet_maximality_witness(A, etas) is None)
    mx = maximize_meet_system(A, etas)
    assert meet_maximality_witness(A, mx.phis) is None
    assert all(e <= p for e, p in zip(etas, mx.phis))


def test_maximization_examples():
    Z6, ks = z6_kernels()
    assert maximize_meet_system(Z6, ks).phis == tuple(ks)
    S3 = corpus_algebra("s3")
    mx = maximize_meet_system(S3, [center(S3), derived_congruence(S3)])
    assert mx.phis == (Partition.zero(6), Partition.one(6))


def test_product_essential_pipeline_examples():
    for A, ks in [z6_kernels(), kernels_of("klein", (0, 1), (0, 2)),
                  cube_kernels()]:
        rep = SubdirectRepresentation.from_kernels(A, ks)
        checks = verify_theorem_33(rep, malcev=corpus_entry("z2").difference_term)
        assert [c.name for c in checks] == ["prop35", "lemma36", "lemma37", "lemma38", "prop34", "thm33"]
        assert all(c.holds for c in checks), checks
        assert rep.is_surjective()


def test_composition_identity_for_admissible_betas():
    d = corpus_entry("z2").difference_term
    for A, ks in [z6_kernels(), cube_kernels()]:
        rep = SubdirectRepresentation.from_kernels(A, ks)
        assert lemma_37_witness(rep, rep.kernels, malcev=d) is None
        betas = admissible_betas(rep, malcev=d)
        assert betas
        for bs in betas:
            assert lemma_37_witness(rep, bs, malcev=d) is None


def test_longest_irredundant_meet():
    assert len(longest_irredundant_meet(congruence_lattice(corpus_algebra("z6")))) == 2
    assert len(longest_irredundant_meet(congruence_lattice(corpus_algebra("z2^3")))) == 3
    assert len(longest_irredundant_meet(congruence_lattice(corpus_algebra("z4")))) == 1


def test_decompose_z6():
    e = corpus_entry("z6")
    r = decompose_absolute_retract(e.algebra, malcev=e.difference_term)
    assert r.outcome == "product" and all(r.factor_si)
    got = sorted(r.factors, key=lambda F: F.size)
    assert find_isomorphism(got[0], corpus_algebra("z2")) is not None
    assert find_isomorphism(got[1], corpus_algebra("z3")) is not None


@pytest.mark.parametrize("name", ["z4", "z2", "d4", "q8", "s3", "chain2", "m3"])
def test_decompose_si_members(name):
    e = corpus_entry(name)
    r = decompose_absolute_retract(e.algebra, malcev=e.difference_term)
    assert r.outcome == "product" and len(r.factors) == 1 and r.factors[0].size == e.algebra.size


def test_decompose_chain3_is_proper():
    r = decompose_absolute_retract(corpus_algebra("chain3"))
    assert r.outcome == "proper-extension" and r.essential
    assert not r.embedding.is_surjective()


def test_decompose_trivial_is_empty_product():
    r = decompose_absolute_retract(corpus_algebra("trivial"))
    assert r.outcome == "product" and r.factors == ()


@pytest.mark.parametrize("name", ["z4", "klein", "z6", "z2xz4"])
def test_split_abelian_groups(name):
    e = corpus_entry(name)
    r = split_center_abelian(e.algebra, malcev=e.difference_term)
    assert r.outcome == "product" and r.theta.is_one() and r.psi.is_zero()
    assert r.factors[0].size == 1 and r.factors[1].size == e.algebra.size


def test_split_s3_and_d4():
    e = corpus_entry("s3")
    r = split_center_abelian(e.algebra, malcev=e.difference_term)
    assert (r.outcome, r.theta.is_zero(), r.psi.is_one(), r.centerless, r.abelian) == \
        ("product", True, True, True, True)
    d4 = corpus_entry("d4")
    r = split_center_abelian(d4.algebra, malcev=d4.difference_term)
    assert r.outcome == "c1-failure" and not r.c1_holds
    assert r.zeta & r.derived == principal_congruence(d4.algebra, d4.element("e"), d4.element("r2"))
    assert r.kernels == () and r.factors == ()


def test_factorizations():
    assert is_directly_indecomposable(corpus_algebra("z4"))
    assert not is_directly_indecomposable(corpus_algebra("z6"))
    klein = enumerate_direct_decompositions(corpus_algebra("klein"))
    assert len(klein.factorizations) == 3 and klein.unique
    assert klein.class_sizes == [2]
    z6 = enumerate_direct_decompositions(corpus_algebra("z6"))
    assert len(z6.factorizations) == 1 and sorted(z6.class_sizes) == [2, 3]
    assert direct_factorizations(corpus_algebra("trivial")) == [()]
    # F_2^3 splits into three lines in 7 * 6 * 4 / 3! = 28 ways
    assert len(direct_factorizations(corpus_algebra("z2^3"))) == 28


@pytest.mark.parametrize("e", builtin_corpus(), ids=lambda e: e.name)
def test_unique_factorization_on_corpus(e):
    assert enumerate_direct_decompositions(e.algebra).unique


def test_two_factor_split_examples():
    assert verify_theorem_41(corpus_algebra("z4")).outcome == "vacuous"
    for name in ("z6", "klein"):
        r = verify_theorem_41(corpus_algebra(name))
        assert r.outcome == "product" and r.essential
    assert verify_theorem_41(corpus_algebra("chain3")).outcome == "proper-extension"
