import itertools

import pytest
from hypothesis import given, strategies as st

from uawb.algebra import all_subuniverses, make_product, make_subalgebra
from uawb.commutator import (abelian_permutation_witness, c1_witness, center, check_c1,
                             check_fact_properties, commutator, derived_congruence,
                             is_abelian, is_abelian_congruence, is_centerless, is_malcev_term)
from uawb.congruence import congruence_lattice, principal_congruence
from uawb.corpus import builtin_corpus, corpus_entry
from uawb.errors import NotModularError
from uawb.oracles import (GroupTable, center_by_lattice_scan, distributive_commutator_oracle,
                          group_center_oracle, group_commutator_oracle)
from uawb.partition import Partition

GROUPS = [e.name for e in builtin_corpus() if e.kind == "group" and e.algebra.size <= 8]
LATTICES = [e.name for e in builtin_corpus() if e.kind == "lattice"]


@pytest.mark.parametrize("name", GROUPS)
def test_group_commutator_oracle(name):
    e = corpus_entry(name)
    L = congruence_lattice(e.algebra)
    for a, b in itertools.product(L, repeat=2):
        assert commutator(e.algebra, a, b, malcev=e.difference_term) == \
            group_commutator_oracle(e.algebra, a, b)


@pytest.mark.parametrize("name", LATTICES)
def test_lattice_commutator_is_meet(name):
    e = corpus_entry(name)
    L = congruence_lattice(e.algebra)
    for a, b in itertools.product(L, repeat=2):
        assert commutator(e.algebra, a, b) == distributive_commutator_oracle(a, b)


def test_module_is_abelian():
    e = corpus_entry("z4mod")
    assert is_abelian(e.algebra, malcev=e.difference_term)


@pytest.mark.parametrize("name", GROUPS)
def test_group_center_oracle(name):
    e = corpus_entry(name)
    z = center(e.algebra, malcev=e.difference_term)
    assert z == group_center_oracle(e.algebra)
    assert z == center_by_lattice_scan(e.algebra, malcev=e.difference_term)


def test_centers_of_named_groups():
    d4, q8, s3 = corpus_entry("d4"), corpus_entry("q8"), corpus_entry("s3")
    z = center(d4.algebra)
    assert z == principal_congruence(d4.algebra, d4.element("e"), d4.element("r2"))
    assert center(q8.algebra) == principal_congruence(q8.algebra, q8.element("1"), q8.element("-1"))
    # both centers have two-element classes
    assert {len(b) for b in z.blocks()} == {2}
    assert is_centerless(s3.algebra)
    for e in builtin_corpus():
        if e.abelian_group:
            assert is_abelian(e.algebra, malcev=e.difference_term)


def test_refusal_on_bare_sets():
    A = corpus_entry("set4").algebra
    one = Partition.one(4)
    with pytest.raises(NotModularError) as err:
        commutator(A, one, one)
    assert err.value.pentagon is not None


def test_malcev_detection():
    assert is_malcev_term(corpus_entry("s3").algebra, corpus_entry("s3").difference_term)
    assert not is_malcev_term(corpus_entry("chain3").algebra, corpus_entry("chain3").difference_term)


def test_c1_on_corpus():
    for e in builtin_corpus():
        if e.abelian_group or e.name in ("z6", "s3", "z4mod"):
            assert check_c1(e.algebra, malcev=e.difference_term), e.name


def test_c1_witness_on_d4():
    e = corpus_entry("d4")
    A = e.algebra
    w = c1_witness(A, malcev=e.difference_term)
    cg = principal_congruence(A, e.element("e"), e.element("r2"))
    assert w is not None
    assert (w.alpha, w.beta, w.left, w.right) == (cg, Partition.one(8), cg, Partition.zero(8))
    # the same values from the group side
    G = GroupTable(A)
    r2 = frozenset({e.element("e"), e.element("r2")})
    assert G.commutator(r2, range(8)) == frozenset({e.element("e")})
    assert r2 <= G.commutator(range(8), range(8))


def test_derived_congruences():
    assert derived_congruence(corpus_entry("s3").algebra) == \
        group_commutator_oracle(corpus_entry("s3").algebra, Partition.one(6), Partition.one(6))
    assert derived_congruence(corpus_entry("z6").algebra).is_zero()


@pytest.mark.parametrize("name", ["z4", "klein", "s3", "d4", "chain3", "m3", "z4mod"])
def test_abelian_congruences_permute(name):
    e = corpus_entry(name)
    assert abelian_permutation_witness(e.algebra, malcev=e.difference_term) is None


def test_facts_trivial_algebra():
    e = corpus_entry("trivial")
    out = check_fact_properties(e.algebra, malcev=e.difference_term)
    assert out and all(o.holds for o in out)


def test_fact_restriction_z4_subgroup():
    e = corpus_entry("z4")
    _, inc = make_subalgebra(e.algebra, {0, 2})
    out = check_fact_properties(e.algebra, subalgebra=inc, only={"restriction"},
                                malcev=e.difference_term)
    assert [(o.name, o.holds, o.checked) for o in out] == [("restriction", True, 9)]


def test_fact_center_of_product_z2_z3():
    A, B = corpus_entry("z2").algebra, corpus_entry("z3").algebra
    out = check_fact_properties(A, partner=B, only={"center-of-product"})
    assert out[0].holds
    P, _ = make_product([A, B])
    assert center(P).is_one()


@pytest.mark.parametrize("name", ["d4", "s3", "chain3", "klein"])
def test_all_facts(name):
    e = corpus_entry(name)
    A = e.algebra
    partner = corpus_entry("z2" if e.kind == "group" else "chain2").algebra
    S = next(s for s in all_subuniverses(A) if len(s) > 1)
    _, inc = make_subalgebra(A, S)
    for o in check_fact_properties(A, subalgebra=inc, partner=partner, malcev=e.difference_term):
        assert o.holds, (o.name, o.witness)


@given(st.sampled_from(GROUPS), st.data())
def test_commutator_monotone(name, data):
    e = corpus_entry(name)
    L = list(congruence_lattice(e.algebra))
    a, b, c = (data.draw(st.sampled_from(L)) for _ in range(3))
    comm = lambda x, y: commutator(e.algebra, x, y, malcev=e.difference_term)  # noqa: E731
    if a <= b:
        assert comm(a, c) <= comm(b, c)
    assert comm(a, c) <= (a & c)
    if comm(a, a).is_zero():
        assert is_abelian_congruence(e.algebra, a)
