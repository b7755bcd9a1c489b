import itertools

import numpy as np
import pytest
from hypothesis import given

from uawb.algebra import (FiniteAlgebra, Homomorphism, OperationTable, SignatureError, all_subuniverses,
                          decode, encode, find_isomorphism, is_homomorphism, is_subuniverse,
                          make_product, make_quotient, make_subalgebra, subalgebra_generated)
from uawb.corpus import builtin_corpus, corpus_algebra, corpus_entry
from uawb.partition import Partition

from conftest import small_algebras


def test_operation_table_shape_checked():
    with pytest.raises(ValueError):
        OperationTable("f", 2, np.zeros((2, 3), dtype=int))
    with pytest.raises(ValueError):
        OperationTable.from_flat("f", 2, 2, [0, 1, 1])


def test_algebra_rejects_out_of_range_and_duplicates():
    with pytest.raises(ValueError):
        FiniteAlgebra("x", 2, [OperationTable.from_flat("f", 1, 2, [0, 2])])
    with pytest.raises(SignatureError):
        FiniteAlgebra("x", 2, [OperationTable.from_flat("f", 1, 2, [0, 1])] * 2)


def test_product_is_coordinatewise():
    Z2, Z3 = corpus_algebra("z2"), corpus_algebra("z3")
    P, (p0, p1) = make_product([Z2, Z3])
    assert P.size == 6
    for u, v in itertools.product(range(6), repeat=2):
        a, b = decode((2, 3), u), decode((2, 3), v)
        w = P["mul"](u, v)
        assert decode((2, 3), w) == ((a[0] + b[0]) % 2, (a[1] + b[1]) % 3)
    assert encode((2, 3), (1, 2)) == 5
    assert is_homomorphism(p0) and is_homomorphism(p1)


def test_product_signature_mismatch():
    with pytest.raises(SignatureError):
        make_product([corpus_algebra("z2"), corpus_algebra("chain2")])


def test_quotient_of_z4():
    Z4 = corpus_algebra("z4")
    Q, nat = make_quotient(Z4, Partition.from_blocks(4, [[0, 2], [1, 3]]))
    assert Q.size == 2 and is_homomorphism(nat)
    assert find_isomorphism(Q, corpus_algebra("z2")) is not None


def test_subuniverses_of_z4_and_s3():
    assert all_subuniverses(corpus_algebra("z4")) == [frozenset({0}), frozenset({0, 2}),
                                                      frozenset(range(4))]
    # S3 has 1 + 3 + 1 + 1 subgroups
    assert len(all_subuniverses(corpus_algebra("s3"))) == 6


def test_subalgebra_relabels():
    B, inc = make_subalgebra(corpus_algebra("z4"), {0, 2})
    assert B.size == 2 and inc.map == (0, 2) and is_homomorphism(inc)
    with pytest.raises(ValueError):
        make_subalgebra(corpus_algebra("z4"), {0, 1})


@given(small_algebras())
def test_generated_subuniverse_is_least(A):
    # brute force over all subsets containing 0
    S = subalgebra_generated(A, [0])
    closed = [frozenset(c) for r in range(1, A.size + 1)
              for c in itertools.combinations(range(A.size), r)
              if 0 in c and is_subuniverse(A, c)]
    assert S in closed and all(S <= T for T in closed)


def test_isomorphism_search():
    V = corpus_algebra("klein")
    assert find_isomorphism(corpus_algebra("z4"), V) is None
    P, _ = make_product([corpus_algebra("z2"), corpus_algebra("z2")])
    h = find_isomorphism(P, V)
    assert h is not None and is_homomorphism(h) and h.is_injective()
    assert find_isomorphism(corpus_algebra("set3"), corpus_algebra("set3")) is not None


def test_homomorphism_witness_reports_failure():
    Z4 = corpus_algebra("z4")
    h = Homomorphism(Z4, Z4, (0, 2, 1, 3))
    assert not is_homomorphism(h)


@pytest.mark.parametrize("e", builtin_corpus(), ids=lambda e: e.name)
def test_corpus_groups_are_groups(e):
    if e.kind != "group":
        return
    A = e.algebra
    m, inv, one = A["mul"], A["inv"], A["e"]()
    n = A.size
    for a, b, c in itertools.product(range(n), repeat=3):
        assert m(m(a, b), c) == m(a, m(b, c))
    for a in range(n):
        assert m(a, inv(a)) == one == m(inv(a), a)


def test_corpus_labels():
    d4 = corpus_entry("d4")
    r, s = d4.element("r1"), d4.element("s")
    m = d4.algebra["mul"]
    assert m(m(r, r), m(r, r)) == d4.element("e")
    assert m(s, r) == m(d4.algebra["inv"](r), s)


def test_products_and_quotients_small_cases():
    from uawb.algebra import homomorphism_witness, identity_map
    Z2, Z3, Z4 = (corpus_algebra(n) for n in ("z2", "z3", "z4"))
    P, _ = make_product([Z2, Z3])
    assert find_isomorphism(P, corpus_algebra("z6")) is not None
    P1, _ = make_product([Z4])
    assert P1.same_tables(Z4)
    Q0, nat0 = make_quotient(Z4, Partition.zero(4))
    assert Q0.size == 4 and nat0.map == (0, 1, 2, 3)
    assert make_quotient(Z4, Partition.one(4))[0].size == 1
    assert subalgebra_generated(Z4, [2]) == frozenset({0, 2})
    assert subalgebra_generated(Z4, range(4)) == frozenset(range(4))
    assert is_homomorphism(identity_map(Z4))
    assert is_homomorphism(Homomorphism(Z4, Z2, (0, 1, 0, 1)))
    shift = Homomorphism(Z4, Z4, (1, 2, 3, 0))
    assert homomorphism_witness(shift) == ("e", ())
