import re

from uawb.algebra import FiniteAlgebra, OperationTable
from uawb.congruence import congruence_lattice
from uawb.corpus import corpus_algebra
from uawb.dot import export_dot, ranks


def counts(text):
    nodes = re.findall(r"^\s*n\d+ \[label=", text, re.M)
    edges = re.findall(r"^\s*n\d+ -> n\d+;", text, re.M)
    return len(nodes), len(edges)


def test_one_element_lattice():
    A = FiniteAlgebra("one", 1, [OperationTable.from_flat("c", 0, 1, [0])])
    assert counts(export_dot(congruence_lattice(A))) == (1, 0)


def test_z4_is_a_path():
    L = congruence_lattice(corpus_algebra("z4"))
    assert counts(export_dot(L)) == (3, 2)
    assert sorted(ranks(L)) == [0, 1, 2]


def test_klein_is_m3():
    L = congruence_lattice(corpus_algebra("klein"))
    text = export_dot(L)
    assert counts(text) == (5, 6)
    assert "rankdir=BT" in text
    assert sorted(ranks(L)) == [0, 1, 1, 1, 2]


def test_labels_are_blocks():
    text = export_dot(congruence_lattice(corpus_algebra("z4")))
    assert 'label="0,2|1,3"' in text
