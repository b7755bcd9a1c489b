import pytest
from hypothesis import given

from uawb.corpus import builtin_corpus, corpus_algebra
from uawb.io import AlgebraFormatError, parse_algebra, print_algebra, read_algebra, write_algebra

from conftest import small_algebras


def test_trivial_algebra_round_trip():
    text = "algebra one\nsize 1\nop c 0\n0\nend\n"
    A = parse_algebra(text)
    assert A.size == 1 and A.signature == (("c", 0),)
    assert print_algebra(A) == text


def test_z4_module_file():
    A = parse_algebra(print_algebra(corpus_algebra("z4mod")))
    assert A.size == 4
    assert A.signature == (("+", 2), ("-", 1), ("0", 0))
    assert all(A["+"](a, b) == (a + b) % 4 for a in range(4) for b in range(4))
    assert [A["-"](a) for a in range(4)] == [0, 3, 2, 1]


@pytest.mark.parametrize("e", builtin_corpus(), ids=lambda e: e.name)
def test_corpus_round_trip(e, tmp_path):
    text = print_algebra(e.algebra)
    assert print_algebra(parse_algebra(text)) == text
    path = tmp_path / f"{e.name}.alg"
    write_algebra(e.algebra, path)
    assert read_algebra(path).same_tables(e.algebra)


@given(small_algebras())
def test_random_round_trip(A):
    B = parse_algebra(print_algebra(A))
    assert B.same_tables(A) and B.name == A.name


def test_entry_out_of_range_names_line():
    text = "algebra bad\nsize 4\nop f 1\n0 1\n7 3\nend\n"
    with pytest.raises(AlgebraFormatError) as err:
        parse_algebra(text)
    assert err.value.line == 5 and err.value.column == 1
    assert "out of range" in str(err.value)


@pytest.mark.parametrize("text, line", [
    ("algebra x\nsize 2\nop f 2\n0 1\n1\nend\n", 6),        # short table
    ("algebra x\nsize 2\nop f 1\n0 1 1\nend\n", 4),         # long table
    ("algebra x\nsize 2\nop f 1\n0 1\nop f 1\n0 1\nend\n", 5),  # duplicate op
    ("algebra x\nsize two\nend\n", 2),
    ("algebra x\nsize 2\nop f 1\n0 1\nend\nextra\n", 6),
    ("algebra x\nsize 2\nop f 1\n0 a\nend\n", 4),
])
def test_format_errors(text, line):
    with pytest.raises(AlgebraFormatError) as err:
        parse_algebra(text)
    assert err.value.line == line


def test_comments_are_ignored():
    A = parse_algebra("# Z2\nalgebra z2\nsize 2  # two elements\nop m 2\n0 1\n1 0\nend\n")
    assert A["m"](1, 1) == 0
