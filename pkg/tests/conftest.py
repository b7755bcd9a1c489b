import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from uawb.algebra import FiniteAlgebra, OperationTable
from uawb.corpus import corpus_entry

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def small_algebras(draw, max_size=4, max_binary=1, max_unary=1):
    """Random algebras with a few unary and binary operations."""
    n = draw(st.integers(1, max_size))
    ops = []
    for i in range(draw(st.integers(0, max_unary))):
        vals = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
        ops.append(OperationTable.from_flat(f"u{i}", 1, n, vals))
    for i in range(draw(st.integers(0 if ops else 1, max_binary))):
        vals = draw(st.lists(st.integers(0, n - 1), min_size=n * n, max_size=n * n))
        ops.append(OperationTable.from_flat(f"b{i}", 2, n, vals))
    return FiniteAlgebra(f"rand{n}", n, ops)


@st.composite
def partitions(draw, n):
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    from uawb.partition import Partition
    return Partition.from_labels(labels)


@pytest.fixture
def entry():
    return corpus_entry


def group_of(name):
    e = corpus_entry(name)
    return e.algebra, e.difference_term


def rng():
    return np.random.default_rng(0)


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
