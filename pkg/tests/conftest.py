from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from nestcan.funcspace import MvFunction, ProductDomain

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


def table(ks, values):
    return MvFunction.from_table(ks, values)


@pytest.fixture
def AND():
    return table((2, 2), [0, 0, 0, 1])


@pytest.fixture
def XOR():
    return table((2, 2), [0, 1, 1, 0])


@pytest.fixture
def min3():
    return MvFunction.from_callable(ProductDomain.full((3, 3)), min)


@pytest.fixture
def max3():
    return MvFunction.from_callable(ProductDomain.full((3, 3)), max)


@pytest.fixture
def f_ci():
    return table((2, 3), [1, 0, 0, 1, 0, 0])


@pytest.fixture
def f1_cro():
    return table((2, 3), [2, 2, 1, 0, 0, 0])


@pytest.fixture
def f2_cro():
    return table((2, 3), [2, 2, 1, 0, 0, 1])


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def functions(draw, max_n=3, max_k=3, values=None, min_k=1):
    n = draw(st.integers(1, max_n))
    ks = tuple(draw(st.lists(st.integers(min_k, max_k), min_size=n, max_size=n)))
    dom = ProductDomain.full(ks)
    vals = draw(st.lists(values if values is not None else rationals, min_size=dom.size, max_size=dom.size))
    return MvFunction(dom, tuple(Fraction(v) for v in vals))


small_ints = st.integers(0, 2)
