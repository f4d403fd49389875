import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from nambu.core import BracketStructure
from nambu.exterior import DifferentialForm, MultiVectorField
from nambu.poly import Polynomial

small_rationals = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


@st.composite
def polynomials(draw, dim=3, max_degree=2, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = tuple(draw(st.lists(st.integers(0, max_degree), min_size=dim, max_size=dim)))
        if sum(exps) > max_degree:
            continue
        terms[exps] = draw(small_rationals)
    return Polynomial(dim, terms)


@st.composite
def points(draw, dim=3):
    return tuple(draw(st.lists(small_rationals, min_size=dim, max_size=dim)))


@st.composite
def forms(draw, dim=3, degree=1, max_degree=2):
    from itertools import combinations

    coeffs = {}
    for idx in combinations(range(1, dim + 1), degree):
        if draw(st.booleans()):
            coeffs[idx] = draw(polynomials(dim, max_degree, 3))
    return DifferentialForm(dim, degree, coeffs)


@st.composite
def multivectors(draw, dim=3, degree=2, max_degree=1):
    from itertools import combinations

    coeffs = {}
    for idx in combinations(range(1, dim + 1), degree):
        if draw(st.booleans()):
            coeffs[idx] = draw(polynomials(dim, max_degree, 3))
    return MultiVectorField(dim, degree, coeffs)


def mv(dim, degree, terms):
    """Multivector from ``{indices: coefficient string or number}``."""
    return MultiVectorField(dim, degree, {
        k: Polynomial.parse(v, dim) if isinstance(v, str) else v for k, v in terms.items()
    })


def P(text, dim):
    return Polynomial.parse(text, dim)


@pytest.fixture
def darboux_r2():
    return BracketStructure(mv(6, 3, {(1, 2, 3): 1, (4, 5, 6): 1}))


@pytest.fixture
def darboux_r1():
    return BracketStructure(mv(3, 3, {(1, 2, 3): 1}))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
