import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, forms, multivectors, polynomials
from nambu.exterior import (
    DifferentialForm,
    MultiVectorField,
    VectorField,
    check_schouten_identity,
    exterior_derivative,
    homotopy,
    interior_form,
    interior_vector,
    levi_civita,
    levi_civita_parity,
    lie_derivative_form,
    pairing,
    shuffle_sign,
    sorted_sign,
    wedge,
    wedge_all,
)


def brute_parity(perm):
    inv = sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


@pytest.mark.parametrize("k", range(1, 6))
def test_parity_matches_inversion_count(k):
    for perm in itertools.permutations(range(1, k + 1)):
        assert levi_civita_parity(perm) == brute_parity(perm)


def test_parity_examples():
    assert levi_civita_parity((4, 3, 1, 2)) == -1
    assert levi_civita_parity((3, 4, 1, 2)) == 1
    assert levi_civita((2, 1, 3)) == -1
    assert levi_civita((1, 1, 3)) == 0
    with pytest.raises(ValueError):
        levi_civita_parity((1, 1, 2))


def test_sorted_sign_and_shuffle():
    assert sorted_sign((3, 1, 2)) == ((1, 2, 3), 1)
    assert sorted_sign((2, 2)) is None
    assert shuffle_sign((2,), (1, 3)) == -1
    with pytest.raises(IndexError):
        sorted_sign((0, 1))


def test_storage_normalizes_order():
    a = MultiVectorField(3, 2, {(2, 1): 1})
    assert a.coefficient((1, 2)) == P("-1", 3)
    assert a.coefficient((2, 1)) == P("1", 3)
    assert MultiVectorField(3, 2, {(1, 1): 5}).is_zero()


def test_wedge_examples():
    d1 = DifferentialForm.basis(3, (1,))
    d2 = DifferentialForm.basis(3, (2,))
    assert wedge(d1, d2) == -wedge(d2, d1)
    assert wedge(d1, d1).is_zero()
    top = wedge_all([d1, d2, DifferentialForm.basis(3, (3,))])
    assert top == DifferentialForm.basis(3, (1, 2, 3))


def test_exterior_derivative_example():
    # d(x1 x2 dx3) = x2 dx1^dx3 + x1 dx2^dx3
    a = DifferentialForm(3, 1, {(3,): P("x1*x2", 3)})
    assert exterior_derivative(a) == DifferentialForm(3, 2, {(1, 3): P("x2", 3), (2, 3): P("x1", 3)})


def test_interior_examples():
    w = DifferentialForm.basis(3, (1, 2))
    assert interior_vector(VectorField.coordinate(2, 3), w) == -DifferentialForm.basis(3, (1,))
    pi = MultiVectorField.basis(3, (1, 2, 3))
    assert interior_form(DifferentialForm.basis(3, (2,)), pi) == -MultiVectorField.basis(3, (1, 3))
    with pytest.raises(ValueError):
        interior_form(DifferentialForm.basis(3, (1, 2)), MultiVectorField.basis(3, (1,)))


def test_pairing_degree_mismatch():
    with pytest.raises(ValueError):
        pairing(DifferentialForm.basis(3, (1,)), MultiVectorField.basis(3, (1, 2)))


@settings(max_examples=40, deadline=None)
@given(forms(degree=1), forms(degree=1), forms(degree=1))
def test_wedge_associative_and_graded(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    assert wedge(a, b) == -wedge(b, a)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2).flatmap(lambda k: forms(degree=k) if k else forms(degree=1)))
def test_d_squared_is_zero(a):
    assert exterior_derivative(exterior_derivative(a)).is_zero()


@settings(max_examples=40, deadline=None)
@given(forms(degree=1), forms(degree=1))
def test_d_graded_leibniz(a, b):
    lhs = exterior_derivative(wedge(a, b))
    rhs = wedge(exterior_derivative(a), b) - wedge(a, exterior_derivative(b))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(forms(dim=3, degree=2, max_degree=2))
def test_homotopy_formula(a):
    assert homotopy(exterior_derivative(a)) + exterior_derivative(homotopy(a)) == a


@settings(max_examples=40, deadline=None)
@given(polynomials(max_degree=3))
def test_homotopy_of_exact_one_form(f):
    origin = (0, 0, 0)
    h = homotopy(DifferentialForm.differential(f)).scalar()
    assert h == f - P(str(f.eval(origin)), 3)


@settings(max_examples=40, deadline=None)
@given(forms(degree=2), multivectors(degree=2))
def test_pairing_is_elementwise(a, m):
    expect = P("0", 3)
    for idx in itertools.combinations(range(1, 4), 2):
        expect = expect + a.coefficient(idx) * m.coefficient(idx)
    assert pairing(a, m) == expect


@settings(max_examples=30, deadline=None)
@given(forms(degree=1))
def test_coordinate_contraction_picks_component(a):
    for j in range(1, 4):
        x = VectorField.coordinate(j, 3)
        assert interior_vector(x, a).scalar() == a.coefficient((j,))


@settings(max_examples=30, deadline=None)
@given(forms(degree=2, max_degree=1), polynomials(max_degree=1), polynomials(max_degree=1))
def test_cartan_formula_matches_coordinate_lie_derivative(w, p, q):
    x = VectorField([p, q, P("1", 3)])
    # coordinate formula for a 2-form: (L_X w)_{ij} = X[w_ij] + sum_k w_kj d_i X^k + w_ik d_j X^k
    expect = {}
    for i, j in itertools.combinations(range(1, 4), 2):
        c = x(w.coefficient((i, j)))
        for k in range(1, 4):
            c = c + w.coefficient((k, j)) * x[k].diff(i) + w.coefficient((i, k)) * x[k].diff(j)
        expect[(i, j)] = c
    assert lie_derivative_form(x, w) == DifferentialForm(3, 2, expect)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_schouten_identity(n):
    checked, failures = check_schouten_identity(n)
    assert checked == n ** (2 * n)
    assert failures == []
