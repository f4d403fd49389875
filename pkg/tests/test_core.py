import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, multivectors, polynomials
from nambu.core import (
    BracketStructure,
    conformal_check,
    flat,
    hamiltonian_vf,
    is_casimir,
    j_map_at,
    lie_bracket,
    lie_derivative_multivector,
    rank_form_at,
    rank_multivector_at,
    schouten_nijenhuis,
    sharp,
)
from nambu.exterior import DifferentialForm, MultiVectorField, VectorField, levi_civita_parity, wedge
from nambu.structures import darboux_multivector, random_multivector


def D(dim, *idx, coeff=1):
    return DifferentialForm.basis(dim, idx, coeff)


def M(dim, *idx, coeff=1):
    return MultiVectorField.basis(dim, idx, coeff)


def V(j, dim, coeff=1):
    return VectorField.coordinate(j, dim, P(coeff, dim) if isinstance(coeff, str) else coeff)


def leibniz_bracket(pi, fs):
    """Permutation-sum oracle for the n-bracket."""
    n = pi.degree
    out = P("0", pi.dim)
    for idx, c in pi.items():
        for perm in itertools.permutations(range(n)):
            term = c * P(str(levi_civita_parity([p + 1 for p in perm])), pi.dim)
            for a in range(n):
                term = term * fs[a].diff(idx[perm[a]])
            out = out + term
    return out


# bracket ------------------------------------------------------------------


def test_bracket_examples():
    s1 = BracketStructure(M(3, 1, 2, 3))
    x = s1.coordinates()
    assert s1.bracket(x) == P("1", 3)
    assert s1.bracket((x[0], x[0], x[1])).is_zero()
    s2 = BracketStructure(darboux_multivector(6, 3, 2))
    assert s2.bracket(s2.coordinates()[3:]) == P("1", 6)
    with pytest.raises(ValueError):
        s1.bracket(x[:2])


@settings(max_examples=40, deadline=None)
@given(multivectors(degree=3, max_degree=1), st.lists(polynomials(max_degree=2), min_size=3, max_size=3))
def test_bracket_matches_permutation_sum(pi, fs):
    assert BracketStructure(pi).bracket(fs) == leibniz_bracket(pi, fs)


@settings(max_examples=40, deadline=None)
@given(multivectors(degree=2), polynomials(), polynomials(), polynomials())
def test_bracket_antisymmetric_and_leibniz(pi, f, g, h):
    s = BracketStructure(pi)
    assert s.bracket((f, g)) == -s.bracket((g, f))
    assert s.bracket((f, g * h)) == g * s.bracket((f, h)) + h * s.bracket((f, g))


# sharp / hamiltonian / flat -----------------------------------------------


def test_sharp_examples():
    s = BracketStructure(M(3, 1, 2, 3))
    assert sharp(s, D(3, 1, 2)) == V(3, 3)
    assert sharp(s, D(3, 1, 3)) == -V(2, 3)
    s2 = BracketStructure(darboux_multivector(6, 3, 2))
    assert sharp(s2, D(6, 4, 5)) == V(6, 6)
    with pytest.raises(ValueError):
        sharp(s, D(3, 1))


def test_hamiltonian_examples():
    s = BracketStructure(M(3, 1, 2, 3))
    x1, x2, x3 = s.coordinates()
    assert hamiltonian_vf(s, (x1, x2)) == V(3, 3)
    assert hamiltonian_vf(s, (x1, x1)).is_zero()
    s2 = BracketStructure(M(3, 1, 2, 3, coeff=x1))
    assert hamiltonian_vf(s2, (x2, x3)) == V(1, 3, x1)
    with pytest.raises(ValueError):
        hamiltonian_vf(s, (x1,))


@settings(max_examples=40, deadline=None)
@given(multivectors(degree=3, max_degree=1), st.lists(polynomials(max_degree=2), min_size=3, max_size=3))
def test_hamiltonian_field_applies_as_bracket(pi, fs):
    s = BracketStructure(pi)
    assert hamiltonian_vf(s, fs[:2])(fs[2]) == s.bracket(fs)


def test_flat_examples():
    assert flat(D(3, 1, 2, 3), V(1, 3)) == D(3, 2, 3)
    assert flat(D(4, 1, 2, 3), V(4, 4)).is_zero()
    assert flat(D(2, 1, 2), V(2, 2, "x1")) == D(2, 1, coeff=P("-x1", 2))


# lie / schouten -----------------------------------------------------------


def test_lie_bracket_examples():
    assert lie_bracket(V(1, 4), V(2, 4)).is_zero()
    assert lie_bracket(V(1, 4), V(4, 4, "x1")) == V(4, 4)
    assert lie_bracket(V(1, 2, "x1"), V(2, 2, "x1")) == V(2, 2, "x1")


@settings(max_examples=30, deadline=None)
@given(st.lists(polynomials(max_degree=2), min_size=9, max_size=9))
def test_lie_bracket_jacobi(cs):
    x, y, z = VectorField(cs[:3]), VectorField(cs[3:6]), VectorField(cs[6:])
    total = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y))
    assert total.is_zero()
    assert lie_bracket(x, y) == -lie_bracket(y, x)


def test_schouten_examples():
    assert schouten_nijenhuis(V(1, 3), P("x1", 3)) == P("1", 3)
    pi = M(3, 1, 2, 3)
    assert schouten_nijenhuis(pi, pi).is_zero()
    # graded symmetry plus (X, B) = L_X B force the minus sign here
    assert schouten_nijenhuis(M(3, 1, 2), V(3, 3, "x1")) == -M(3, 2, 3)


def test_lie_derivative_examples():
    pi = M(3, 1, 2, 3)
    assert lie_derivative_multivector(V(1, 3), pi).is_zero()
    assert lie_derivative_multivector(V(1, 3, "x1"), pi) == -pi
    assert lie_derivative_multivector(V(1, 3), M(3, 1, 2, 3, coeff=P("x1", 3))) == pi


@pytest.mark.parametrize("i,j", list(itertools.product(range(1, 4), repeat=2)))
def test_schouten_normalization(i, j):
    assert schouten_nijenhuis(V(i, 3), P(f"x{j}", 3)) == P("1" if i == j else "0", 3)


def degree_of(a):
    return 0 if not isinstance(a, MultiVectorField) else a.degree


def graded_sym(a, b):
    p, q = degree_of(a), degree_of(b)
    rhs = schouten_nijenhuis(b, a)
    return schouten_nijenhuis(a, b) == (-rhs if (p - 1) * (q - 1) % 2 == 0 else rhs)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_schouten_graded_symmetry(p, q, data):
    a = data.draw(multivectors(degree=p, max_degree=2))
    b = data.draw(multivectors(degree=q, max_degree=2))
    assert graded_sym(a, b)


@settings(max_examples=30, deadline=None)
@given(st.lists(polynomials(max_degree=2), min_size=3, max_size=3), multivectors(degree=2, max_degree=2))
def test_schouten_with_vector_is_lie_derivative(cs, b):
    x = VectorField(cs)
    assert schouten_nijenhuis(x.as_multivector(), b) == lie_derivative_multivector(x, b)


@settings(max_examples=30, deadline=None)
@given(multivectors(degree=2, max_degree=1), multivectors(degree=1, max_degree=1), multivectors(degree=1, max_degree=1))
def test_schouten_graded_leibniz(a, b, c):
    # (A, B ^ C) = (A, B) ^ C + (-1)^((p-1) q) B ^ (A, C)
    p, q = a.degree, b.degree
    lhs = schouten_nijenhuis(a, wedge(b, c))
    right = wedge(b, schouten_nijenhuis(a, c))
    rhs = wedge(schouten_nijenhuis(a, b), c) + (right if (p - 1) * q % 2 == 0 else -right)
    assert lhs == rhs


@pytest.mark.parametrize("n,d,seed", [(3, 4, 0), (3, 5, 1), (5, 6, 2)])
def test_odd_degree_self_bracket_vanishes(n, d, seed):
    pi = random_multivector(d, n, 1, seed)
    assert schouten_nijenhuis(pi, pi).is_zero()


# ranks --------------------------------------------------------------------


def test_rank_multivector_examples():
    assert rank_multivector_at(BracketStructure(M(3, 1, 2, 3)), (5, 1, 2)).rank == 3
    assert rank_multivector_at(BracketStructure(darboux_multivector(6, 3, 2)), (1, 2, 3, 4, 5, 6)).rank == 6
    s = BracketStructure(M(3, 1, 2, 3, coeff=P("x1", 3)))
    assert rank_multivector_at(s, (0, 0, 0)).rank == 0
    assert rank_multivector_at(s, (1, 0, 0)).rank == 3


@pytest.mark.parametrize("d,n,r", [(6, 3, 2), (4, 2, 2), (8, 4, 2), (7, 3, 2)])
def test_darboux_rank_is_n_times_r(d, n, r):
    s = BracketStructure(darboux_multivector(d, n, r))
    for p in [(0,) * d, tuple(range(1, d + 1))]:
        assert rank_multivector_at(s, p).rank == n * r


def test_rank_form_examples():
    assert rank_form_at(D(3, 1, 2, 3), (0, 0, 0)).rank == 3
    rep = rank_form_at(D(4, 1, 2, 3), (0, 0, 0, 0))
    assert rep.rank == 3
    assert rep.basis == ((0, 0, 0, 1),)
    assert rank_form_at(DifferentialForm.zero(3, 2), (0, 0, 0)).rank == 0
    with pytest.raises(ValueError):
        rank_form_at(DifferentialForm.zero(3, 0), (0, 0, 0))


def test_j_map_examples():
    s = BracketStructure(M(3, 1, 2, 3))
    j, inv = j_map_at(s, D(3, 1, 2, 3), (0, 0, 0))
    assert inv and j == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    j, inv = j_map_at(s, DifferentialForm.zero(3, 3), (0, 0, 0))
    assert not inv and all(v == 0 for row in j for v in row)
    _, inv = j_map_at(BracketStructure(M(4, 1, 2, 3)), D(4, 1, 2, 3), (0, 0, 0, 0))
    assert not inv
    with pytest.raises(ValueError):
        j_map_at(s, D(3, 1, 2), (0, 0, 0))


def test_casimir_examples():
    assert is_casimir(BracketStructure(M(4, 1, 2, 3)), P("x4", 4))
    assert not is_casimir(BracketStructure(M(3, 1, 2, 3)), P("x1", 3))
    assert is_casimir(BracketStructure(darboux_multivector(6, 3, 2)), P("1", 6))


def test_conformal_examples():
    w3 = D(3, 1, 2, 3)
    assert conformal_check(w3, V(1, 3, "x1"), P("1", 3)).passed
    assert conformal_check(w3, V(1, 3), P("0", 3)).passed
    v = conformal_check(D(2, 1, 2), V(1, 2, "x1"), P("2", 2))
    assert not v.passed
    assert v.witness.residual == -D(2, 1, 2)
