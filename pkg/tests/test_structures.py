import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P
from nambu.core import BracketStructure, rank_multivector_at
from nambu.exterior import MultiVectorField, VectorField, wedge_all
from nambu.identities import check_fahi, check_fai, check_fi, gapi_weights_to_fai_weights, WeightsMu
from nambu.linalg import det
from nambu.poly import variables
from nambu.structures import (
    MU_RELATIONS_N3,
    CoordinateChange,
    NotDecomposable,
    cartesian_product,
    combing_residuals,
    darboux_multivector,
    decompose_at,
    decomposability_report,
    derived_mu_relations,
    det_bracket,
    is_combed_at,
    mu_constraint_kernel,
    mu_system,
    plucker_decomposable_at,
    pre_comb_at,
    random_decomposable,
    random_multivector,
    random_point,
    weinstein_split,
)


def S(pi):
    return BracketStructure(pi)


def M(dim, *idx, coeff=1):
    return MultiVectorField.basis(dim, idx, coeff)


def e(j, d, c=1):
    return VectorField.coordinate(j, d, c)


def test_darboux_examples():
    assert darboux_multivector(3, 3, 1) == M(3, 1, 2, 3)
    assert darboux_multivector(6, 3, 2) == M(6, 1, 2, 3) + M(6, 4, 5, 6)
    assert darboux_multivector(5, 3, 0).is_zero()
    with pytest.raises(ValueError):
        darboux_multivector(5, 3, 2)


def test_weinstein_examples():
    assert weinstein_split(4, 3, 1, MultiVectorField.zero(4, 3)) == M(4, 1, 2, 3)
    x = variables(7)
    pi = weinstein_split(7, 3, 1, MultiVectorField(7, 3, {(5, 6, 7): x[3]}))
    assert pi == M(7, 1, 2, 3) + M(7, 5, 6, 7, coeff=x[3])
    with pytest.raises(ValueError):
        weinstein_split(6, 3, 1, M(6, 4, 5, 6))
    with pytest.raises(ValueError):
        weinstein_split(7, 3, 1, MultiVectorField(7, 3, {(5, 6, 7): x[0]}))
    with pytest.raises(ValueError):
        weinstein_split(7, 3, 1, M(7, 3, 6, 7, coeff=x[3]))


def test_cartesian_product_examples():
    d3 = S(M(3, 1, 2, 3))
    prod = cartesian_product(d3, d3)
    assert prod.pi == darboux_multivector(6, 3, 2)
    assert cartesian_product(d3, S(MultiVectorField.zero(2, 3))).pi == M(5, 1, 2, 3)
    with pytest.raises(ValueError):
        cartesian_product(d3, S(M(2, 1, 2)))
    # coefficients of the second factor move to the shifted variables
    x = variables(3)
    shifted = cartesian_product(d3, S(M(3, 1, 2, 3, coeff=x[0]))).pi
    assert shifted == darboux_multivector(6, 3, 1) + M(6, 4, 5, 6, coeff=variables(6)[3])


def test_det_bracket_examples():
    x = variables(4)
    assert det_bracket([e(1, 3), e(2, 3), e(3, 3)]) == M(3, 1, 2, 3)
    assert det_bracket([e(1, 3, variables(3)[0]), e(2, 3), e(3, 3)]) == M(3, 1, 2, 3, coeff=variables(3)[0])
    pi = det_bracket([e(1, 4), e(2, 4), e(3, 4) + e(4, 4, x[0])])
    assert pi == M(4, 1, 2, 3) + M(4, 1, 2, 4, coeff=x[0])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_det_bracket_is_determinant_of_derivatives(seed):
    rng = random.Random(seed)
    _, fields = random_decomposable(4, 3, 1, seed)
    s = S(det_bracket(fields))
    fs = [P(f"x{rng.randint(1, 4)}*x{rng.randint(1, 4)} + x{rng.randint(1, 4)}", 4) for _ in range(3)]
    p = random_point(rng, 4)
    matrix = [[fields[i](fs[j]).eval(p) for j in range(3)] for i in range(3)]
    assert s.bracket(fs).eval(p) == det(matrix)


def test_plucker_examples():
    assert plucker_decomposable_at(S(M(3, 1, 2, 3)), (4, 5, 6))
    assert not plucker_decomposable_at(S(darboux_multivector(6, 3, 2)), (1, 2, 3, 4, 5, 6))
    assert plucker_decomposable_at(S(M(3, 1, 2, 3, coeff=variables(3)[0])), (0, 0, 0))


def test_plucker_bivectors():
    assert plucker_decomposable_at(S(M(4, 1, 2)), (0,) * 4)
    assert not plucker_decomposable_at(S(darboux_multivector(4, 2, 2)), (0,) * 4)


def test_random_decomposable_passes_plucker():
    pi, _ = random_decomposable(5, 3, 1, 7)
    rng = random.Random(0)
    for _ in range(5):
        assert plucker_decomposable_at(S(pi), random_point(rng, 5))
    pi, _ = random_decomposable(3, 3, 2, 0)
    assert plucker_decomposable_at(S(pi), (1, 1, 1))


def test_generic_constant_trivector_not_decomposable():
    assert not plucker_decomposable_at(S(random_multivector(6, 3, 0, 1)), (0,) * 6)


def test_decomposability_report_agrees():
    for pi in (darboux_multivector(6, 3, 2), darboux_multivector(4, 3, 1), random_decomposable(5, 3, 0, 3)[0]):
        rep = decomposability_report(S(pi), (0,) * pi.dim)
        assert len(set(rep.values())) == 1


def test_decompose_examples():
    pi = M(4, 1, 2, 3) + M(4, 1, 2, 4)
    fs = decompose_at(S(pi), (0,) * 4)
    assert wedge_all(fs) == pi
    assert det_bracket(fs) == pi
    with pytest.raises(NotDecomposable):
        decompose_at(S(darboux_multivector(6, 3, 2)), (0,) * 6)
    x = variables(3)
    s = S(M(3, 1, 2, 3, coeff=x[0]))
    fs = decompose_at(s, (1, 0, 0))
    assert det_bracket(fs) == M(3, 1, 2, 3)
    with pytest.raises(ValueError):
        decompose_at(s, (0, 0, 0))


@pytest.mark.parametrize("seed", range(15))
def test_decomposition_roundtrip(seed):
    d, n = (5, 3) if seed % 2 else (6, 4)
    pi, _ = random_decomposable(d, n, 1, seed)
    p = random_point(random.Random(seed), d)
    s = S(pi)
    if s.pi.frozen_at(p).is_zero():
        pytest.skip("vanishes at the sampled point")
    assert det_bracket(decompose_at(s, p)) == pi.frozen_at(p)


def test_coordinate_change_basics():
    a = CoordinateChange(((2, 0), (1, 1)), (1, 0))
    assert a.map_point((1, 1)) == (3, 2)
    b = CoordinateChange.identity(2)
    assert b.is_identity() and a.then(b) == a
    u1, u2 = a.new_coordinates()
    assert u1 == P("2*x1 + 1", 2) and u2 == P("x1 + x2", 2)
    # substituting back recovers the coordinate functions
    assert a.transform_function(u1) == P("x1", 2)
    with pytest.raises(ValueError):
        CoordinateChange(((1, 1), (1, 1)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_transform_preserves_brackets(seed):
    # pushforward of pi applied to transformed functions gives the transformed bracket
    rng = random.Random(seed)
    pi = random_multivector(4, 2, 1, seed)
    while True:
        m = tuple(tuple(Fraction(rng.randint(-2, 2)) for _ in range(4)) for _ in range(4))
        if det(m):
            break
    c = CoordinateChange(m, tuple(rng.randint(-2, 2) for _ in range(4)))
    s, t = S(pi), S(c.transform_multivector(pi))
    fs = [P(f"x{rng.randint(1, 4)}*x{rng.randint(1, 4)}", 4), P(f"x{rng.randint(1, 4)}", 4)]
    assert t.bracket([c.transform_function(f) for f in fs]) == c.transform_function(s.bracket(fs))


def test_pre_comb_examples():
    s = S(M(4, 1, 2, 3))
    assert pre_comb_at(s, (0,) * 4).is_identity()
    s = S(M(4, 1, 2, 3) + M(4, 1, 2, 4))
    c = pre_comb_at(s, (0,) * 4)
    assert not c.is_identity() and is_combed_at(s, (0,) * 4, c)
    assert c.new_coordinates()[3] == P("x4 - x3", 4)
    s = S(M(3, 1, 2, 3, coeff=2))
    c = pre_comb_at(s, (0, 0, 0))
    assert is_combed_at(s, (0, 0, 0), c)
    assert combing_residuals(s, (0, 0, 0), CoordinateChange.identity(3))["top"] == 2
    with pytest.raises(ValueError):
        pre_comb_at(S(MultiVectorField.zero(3, 3)), (0, 0, 0))


@pytest.mark.parametrize("seed", range(10))
def test_pre_comb_random(seed):
    d = 4 + seed % 3
    s = S(random_multivector(d, 3, 1, seed))
    p = random_point(random.Random(seed), d)
    assert is_combed_at(s, p, pre_comb_at(s, p))


def test_mu_kernel_examples():
    system, dim, basis = mu_constraint_kernel(3)
    assert len(system.unknowns) == 10 and len(system.equations) == 15
    assert dim == 0 and basis == []
    _, dim1, _ = mu_constraint_kernel(3, blocks=[1])
    assert dim1 == 7
    with pytest.raises(ValueError):
        mu_constraint_kernel(4)


def test_tabulated_relations_equal_derived():
    derived = derived_mu_relations(3)
    for k, rels in MU_RELATIONS_N3.items():
        assert set(rels) == set(derived[k])


def test_derived_kernel_for_larger_n():
    assert mu_system(4, derived=True).kernel() == []


def test_kernel_vectors_are_degenerate():
    # kernel of the k = 1 block: every such mu rewrites to degenerate weights once slot 1 is removed
    system = mu_system(3, blocks=[1])
    for vec in system.kernel():
        table = {frozenset(i - 1 for i in u): v for u, v in zip(system.unknowns, vec) if 1 not in u}
        _, degenerate = gapi_weights_to_fai_weights(WeightsMu(3, "gapi", table, 2))
        assert degenerate


def test_random_generators_are_deterministic():
    assert random_multivector(5, 3, 1, 4) == random_multivector(5, 3, 1, 4)
    assert random_decomposable(5, 3, 1, 4)[0] == random_decomposable(5, 3, 1, 4)[0]
    with pytest.raises(ValueError):
        random_multivector(2, 3, 0, 0)
    with pytest.raises(ValueError):
        random_decomposable(2, 3, 0, 0)


def test_decomposable_structures_pass_fai_pointwise():
    rng = random.Random(1)
    for seed in range(3):
        s = S(random_decomposable(5, 3, 1, seed)[0])
        for _ in range(2):
            frozen = s.frozen_at(random_point(rng, 5))
            assert check_fai(frozen).passed and check_fahi(frozen).passed


@pytest.mark.parametrize("r,d", [(2, 6), (2, 7), (3, 9)])
def test_darboux_blocks_fail_fai_pass_fahi(r, d):
    s = S(darboux_multivector(d, 3, r))
    assert check_fahi(s).passed
    v = check_fai(s)
    assert not v.passed and not v.witness.residual.is_zero()


def test_involutive_factors_pass_fi():
    assert check_fi(S(det_bracket([e(1, 3, variables(3)[0]), e(2, 3), e(3, 3)]))).passed
    x = variables(4)
    assert not check_fi(S(det_bracket([e(1, 4), e(2, 4), e(3, 4) + e(4, 4, x[0])]))).passed


def test_darboux_rank_is_full_on_blocks():
    s = S(darboux_multivector(7, 3, 2))
    assert rank_multivector_at(s, (0,) * 7).rank == 6
