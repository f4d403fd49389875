"""Constructors and pointwise structure theory for multivector fields."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .core import BracketStructure, rank_multivector_at
from .exterior import (
    DifferentialForm,
    MultiVectorField,
    VectorField,
    interior_form,
    wedge,
    wedge_all,
)
from .poly import Polynomial, as_rational, variables


class NotDecomposable(ValueError):
    """The multivector is not a wedge of vectors at the requested point."""


def _point(p: Sequence, dim: int) -> Tuple[Fraction, ...]:
    pt = tuple(as_rational(v) for v in p)
    if len(pt) != dim:
        raise ValueError(f"point has {len(pt)} coordinates, expected {dim}")
    return pt


# Constructors


def darboux_multivector(d: int, n: int, r: int) -> MultiVectorField:
    """``sum_{m=1}^r d_{(m-1)n+1} ^ .. ^ d_{mn}`` in dimension ``d``."""
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    if n * r > d:
        raise ValueError(f"{r} blocks of degree {n} do not fit in dimension {d}")
    return MultiVectorField(d, n, {tuple(range(m * n + 1, m * n + n + 1)): 1 for m in range(r)})


def weinstein_split(d: int, n: int, r: int, tail: MultiVectorField,
                    base_point: Sequence | None = None) -> MultiVectorField:
    """Darboux block on the first ``n r`` coordinates plus a tail in the rest.

    The tail must involve neither the block coordinates nor their directions,
    and must have rank 0 at the base point (the origin by default).
    """
    block = darboux_multivector(d, n, r)
    if tail.dim != d or tail.degree != n:
        raise ValueError(f"tail must be a degree-{n} multivector in dimension {d}")
    cut = n * r
    used = tail.variables()
    if any(i <= cut for i in used):
        raise ValueError(f"tail depends on block coordinates {sorted(i for i in used if i <= cut)}")
    for idx, _ in tail.items():
        if any(i <= cut for i in idx):
            raise ValueError(f"tail term {idx} points along block directions")
    base = _point(base_point, d) if base_point is not None else (Fraction(0),) * d
    rank = rank_multivector_at(BracketStructure(tail), base).rank
    if rank != 0:
        raise ValueError(f"tail has rank {rank} at the base point")
    return block + tail


def _shift(pi: MultiVectorField, offset: int, dim: int) -> MultiVectorField:
    images = [Polynomial.variable(i + offset, dim) for i in range(1, pi.dim + 1)]
    return MultiVectorField(dim, pi.degree, {
        tuple(i + offset for i in idx): c.compose(images) for idx, c in pi.items()
    })


def cartesian_product(s1: BracketStructure, s2: BracketStructure) -> BracketStructure:
    """Sum of the two multivectors on the product space, second one shifted by ``d1``."""
    if s1.n != s2.n:
        raise ValueError(f"degree mismatch: {s1.n} vs {s2.n}")
    dim = s1.dim + s2.dim
    return BracketStructure(_shift(s1.pi, 0, dim) + _shift(s2.pi, s1.dim, dim))


def det_bracket(fields: Sequence[VectorField]) -> MultiVectorField:
    """``X_1 ^ .. ^ X_n``; its bracket is ``det(X_i[f_j])``."""
    if not fields:
        raise ValueError("need at least one vector field")
    dims = {x.dim for x in fields}
    if len(dims) != 1:
        raise ValueError("vector fields live in different dimensions")
    return wedge_all([x.as_multivector() for x in fields], kind=MultiVectorField)


# Decomposability


def _frozen(s: BracketStructure, p: Sequence) -> MultiVectorField:
    return s.pi.frozen_at(_point(p, s.dim))


def plucker_relations_hold(pi: MultiVectorField) -> bool:
    """``(i_xi pi) ^ pi = 0`` for every basis ``(n-1)``-covector ``xi``."""
    n, dim = pi.degree, pi.dim
    if pi.is_zero() or n <= 1 or n >= dim - 1:
        return True
    for j in itertools.combinations(range(1, dim + 1), n - 1):
        contracted = interior_form(DifferentialForm.basis(dim, j), pi)
        if contracted.is_zero():
            continue
        if not wedge(contracted, pi).is_zero():
            return False
    return True


def pairwise_contractions_vanish(pi: MultiVectorField) -> bool:
    """``(i_{dx^a} pi) ^ (i_{dx^b} pi) = 0`` for all ``a <= b``."""
    dim = pi.dim
    contr = [interior_form(DifferentialForm.basis(dim, (a,)), pi) for a in range(1, dim + 1)]
    return all(wedge(contr[a], contr[b]).is_zero() for a in range(dim) for b in range(a, dim))


def plucker_decomposable_at(s: BracketStructure, p: Sequence) -> bool:
    """Whether ``pi(p)`` is a wedge of ``n`` vectors; the zero multivector counts.

    For odd ``n >= 3`` the pairwise contraction test is evaluated as well and
    must agree.
    """
    pi = _frozen(s, p)
    verdict = plucker_relations_hold(pi)
    if s.n >= 3 and s.n % 2 == 1:
        other = pairwise_contractions_vanish(pi)
        if other != verdict:
            raise AssertionError("decomposability tests disagree")
    return verdict


def decomposability_report(s: BracketStructure, p: Sequence, with_fai: bool = True) -> Dict[str, bool]:
    """All pointwise decomposability tests side by side (the FAI one is slowest)."""
    from .identities import check_fai

    pi = _frozen(s, p)
    report = {"plucker": plucker_relations_hold(pi), "pairwise": pairwise_contractions_vanish(pi)}
    if with_fai and s.n >= 2:
        report["fai"] = check_fai(BracketStructure(pi)).passed
    return report


def decompose_at(s: BracketStructure, p: Sequence) -> List[VectorField]:
    """Constant vectors ``X_1..X_n`` with ``X_1 ^ .. ^ X_n = pi(p)``.

    Uses the lexicographically first multi-index ``I0`` with nonzero
    coefficient ``c``; the contractions by ``dx^{I0 - i_a}`` wedge to
    ``c^(n-1) pi(p)`` when ``pi(p)`` is decomposable, and the last factor is
    divided by ``c^(n-1)``.
    """
    pi = _frozen(s, p)
    if pi.is_zero():
        raise ValueError("the multivector vanishes at this point")
    n, dim = pi.degree, pi.dim
    i0, c0 = pi.items()[0]
    c0 = c0.constant_term()
    factors = []
    for a in range(n):
        rest = i0[:a] + i0[a + 1:]
        v = interior_form(DifferentialForm.basis(dim, rest), pi).as_vector_field()
        factors.append(v * (1 if (n - 1 - a) % 2 == 0 else -1))
    factors[-1] = factors[-1] * (Fraction(1) / c0 ** (n - 1))
    if det_bracket(factors) != pi:
        raise NotDecomposable("pi is not decomposable at (" + ", ".join(map(str, _point(p, dim))) + ")")
    return factors


# Coordinate changes


@dataclass(frozen=True)
class CoordinateChange:
    """Affine change ``u = A x + b`` of the coordinates.

    ``A`` must be invertible.  Functions and multivectors are carried over by
    exact substitution ``x = A^{-1}(u - b)``.
    """

    matrix: Tuple[Tuple[Fraction, ...], ...]
    shift: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        m = tuple(tuple(as_rational(v) for v in row) for row in self.matrix)
        d = len(m)
        if any(len(row) != d for row in m):
            raise ValueError("matrix must be square")
        if linalg.det(m) == 0:
            raise ValueError("coordinate change matrix is singular")
        shift = tuple(as_rational(v) for v in self.shift) or (Fraction(0),) * d
        if len(shift) != d:
            raise ValueError("shift length does not match the dimension")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "shift", shift)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, dim: int) -> "CoordinateChange":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)))

    def then(self, other: "CoordinateChange") -> "CoordinateChange":
        """Apply ``self`` first, then ``other``."""
        m = linalg.matmul(other.matrix, self.matrix)
        b = [sum(other.matrix[i][j] * self.shift[j] for j in range(self.dim)) + other.shift[i]
             for i in range(self.dim)]
        return CoordinateChange(tuple(map(tuple, m)), tuple(b))

    def is_identity(self) -> bool:
        return self == CoordinateChange.identity(self.dim)

    def map_point(self, p: Sequence) -> Tuple[Fraction, ...]:
        pt = _point(p, self.dim)
        return tuple(sum(a * x for a, x in zip(row, pt)) + b for row, b in zip(self.matrix, self.shift))

    def new_coordinates(self) -> Tuple[Polynomial, ...]:
        """``u_k`` as polynomials in the old coordinates."""
        xs = variables(self.dim)
        out = []
        for row, b in zip(self.matrix, self.shift):
            u = Polynomial.constant(b, self.dim)
            for a, x in zip(row, xs):
                if a:
                    u = u + x.scale(a)
            out.append(u)
        return tuple(out)

    def _old_in_new(self) -> List[Polynomial]:
        inv = linalg.inverse(self.matrix)
        us = variables(self.dim)
        shifted = [u - b for u, b in zip(us, self.shift)]
        out = []
        for row in inv:
            x = Polynomial.zero(self.dim)
            for a, u in zip(row, shifted):
                if a:
                    x = x + u.scale(a)
            out.append(x)
        return out

    def transform_function(self, f: Polynomial) -> Polynomial:
        """``f`` written in the new coordinates."""
        return f.compose(self._old_in_new())

    def transform_multivector(self, pi: MultiVectorField) -> MultiVectorField:
        """Pushforward: ``pi'^K = sum_I pi^I det(A[K, I])`` in new coordinates."""
        n, dim = pi.degree, self.dim
        back = self._old_in_new()
        coeffs: Dict[Tuple[int, ...], Polynomial] = {}
        for idx, c in pi.items():
            c_new = c.compose(back)
            for k in itertools.combinations(range(1, dim + 1), n):
                minor = linalg.det([[self.matrix[a - 1][b - 1] for b in idx] for a in k])
                if minor:
                    coeffs[k] = coeffs.get(k, Polynomial.zero(dim)) + c_new.scale(minor)
        return MultiVectorField(dim, n, coeffs)

    def to_json(self) -> dict:
        fr = lambda v: f"{v.numerator}/{v.denominator}"
        return {"matrix": [[fr(v) for v in row] for row in self.matrix], "shift": [fr(v) for v in self.shift]}


def _permutation_scaling(dim: int, order: Sequence[int], last_scale: Fraction, n: int) -> CoordinateChange:
    rows = []
    for new, old in enumerate(order):
        row = [Fraction(0)] * dim
        row[old - 1] = Fraction(1) / last_scale if new == n - 1 else Fraction(1)
        rows.append(tuple(row))
    return CoordinateChange(tuple(rows))


def pre_comb_at(s: BracketStructure, p: Sequence) -> CoordinateChange:
    """Affine coordinates with ``{u_1..u_n}(p) = 1`` and ``{u_1..^u_j..u_n, u_k}(p) = 0`` for ``k > n``.

    The first ``n`` new coordinates are the old ones in the lexicographically
    first multi-index with nonzero coefficient at ``p`` (the last one divided
    by that coefficient); the remaining coordinates are sheared by
    ``u_k -> u_k - sum_i (-1)^(n-i) {u_1..^u_i..u_n, u_k}(p) (u_i - u_i(p))``.
    """
    pt = _point(p, s.dim)
    pi_p = s.pi.frozen_at(pt)
    if pi_p.is_zero():
        raise ValueError("the multivector vanishes at this point")
    n, dim = s.n, s.dim
    i0, c0 = pi_p.items()[0]
    c0 = c0.constant_term()
    order = list(i0) + [i for i in range(1, dim + 1) if i not in i0]
    first = _permutation_scaling(dim, order, c0, n)
    pi1 = first.transform_multivector(s.pi)
    p1 = first.map_point(pt)
    s1 = BracketStructure(pi1)
    us = variables(dim)
    rows = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    shift = [Fraction(0)] * dim
    for k in range(n, dim):
        for i in range(n):
            entries = [us[j] for j in range(n) if j != i] + [us[k]]
            coeff = s1.bracket(entries).eval(p1)
            if not coeff:
                continue
            c = coeff if (n - 1 - i) % 2 == 0 else -coeff
            rows[k][i] -= c
            shift[k] += c * p1[i]
    shear = CoordinateChange(tuple(map(tuple, rows)), tuple(shift))
    return first.then(shear)


def combing_residuals(s: BracketStructure, p: Sequence, change: CoordinateChange) -> Dict[str, object]:
    """Re-evaluate the combed bracket values at the image of ``p``."""
    pt = _point(p, s.dim)
    new_pi = change.transform_multivector(s.pi)
    q = change.map_point(pt)
    s_new = BracketStructure(new_pi)
    us = variables(s.dim)
    n = s.n
    top = s_new.bracket(us[:n]).eval(q)
    mixed = {}
    for j in range(n):
        for k in range(n, s.dim):
            v = s_new.bracket([us[i] for i in range(n) if i != j] + [us[k]]).eval(q)
            if v:
                mixed[(j + 1, k + 1)] = v
    return {"top": top, "nonzero_mixed": mixed}


def is_combed_at(s: BracketStructure, p: Sequence, change: CoordinateChange) -> bool:
    r = combing_residuals(s, p, change)
    return r["top"] == 1 and not r["nonzero_mixed"]


# The weight-constraint system


# Relations mu_A = -mu_B, one block per slot k of the entry that receives a product.
MU_RELATIONS_N3: Dict[int, Tuple[Tuple[Tuple[int, int], Tuple[int, int]], ...]] = {
    1: (((2, 3), (4, 5)), ((2, 4), (3, 5)), ((2, 5), (3, 4))),
    2: (((1, 3), (4, 5)), ((1, 4), (3, 5)), ((1, 5), (3, 4))),
    3: (((1, 2), (4, 5)), ((1, 4), (2, 5)), ((1, 5), (2, 4))),
    4: (((1, 2), (3, 5)), ((1, 3), (2, 5)), ((1, 5), (2, 3))),
    5: (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))),
}


def derived_mu_relations(n: int) -> Dict[int, Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]]:
    """Block-swap relations ``mu_A = -mu_B`` for every slot ``k`` of ``2n-1``.

    Putting a product into slot ``k`` leaves an algebraic identity over the
    other ``2n-2`` slots; it degenerates exactly when the weights of a class
    and of its complement cancel.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    size = 2 * n - 1
    out = {}
    for k in range(1, size + 1):
        rest = [i for i in range(1, size + 1) if i != k]
        rels = []
        for a in itertools.combinations(rest, n - 1):
            b = tuple(i for i in rest if i not in a)
            if a < b:
                rels.append((a, b))
        out[k] = tuple(rels)
    return out


@dataclass(frozen=True)
class MuSystem:
    """Homogeneous linear relations on the weights ``mu_A``, ``A`` an ``(n-1)``-subset of ``1..2n-1``."""

    n: int
    unknowns: Tuple[Tuple[int, ...], ...]
    equations: Tuple[Tuple[Fraction, ...], ...]
    blocks: Tuple[int, ...] = ()

    def labels(self) -> List[str]:
        return ["mu" + "".join(map(str, u)) for u in self.unknowns]

    def rank(self) -> int:
        return linalg.rank(self.equations, len(self.unknowns)) if self.equations else 0

    def kernel(self) -> List[List[Fraction]]:
        if not self.equations:
            return [[Fraction(int(i == j)) for j in range(len(self.unknowns))] for i in range(len(self.unknowns))]
        return linalg.nullspace(self.equations, len(self.unknowns))


def _mu_system(n: int, relations, blocks) -> MuSystem:
    unknowns = tuple(itertools.combinations(range(1, 2 * n), n - 1))
    col = {u: i for i, u in enumerate(unknowns)}
    rows = []
    for k in blocks:
        for a, b in relations[k]:
            row = [Fraction(0)] * len(unknowns)
            row[col[tuple(a)]] += 1
            row[col[tuple(b)]] += 1
            rows.append(tuple(row))
    return MuSystem(n, unknowns, tuple(rows), tuple(blocks))


def mu_system(n: int = 3, blocks: Sequence[int] | None = None, derived: bool = False) -> MuSystem:
    """The relation system; ``derived=True`` regenerates the relations instead of using the tabulated list."""
    if not derived and n != 3:
        raise ValueError("the tabulated relation list exists for n = 3 only")
    relations = derived_mu_relations(n) if derived else MU_RELATIONS_N3
    blocks = tuple(blocks) if blocks is not None else tuple(sorted(relations))
    if any(k not in relations for k in blocks):
        raise ValueError(f"blocks must lie in 1..{2 * n - 1}")
    return _mu_system(n, relations, blocks)


def mu_constraint_kernel(n: int = 3, blocks: Sequence[int] | None = None) -> Tuple[MuSystem, int, List[List[Fraction]]]:
    """``(system, kernel dimension, kernel basis)`` of the tabulated n = 3 relations."""
    if n != 3:
        raise ValueError("only n = 3 is supported")
    system = mu_system(3, blocks)
    basis = system.kernel()
    return system, len(basis), basis


# Random instances


def random_polynomial(rng: random.Random, dim: int, max_degree: int, coeff_range: int = 3,
                      density: float = 0.7) -> Polynomial:
    terms = {}
    for deg in range(max_degree + 1):
        for exps in _exponents(dim, deg):
            if rng.random() < density:
                c = rng.randint(-coeff_range, coeff_range)
                if c:
                    terms[exps] = c
    return Polynomial(dim, terms)


def _exponents(dim: int, degree: int):
    for combo in itertools.combinations_with_replacement(range(dim), degree):
        e = [0] * dim
        for i in combo:
            e[i] += 1
        yield tuple(e)


def random_point(rng: random.Random, dim: int, spread: int = 7) -> Tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-spread, spread), rng.randint(1, 5)) for _ in range(dim))


def random_multivector(d: int, n: int, max_coeff_degree: int, seed: int,
                       density: float = 0.7) -> MultiVectorField:
    """Deterministic pseudo-random degree-``n`` multivector in dimension ``d``."""
    if n > d or n < 0:
        raise ValueError(f"degree {n} impossible in dimension {d}")
    rng = random.Random(seed)
    coeffs = {}
    for idx in itertools.combinations(range(1, d + 1), n):
        coeffs[idx] = random_polynomial(rng, d, max_coeff_degree, density=density)
    return MultiVectorField(d, n, coeffs)


def random_decomposable(d: int, n: int, max_coeff_degree: int, seed: int) -> Tuple[MultiVectorField, List[VectorField]]:
    """``(X_1 ^ .. ^ X_n, [X_1..X_n])`` with pseudo-random polynomial factors."""
    if n > d or n < 1:
        raise ValueError(f"degree {n} impossible in dimension {d}")
    rng = random.Random(seed)
    factors = [VectorField([random_polynomial(rng, d, max_coeff_degree) for _ in range(d)]) for _ in range(n)]
    return det_bracket(factors), factors
