"""The n-bracket of a multi-vector field and the maps built from it."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .exterior import (
    DifferentialForm,
    MultiIndex,
    MultiVectorField,
    VectorField,
    interior_form,
    interior_vector,
    lie_derivative_form,
    shuffle_sign,
    sorted_sign,
    wedge,
)
from .poly import Polynomial, as_rational
from .verdict import Verdict, Witness


def _det(rows: List[List[Polynomial]], dim: int) -> Polynomial:
    """Laplace expansion along the first row, skipping zero entries."""
    n = len(rows)
    if n == 0:
        return Polynomial.constant(1, dim)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    out = Polynomial.zero(dim)
    for c, entry in enumerate(rows[0]):
        if entry.is_zero():
            continue
        minor = [row[:c] + row[c + 1:] for row in rows[1:]]
        term = entry * _det(minor, dim)
        out = out - term if c % 2 else out + term
    return out


class BracketStructure:
    """An almost Nambu-Poisson structure: a multi-vector field and its n-bracket.

    ``{f1, ..., fn} = sum_I pi^I det(d f_a / d x^{i_b})``.
    """

    def __init__(self, pi: MultiVectorField):
        if not isinstance(pi, MultiVectorField):
            raise TypeError("a bracket structure wraps a MultiVectorField")
        if pi.degree < 1:
            raise ValueError("the bracket needs degree n >= 1")
        self.pi = pi
        self.dim = pi.dim
        self.n = pi.degree
        self._terms = pi.items()

    def __repr__(self) -> str:
        return f"BracketStructure(d={self.dim}, n={self.n}, pi={self.pi})"

    def __eq__(self, other) -> bool:
        return isinstance(other, BracketStructure) and self.pi == other.pi

    def __hash__(self) -> int:
        return hash(self.pi)

    def coordinate(self, i: int) -> Polynomial:
        return Polynomial.variable(i, self.dim)

    def coordinates(self) -> Tuple[Polynomial, ...]:
        return tuple(Polynomial.variable(i, self.dim) for i in range(1, self.dim + 1))

    def bracket(self, entries: Sequence[Polynomial]) -> Polynomial:
        if len(entries) != self.n:
            raise ValueError(f"the bracket takes {self.n} entries, got {len(entries)}")
        for f in entries:
            if f.dim != self.dim:
                raise ValueError("entry dimension mismatch")
        idx = [f.variable_index() for f in entries]
        if None not in idx:
            return self.pi.coefficient(idx)
        grads = [f.gradient() for f in entries]
        if any(not g for g in grads):
            return Polynomial.zero(self.dim)
        zero = Polynomial.zero(self.dim)
        out = zero
        for big, coeff in self._terms:
            rows = [[g.get(i, zero) for i in big] for g in grads]
            if any(all(e.is_zero() for e in row) for row in rows):
                continue
            d = _det(rows, self.dim)
            if d:
                out = out + coeff * d
        return out

    __call__ = bracket

    def frozen_at(self, point: Sequence) -> "BracketStructure":
        return BracketStructure(self.pi.frozen_at(point))


def bracket(s: BracketStructure, entries: Sequence[Polynomial]) -> Polynomial:
    return s.bracket(entries)


def differential_wedge(fs: Sequence[Polynomial], dim: int) -> DifferentialForm:
    """``df1 ^ ... ^ dfk`` (the constant 1 for an empty list)."""
    out = DifferentialForm.scalar_field(Polynomial.constant(1, dim))
    for f in fs:
        out = wedge(out, DifferentialForm.differential(f))
    return out


def sharp(s: BracketStructure, alpha: DifferentialForm) -> VectorField:
    """Contract an (n-1)-form into pi, giving a vector field."""
    if alpha.degree != s.n - 1:
        raise ValueError(f"sharp takes an {s.n - 1}-form, got degree {alpha.degree}")
    return interior_form(alpha, s.pi).as_vector_field()


def hamiltonian_vf(s: BracketStructure, fs: Sequence[Polynomial]) -> VectorField:
    """``X_f = sharp(df1 ^ ... ^ df_{n-1})``, so that ``X_f[g] = {f1, ..., f_{n-1}, g}``."""
    if len(fs) != s.n - 1:
        raise ValueError(f"a Hamiltonian has {s.n - 1} entries, got {len(fs)}")
    idx = [f.variable_index() for f in fs]
    if None not in idx:
        normal = sorted_sign(idx, s.dim)
        if normal is None:
            return VectorField.zero(s.dim)
        alpha = DifferentialForm._raw(s.dim, s.n - 1, {normal[0]: Polynomial.constant(normal[1], s.dim)})
    else:
        alpha = differential_wedge(fs, s.dim)
    return sharp(s, alpha)


def flat(omega: DifferentialForm, x: VectorField) -> DifferentialForm:
    """``flat(X) = i_X omega``."""
    if omega.degree < 1:
        raise ValueError("flat needs a form of degree >= 1")
    return interior_vector(x, omega)


def lie_bracket(x: VectorField, y: VectorField) -> VectorField:
    """``[X, Y]^i = X[Y^i] - Y[X^i]``."""
    if x.dim != y.dim:
        raise ValueError("dimension mismatch")
    return VectorField([x(b) - y(a) for a, b in zip(x.components, y.components)])


def _as_multivector(a, dim: int | None = None) -> MultiVectorField:
    if isinstance(a, MultiVectorField):
        return a
    if isinstance(a, VectorField):
        return a.as_multivector()
    if isinstance(a, Polynomial):
        return MultiVectorField.scalar_field(a)
    raise TypeError(f"expected a multivector, vector field or polynomial, got {type(a).__name__}")


def _theta_derivative(idx: MultiIndex, i: int, right: bool):
    """Odd derivative of the monomial ``theta_idx`` in ``theta_i``: (rest, sign) or None."""
    if i not in idx:
        return None
    b = idx.index(i)
    rest = idx[:b] + idx[b + 1:]
    exponent = (len(idx) - 1 - b) if right else b
    return rest, (-1 if exponent % 2 else 1)


def schouten_nijenhuis(a, b):
    """Schouten-Nijenhuis bracket of multi-vector fields (polynomials count as degree 0).

    Multivectors are identified with functions of ``x`` and odd ``theta_i``
    (``theta_i <-> d_i``) and
    ``(A, B) = sum_i (A d<_theta_i)(d_i B) - (d_i A)(d>_theta_i B)``,
    normalized by ``(d_i, x^j) = delta_i^j``.  It is graded symmetric,
    ``(A, B) = -(-1)^((p-1)(q-1)) (B, A)``, and ``(X, B) = L_X B``.

    Returns a Polynomial when the result has degree 0.
    """
    A = _as_multivector(a)
    B = _as_multivector(b)
    if A.dim != B.dim:
        raise ValueError("dimension mismatch")
    dim = A.dim
    p, q = A.degree, B.degree
    if p + q - 1 < 0:
        return Polynomial.zero(dim)
    out: Dict[MultiIndex, Polynomial] = {}

    def add(left_idx, left_c, right_idx, right_c, sign):
        if set(left_idx).intersection(right_idx):
            return
        key = tuple(sorted(left_idx + right_idx))
        term = left_c * right_c
        if sign * shuffle_sign(left_idx, right_idx) < 0:
            term = -term
        out[key] = out[key] + term if key in out else term

    db = {i: B.diff(i) for i in range(1, dim + 1)}
    da = {i: A.diff(i) for i in range(1, dim + 1)}
    for ia, ca in A.items():
        for i in ia:
            rest, sgn = _theta_derivative(ia, i, right=True)
            for ib, cb in db[i].items():
                add(rest, ca, ib, cb, sgn)
    for i in range(1, dim + 1):
        if da[i].is_zero():
            continue
        for ib, cb in B.items():
            d = _theta_derivative(ib, i, right=False)
            if d is None:
                continue
            rest, sgn = d
            for ia, ca in da[i].items():
                add(ia, ca, rest, cb, -sgn)
    result = MultiVectorField._raw(dim, p + q - 1, out)
    if result.degree == 0:
        return result.scalar()
    return result


def lie_derivative_multivector(x: VectorField, pi: MultiVectorField) -> MultiVectorField:
    """``L_X pi`` from the component formula.

    Uses ``L_X d_i = [X, d_i] = -(d_i X^j) d_j`` slot by slot; independent of
    the Schouten-Nijenhuis implementation, which it must agree with.
    """
    if x.dim != pi.dim:
        raise ValueError("dimension mismatch")
    dim = pi.dim
    out: Dict[MultiIndex, Polynomial] = {}

    def add(key, term):
        out[key] = out[key] + term if key in out else term

    dx = {(i, j): x.components[j - 1].diff(i) for i in range(1, dim + 1) for j in range(1, dim + 1)}
    for idx, c in pi.items():
        xc = x(c)
        if xc:
            add(idx, xc)
        for b, i in enumerate(idx):
            for j in range(1, dim + 1):
                g = dx[(i, j)]
                if g.is_zero():
                    continue
                normal = sorted_sign(idx[:b] + (j,) + idx[b + 1:])
                if normal is None:
                    continue
                key, sign = normal
                term = c * g
                add(key, -term if sign > 0 else term)
    return MultiVectorField._raw(dim, pi.degree, out)


@dataclass(frozen=True)
class RankReport:
    """Rank at a point plus a basis of the image (multivectors) or kernel (forms)."""

    point: Tuple[Fraction, ...]
    rank: int
    basis: Tuple[Tuple[Fraction, ...], ...] = field(default_factory=tuple)
    basis_kind: str = "image"

    def to_json(self) -> dict:
        return {
            "point": [_frac(v) for v in self.point],
            "rank": self.rank,
            "basis_kind": self.basis_kind,
            "basis": [[_frac(v) for v in row] for row in self.basis],
        }


def _frac(v: Fraction) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def _point(p: Sequence, dim: int) -> Tuple[Fraction, ...]:
    pt = tuple(as_rational(v) for v in p)
    if len(pt) != dim:
        raise ValueError(f"point has {len(pt)} coordinates, expected {dim}")
    return pt


def sharp_matrix_at(s: BracketStructure, p: Sequence) -> List[List[Fraction]]:
    """Rows: ``sharp(dx^I)|_p`` for each increasing I of degree n-1."""
    pt = _point(p, s.dim)
    vals = s.pi.at(pt)
    rows = []
    for I in itertools.combinations(range(1, s.dim + 1), s.n - 1):
        row = [Fraction(0)] * s.dim
        for j in range(1, s.dim + 1):
            normal = sorted_sign(I + (j,))
            if normal is None:
                continue
            key, sign = normal
            v = vals.get(key)
            if v:
                row[j - 1] = v * sign
        rows.append(row)
    return rows


def rank_multivector_at(s: BracketStructure, p: Sequence) -> RankReport:
    pt = _point(p, s.dim)
    basis, _ = linalg.rref(sharp_matrix_at(s, pt), s.dim)
    return RankReport(pt, len(basis), tuple(tuple(r) for r in basis), "image")


def flat_matrix_at(omega: DifferentialForm, p: Sequence) -> List[List[Fraction]]:
    """Columns: ``flat(d_j)|_p`` expressed on increasing (k-1)-indices."""
    dim = omega.dim
    pt = _point(p, dim)
    vals = omega.at(pt)
    rows_index = list(itertools.combinations(range(1, dim + 1), omega.degree - 1))
    pos = {I: r for r, I in enumerate(rows_index)}
    m = [[Fraction(0)] * dim for _ in rows_index]
    for key, v in vals.items():
        for b, j in enumerate(key):
            rest = key[:b] + key[b + 1:]
            m[pos[rest]][j - 1] += v if b % 2 == 0 else -v
    return m


def rank_form_at(omega: DifferentialForm, p: Sequence) -> RankReport:
    """``d - dim ker(flat|_p)`` with a kernel basis."""
    if omega.degree < 1:
        raise ValueError("rank of a form needs degree >= 1")
    pt = _point(p, omega.dim)
    kernel = linalg.nullspace(flat_matrix_at(omega, pt), omega.dim)
    return RankReport(pt, omega.dim - len(kernel), tuple(tuple(v) for v in kernel), "kernel")


def j_map_at(s: BracketStructure, omega: DifferentialForm, p: Sequence) -> Tuple[List[List[Fraction]], bool]:
    """Matrix of ``sharp|_p o flat|_p`` on the coordinate basis and its invertibility."""
    if omega.degree != s.n:
        raise ValueError(f"J needs an {s.n}-form, got degree {omega.degree}")
    if omega.dim != s.dim:
        raise ValueError("dimension mismatch")
    pt = _point(p, s.dim)
    flat_m = flat_matrix_at(omega, pt)
    sharp_m = sharp_matrix_at(s, pt)
    # J = sharp_m^T (as map on covector coefficients) composed with flat columns
    j = [[sum((sharp_m[r][i] * flat_m[r][c] for r in range(len(flat_m))), Fraction(0)) for c in range(s.dim)]
         for i in range(s.dim)]
    return j, linalg.det(j) != 0


def is_casimir(s: BracketStructure, f: Polynomial) -> bool:
    if f.dim != s.dim:
        raise ValueError("dimension mismatch")
    return interior_form(DifferentialForm.differential(f), s.pi).is_zero()


def conformal_check(omega: DifferentialForm, x: VectorField, weight: Polynomial) -> Verdict:
    """Test ``L_X omega == weight * omega`` exactly (Cartan formula)."""
    if not isinstance(weight, Polynomial):
        weight = Polynomial.constant(weight, omega.dim)
    residual = lie_derivative_form(x, omega) - omega * weight
    if residual.is_zero():
        return Verdict("conformal", True, 1)
    return Verdict("conformal", False, 1, Witness((weight,), residual))
