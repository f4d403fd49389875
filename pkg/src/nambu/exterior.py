"""Multi-vector fields, differential forms and the exterior-calculus operators.

Both kinds of alternating fields store one polynomial coefficient per strictly
increasing multi-index.  Contractions never carry factorial factors: with
``pi = sum_I pi^I d_I`` and ``alpha = sum_I alpha_I dx^I`` the pairing is
``sum_I alpha_I pi^I``, so ``<dx^I, d_J> = delta_IJ`` and the n-bracket of
functions is a plain determinant expansion.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple, Union

from .poly import Polynomial, Scalar

MultiIndex = Tuple[int, ...]


def sorted_sign(indices: Sequence[int], dim: int | None = None):
    """Sort ``indices`` and return ``(sorted_tuple, sign)``, or None on a repeat.

    >>> sorted_sign((2, 1))
    ((1, 2), -1)
    >>> sorted_sign((1, 1)) is None
    True
    """
    idx = tuple(indices)
    for i in idx:
        if i < 1 or (dim is not None and i > dim):
            raise IndexError(f"index {i} out of range 1..{dim}")
    if len(set(idx)) != len(idx):
        return None
    sign = 1
    arr = list(idx)
    # insertion sort counting transpositions; tuples are short
    for a in range(1, len(arr)):
        b = a
        while b > 0 and arr[b - 1] > arr[b]:
            arr[b - 1], arr[b] = arr[b], arr[b - 1]
            sign = -sign
            b -= 1
    return tuple(arr), sign


def levi_civita_parity(perm: Sequence[int]) -> int:
    """Parity (+1/-1) of a permutation of ``1..k`` given in one-line notation."""
    k = len(perm)
    if sorted(perm) != list(range(1, k + 1)):
        raise ValueError(f"{tuple(perm)} is not a permutation of 1..{k}")
    seen = [False] * k
    sign = 1
    for start in range(k):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def levi_civita(indices: Sequence[int]) -> int:
    """The symbol with ``len(indices)`` slots over the range ``1..len(indices)``."""
    n = len(indices)
    if any(i < 1 or i > n for i in indices) or len(set(indices)) != n:
        return 0
    return levi_civita_parity(indices)


def shuffle_sign(first: Sequence[int], second: Sequence[int]) -> int:
    """Sign of the permutation sorting the concatenation of two increasing, disjoint tuples."""
    inversions = 0
    j = 0
    for a in first:
        while j < len(second) and second[j] < a:
            j += 1
        inversions += j
    return -1 if inversions % 2 else 1


class _Alternating:
    """Common storage for multi-vector fields and differential forms."""

    kind = "alternating"
    __slots__ = ("dim", "degree", "_coeffs", "_hash")

    def __init__(self, dim: int, degree: int, coeffs: Mapping[Sequence[int], Union[Polynomial, Scalar]] | None = None):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        self.dim = dim
        self.degree = degree
        store: Dict[MultiIndex, Polynomial] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"multi-index {idx} does not have degree {degree}")
            normal = sorted_sign(idx, dim)
            if normal is None:
                continue
            key, sign = normal
            if not isinstance(c, Polynomial):
                c = Polynomial.constant(c, dim)
            elif c.dim != dim:
                raise ValueError("coefficient dimension mismatch")
            if sign < 0:
                c = -c
            total = store[key] + c if key in store else c
            if total.is_zero():
                store.pop(key, None)
            else:
                store[key] = total
        self._coeffs = store
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, degree: int, coeffs: Dict[MultiIndex, Polynomial]):
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.degree = degree
        obj._coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, dim: int, degree: int):
        return cls._raw(dim, degree, {})

    @classmethod
    def basis(cls, dim: int, indices: Sequence[int], coeff: Union[Polynomial, Scalar] = 1):
        """The basis element for ``indices`` (any order; sign applied)."""
        return cls(dim, len(indices), {tuple(indices): coeff})

    @classmethod
    def scalar_field(cls, f: Polynomial):
        return cls._raw(f.dim, 0, {(): f})

    @property
    def coeffs(self) -> Dict[MultiIndex, Polynomial]:
        return dict(self._coeffs)

    def items(self):
        return sorted(self._coeffs.items())

    def coefficient(self, indices: Sequence[int]) -> Polynomial:
        normal = sorted_sign(indices, self.dim)
        if normal is None:
            return Polynomial.zero(self.dim)
        key, sign = normal
        c = self._coeffs.get(key)
        if c is None:
            return Polynomial.zero(self.dim)
        return c if sign > 0 else -c

    def scalar(self) -> Polynomial:
        if self.degree != 0:
            raise ValueError("only degree-0 fields have a scalar value")
        return self._coeffs.get((), Polynomial.zero(self.dim))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def _same(self, other) -> None:
        if type(self) is not type(other):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.dim != other.dim or self.degree != other.degree:
            raise ValueError("dimension/degree mismatch")

    def __add__(self, other):
        self._same(other)
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out[k] + v if k in out else v
        return type(self)._raw(self.dim, self.degree, out)

    def __neg__(self):
        return type(self)._raw(self.dim, self.degree, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        """Multiply every coefficient by a polynomial or rational."""
        if isinstance(f, Polynomial):
            return type(self)._raw(self.dim, self.degree, {k: v * f for k, v in self._coeffs.items()})
        if isinstance(f, (int, Fraction)) and not isinstance(f, bool):
            return type(self)._raw(self.dim, self.degree, {k: v.scale(f) for k, v in self._coeffs.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        return self.dim == other.dim and self.degree == other.degree and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.kind, self.dim, self.degree, frozenset(self._coeffs.items())))
        return self._hash

    def map_coefficients(self, fn):
        return type(self)._raw(self.dim, self.degree, {k: fn(v) for k, v in self._coeffs.items()})

    def diff(self, i: int):
        """Componentwise partial derivative in ``x_i``."""
        return self.map_coefficients(lambda c: c.diff(i))

    def at(self, point: Sequence) -> Dict[MultiIndex, Fraction]:
        """Exact values of the nonzero coefficients at a point."""
        out = {}
        for k, v in self._coeffs.items():
            val = v.eval(point)
            if val:
                out[k] = val
        return out

    def frozen_at(self, point: Sequence):
        """The same field with every coefficient replaced by its value at ``point``."""
        vals = self.at(point)
        return type(self)._raw(self.dim, self.degree, {k: Polynomial.constant(v, self.dim) for k, v in vals.items()})

    def variables(self) -> set:
        used = set()
        for c in self._coeffs.values():
            used |= c.variables()
        return used

    def _symbol(self, idx: MultiIndex) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for idx, c in self.items():
            sym = self._symbol(idx)
            if c == 1:
                parts.append(sym or "1")
            elif sym:
                parts.append(f"({c})*{sym}")
            else:
                parts.append(f"({c})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, degree={self.degree}: {self})"


class MultiVectorField(_Alternating):
    """Antisymmetric contravariant field ``pi = sum_I pi^I d_{i1} ^ ... ^ d_{in}``."""

    kind = "multivector"
    __slots__ = ()

    def _symbol(self, idx):
        return "^".join(f"d{i}" for i in idx)

    def as_vector_field(self) -> "VectorField":
        if self.degree != 1:
            raise ValueError("only degree-1 multivectors are vector fields")
        comps = [self._coeffs.get((j,), Polynomial.zero(self.dim)) for j in range(1, self.dim + 1)]
        return VectorField(comps)


class DifferentialForm(_Alternating):
    """Antisymmetric covariant field ``alpha = sum_I alpha_I dx^{i1} ^ ... ^ dx^{ik}``."""

    kind = "form"
    __slots__ = ()

    def _symbol(self, idx):
        return "^".join(f"dx{i}" for i in idx)

    @classmethod
    def differential(cls, f: Polynomial) -> "DifferentialForm":
        return cls._raw(f.dim, 1, {(i,): g for i, g in f.gradient().items()})


class VectorField:
    """A vector field ``X = X^j d_j`` with ``dim`` polynomial components."""

    __slots__ = ("dim", "components")

    def __init__(self, components: Sequence[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector field needs at least one component")
        dim = comps[0].dim
        if len(comps) != dim or any(c.dim != dim for c in comps):
            raise ValueError("need exactly dim components of dimension dim")
        self.dim = dim
        self.components = comps

    @classmethod
    def zero(cls, dim: int) -> "VectorField":
        return cls([Polynomial.zero(dim)] * dim)

    @classmethod
    def coordinate(cls, j: int, dim: int, coeff: Union[Polynomial, Scalar] = 1) -> "VectorField":
        if not isinstance(coeff, Polynomial):
            coeff = Polynomial.constant(coeff, dim)
        comps = [Polynomial.zero(dim)] * dim
        comps[j - 1] = coeff
        return cls(comps)

    def __getitem__(self, j: int) -> Polynomial:
        """Component ``X^j`` with 1-based ``j``."""
        return self.components[j - 1]

    def __call__(self, f: Polynomial) -> Polynomial:
        """Directional derivative ``X[f]``."""
        out = Polynomial.zero(self.dim)
        for j, c in enumerate(self.components, start=1):
            if c:
                g = f.diff(j)
                if g:
                    out = out + c * g
        return out

    apply = __call__

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField([a + b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField([-a for a in self.components])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def __mul__(self, f):
        return VectorField([a * f for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def at(self, point: Sequence) -> Tuple[Fraction, ...]:
        return tuple(c.eval(point) for c in self.components)

    def as_multivector(self) -> MultiVectorField:
        return MultiVectorField._raw(self.dim, 1, {(j,): c for j, c in enumerate(self.components, start=1)})

    def __str__(self) -> str:
        return str(self.as_multivector())

    def __repr__(self) -> str:
        return f"VectorField({self})"


def _wedge_coeffs(a: Dict[MultiIndex, Polynomial], b: Dict[MultiIndex, Polynomial]) -> Dict[MultiIndex, Polynomial]:
    out: Dict[MultiIndex, Polynomial] = {}
    for i, ca in a.items():
        si = set(i)
        for j, cb in b.items():
            if si.intersection(j):
                continue
            key = tuple(sorted(i + j))
            term = ca * cb
            if shuffle_sign(i, j) < 0:
                term = -term
            out[key] = out[key] + term if key in out else term
    return out


def wedge(a, b):
    """Exterior product of two fields of the same kind.

    ``(A ^ B)_K`` sums ``sign(I, J) A_I B_J`` over splittings of ``K`` into
    increasing ``I`` and ``J``.  Vector fields are treated as degree-1
    multivectors.
    """
    if isinstance(a, VectorField):
        a = a.as_multivector()
    if isinstance(b, VectorField):
        b = b.as_multivector()
    if type(a) is not type(b):
        raise TypeError("wedge needs two multivectors or two forms")
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    return type(a)._raw(a.dim, a.degree + b.degree, _wedge_coeffs(a._coeffs, b._coeffs))


def wedge_all(fields: Sequence, dim: int | None = None, kind=DifferentialForm):
    """Wedge a sequence left to right; an empty sequence gives the constant 1."""
    if not fields:
        if dim is None:
            raise ValueError("need dim for an empty wedge")
        return kind.scalar_field(Polynomial.constant(1, dim))
    out = fields[0]
    if isinstance(out, VectorField):
        out = out.as_multivector()
    for f in fields[1:]:
        out = wedge(out, f)
    return out


def pairing(alpha: DifferentialForm, field: MultiVectorField) -> Polynomial:
    """``<alpha, A> = sum_I alpha_I A^I`` over increasing multi-indices."""
    if alpha.degree != field.degree:
        raise ValueError(f"degree mismatch: form {alpha.degree} vs multivector {field.degree}")
    if alpha.dim != field.dim:
        raise ValueError("dimension mismatch")
    out = Polynomial.zero(alpha.dim)
    small, large = (alpha._coeffs, field._coeffs)
    if len(small) > len(large):
        small, large = large, small
    for k, c in small.items():
        other = large.get(k)
        if other is not None:
            out = out + c * other
    return out


def exterior_derivative(alpha: DifferentialForm) -> DifferentialForm:
    """``(d alpha)_K = sum_b (-1)^(b-1) d_{k_b} alpha_{K without k_b}``."""
    out: Dict[MultiIndex, Polynomial] = {}
    for idx, c in alpha._coeffs.items():
        for j, g in c.gradient().items():
            if j in idx:
                continue
            normal = sorted_sign((j,) + idx)
            key, sign = normal
            term = g if sign > 0 else -g
            out[key] = out[key] + term if key in out else term
    return DifferentialForm._raw(alpha.dim, alpha.degree + 1, out)


def interior_vector(x: VectorField, omega: DifferentialForm) -> DifferentialForm:
    """Contract ``X`` into the first slot: ``(i_X w)_I = sum_j X^j w_{(j, I)}``."""
    if omega.degree < 1:
        raise ValueError("cannot contract a vector into a 0-form")
    if x.dim != omega.dim:
        raise ValueError("dimension mismatch")
    out: Dict[MultiIndex, Polynomial] = {}
    for idx, c in omega._coeffs.items():
        for b, j in enumerate(idx):
            xj = x.components[j - 1]
            if xj.is_zero():
                continue
            rest = idx[:b] + idx[b + 1:]
            term = xj * c
            if b % 2:
                term = -term
            out[rest] = out[rest] + term if rest in out else term
    return DifferentialForm._raw(omega.dim, omega.degree - 1, out)


def interior_form(alpha: DifferentialForm, field: MultiVectorField) -> MultiVectorField:
    """Contract ``alpha`` into the first ``k`` slots of ``field``.

    ``(i_alpha A)^J = sum_I alpha_I A^{(I, J)}``, the sign coming from sorting
    the concatenation.  For ``k == n`` the result is the degree-0 field holding
    ``pairing(alpha, A)``.
    """
    k, n = alpha.degree, field.degree
    if k > n:
        raise ValueError(f"cannot contract a {k}-form into a {n}-vector")
    if alpha.dim != field.dim:
        raise ValueError("dimension mismatch")
    out: Dict[MultiIndex, Polynomial] = {}
    if not alpha._coeffs:
        return MultiVectorField._raw(field.dim, n - k, {})
    for big, c in field._coeffs.items():
        for pos in itertools.combinations(range(n), k):
            sub = tuple(big[p] for p in pos)
            a = alpha._coeffs.get(sub)
            if a is None:
                continue
            rest = tuple(big[p] for p in range(n) if p not in pos)
            term = a * c
            if shuffle_sign(sub, rest) < 0:
                term = -term
            out[rest] = out[rest] + term if rest in out else term
    return MultiVectorField._raw(field.dim, n - k, out)


def homotopy(alpha: DifferentialForm) -> DifferentialForm:
    """Radial homotopy operator about the origin.

    A monomial coefficient of degree ``m`` on ``dx^I`` (``|I| = k``) maps to
    ``sum_b (-1)^(b-1) x^{i_b} a / (k + m) dx^{I without i_b}``, so that
    ``h d + d h`` is the identity on forms of degree >= 1 and ``h(df) = f - f(0)``.
    """
    k = alpha.degree
    if k < 1:
        raise ValueError("the homotopy operator needs a form of degree >= 1")
    dim = alpha.dim
    out: Dict[MultiIndex, Polynomial] = {}
    for idx, c in alpha._coeffs.items():
        for m, part in c.homogeneous_parts().items():
            scaled = part.scale(Fraction(1, k + m))
            for b, i in enumerate(idx):
                rest = idx[:b] + idx[b + 1:]
                term = Polynomial.variable(i, dim) * scaled
                if b % 2:
                    term = -term
                out[rest] = out[rest] + term if rest in out else term
    return DifferentialForm._raw(dim, k - 1, out)


def lie_derivative_form(x: VectorField, omega: DifferentialForm) -> DifferentialForm:
    """Cartan's formula ``L_X w = i_X dw + d i_X w``."""
    out = interior_vector(x, exterior_derivative(omega))
    if omega.degree >= 1:
        out = out + exterior_derivative(interior_vector(x, omega))
    return out


def schouten_identity_residual(k1: int, k2: int, inner: Sequence[int], js: Sequence[int]) -> int:
    """Alternating double Levi-Civita sum, symmetrized in ``k1 <-> k2``.

    With ``n = len(js)`` the sum runs over permutations of the ``j`` slots:
    ``sum_s sgn(s) eps(k1, inner, j_s1) eps(j_s2..j_sn, k2) + (k1 <-> k2)``.
    Decomposability of a single top-degree block makes this vanish.
    """
    n = len(js)
    if len(inner) != n - 2:
        raise ValueError("need n-2 inner indices")
    total = 0
    for order in itertools.permutations(range(n)):
        sgn = levi_civita_parity([o + 1 for o in order])
        jp = [js[o] for o in order]
        for a, b in ((k1, k2), (k2, k1)):
            total += sgn * levi_civita((a, *inner, jp[0])) * levi_civita((*jp[1:], b))
    return total


def check_schouten_identity(n: int) -> Tuple[int, list]:
    """Enumerate every index choice in ``1..n``; return ``(checked, failures)``."""
    if n < 2:
        raise ValueError("the identity needs n >= 2")
    rng = range(1, n + 1)
    checked = 0
    failures = []
    perms = list(itertools.permutations(range(n)))
    signs = [levi_civita_parity([o + 1 for o in p]) for p in perms]
    eps = {t: levi_civita(t) for t in itertools.product(rng, repeat=n)}
    for k1, k2 in itertools.product(rng, repeat=2):
        for inner in itertools.product(rng, repeat=n - 2):
            for js in itertools.product(rng, repeat=n):
                total = 0
                for sgn, order in zip(signs, perms):
                    jp = [js[o] for o in order]
                    tail = tuple(jp[1:])
                    total += sgn * (
                        eps[(k1, *inner, jp[0])] * eps[tail + (k2,)]
                        + eps[(k2, *inner, jp[0])] * eps[tail + (k1,)]
                    )
                checked += 1
                if total:
                    failures.append((k1, k2, inner, js, total))
    return checked, failures
