"""Sparse multivariate polynomials over the rationals.

A :class:`Polynomial` lives in a fixed number of variables ``x1..xd`` and stores
a map from exponent tuples to :class:`fractions.Fraction` coefficients.  Zero
coefficients are never stored, so two polynomials are equal exactly when their
term maps are equal.  Variables are indexed from 1 throughout the package.
"""
from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Rational = Fraction
Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class Polynomial:
    """Immutable sparse polynomial in ``dim`` variables with rational coefficients."""

    __slots__ = ("dim", "_terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Exponents, Scalar] | None = None):
        if dim < 0:
            raise ValueError("dimension must be non-negative")
        self.dim = dim
        clean: Dict[Exponents, Fraction] = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != dim:
                    raise ValueError(f"exponent vector {exps} does not have length {dim}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = as_rational(c)
                if c:
                    clean[exps] = clean.get(exps, Fraction(0)) + c
                    if not clean[exps]:
                        del clean[exps]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, terms: Dict[Exponents, Fraction]) -> "Polynomial":
        # caller guarantees normalized terms
        p = cls.__new__(cls)
        p.dim = dim
        p._terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls._raw(dim, {})

    @classmethod
    def constant(cls, value: Scalar, dim: int) -> "Polynomial":
        value = as_rational(value)
        return cls._raw(dim, {(0,) * dim: value} if value else {})

    @classmethod
    def variable(cls, i: int, dim: int) -> "Polynomial":
        if not 1 <= i <= dim:
            raise IndexError(f"variable index {i} out of range 1..{dim}")
        exps = [0] * dim
        exps[i - 1] = 1
        return cls._raw(dim, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def parse(cls, text: str, dim: int) -> "Polynomial":
        """Parse expressions such as ``"x1*x2**2 - 1/2*x3 + 3"``.

        Only ``+ - * / **``, integer literals and the names ``x1..xd`` are
        accepted; division must be by a nonzero rational constant.
        """
        tree = ast.parse(text.replace("^", "**"), mode="eval")
        return _ast_to_poly(tree.body, dim)

    # basic queries

    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.dim, Fraction(0))

    def variables(self) -> set:
        """1-based indices of variables that actually occur."""
        used = set()
        for e in self._terms:
            used.update(i + 1 for i, k in enumerate(e) if k)
        return used

    def variable_index(self) -> int | None:
        """Return ``i`` if this polynomial is exactly ``x_i``, else None."""
        if len(self._terms) != 1:
            return None
        (exps, c), = self._terms.items()
        if c != 1 or sum(exps) != 1:
            return None
        return exps.index(1) + 1

    # arithmetic

    def _check(self, other: "Polynomial") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(other, self.dim)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s += c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Polynomial._raw(self.dim, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Scalar) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return Polynomial.zero(self.dim)
        if c == 1:
            return self
        return Polynomial._raw(self.dim, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        if not self._terms or not other._terms:
            return Polynomial.zero(self.dim)
        # integer numerators over common denominators, one Fraction per output term
        d1 = math.lcm(*(c.denominator for c in self._terms.values()))
        d2 = math.lcm(*(c.denominator for c in other._terms.values()))
        right = [(e2, c2.numerator * (d2 // c2.denominator)) for e2, c2 in other._terms.items()]
        acc: Dict[Exponents, int] = {}
        for e1, c1 in self._terms.items():
            n1 = c1.numerator * (d1 // c1.denominator)
            for e2, n2 in right:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + n1 * n2
        den = d1 * d2
        return Polynomial._raw(self.dim, {e: Fraction(v, den) for e, v in acc.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return self.scale(1 / as_rational(other))
        return NotImplemented

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(1, self.dim)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.dim == other.dim and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == Polynomial.constant(other, self.dim)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self._terms.items())))
        return self._hash

    # calculus

    def diff(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to ``x_i`` (1-based)."""
        if not 1 <= i <= self.dim:
            raise IndexError(f"variable index {i} out of range 1..{self.dim}")
        k = i - 1
        terms: Dict[Exponents, Fraction] = {}
        for e, c in self._terms.items():
            p = e[k]
            if p:
                ne = e[:k] + (p - 1,) + e[k + 1:]
                terms[ne] = c * p
        return Polynomial._raw(self.dim, terms)

    def gradient(self) -> Dict[int, "Polynomial"]:
        """Nonzero partial derivatives keyed by 1-based variable index."""
        out = {}
        for i in sorted(self.variables()):
            out[i] = self.diff(i)
        return out

    def __call__(self, point: Sequence) -> Fraction:
        return self.eval(point)

    def eval(self, point: Sequence) -> Fraction:
        """Exact evaluation at a rational point of length ``dim``."""
        if len(point) != self.dim:
            raise ValueError(f"point has length {len(point)}, expected {self.dim}")
        if not self._terms:
            return Fraction(0)
        pt = [as_rational(v) for v in point]
        # Integer arithmetic over one common denominator; Fraction ops dominate otherwise.
        den = math.lcm(*(v.denominator for v in pt)) if pt else 1
        nums = [v.numerator * (den // v.denominator) for v in pt]
        cden = math.lcm(*(c.denominator for c in self._terms.values()))
        top = self.degree()
        powers: Dict[Tuple[int, int], int] = {}
        acc = 0
        for e, c in self._terms.items():
            m = c.numerator * (cden // c.denominator) * den ** (top - sum(e))
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    pw = powers.get(key)
                    if pw is None:
                        pw = powers[key] = nums[i] ** k
                    m *= pw
            acc += m
        return Fraction(acc, cden * den ** top)

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``x_i -> images[i-1]``; the images may live in another dimension."""
        if len(images) != self.dim:
            raise ValueError("need one image polynomial per variable")
        if not images:
            return self
        target = images[0].dim
        result = Polynomial.zero(target)
        powers: Dict[Tuple[int, int], Polynomial] = {}
        for e, c in self._terms.items():
            term = Polynomial.constant(c, target)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = images[i] ** k
                    term = term * powers[key]
            result = result + term
        return result

    def homogeneous_parts(self) -> Dict[int, "Polynomial"]:
        parts: Dict[int, Dict[Exponents, Fraction]] = {}
        for e, c in self._terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {m: Polynomial._raw(self.dim, t) for m, t in parts.items()}

    # presentation

    def sorted_terms(self):
        """Terms in a canonical order: by total degree, then reverse-lex exponents."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), tuple(-k for k in t[0])))

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exps, c in sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0]))):
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(exps) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out


def variables(dim: int) -> Tuple[Polynomial, ...]:
    """The coordinate functions ``(x1, ..., xd)``."""
    return tuple(Polynomial.variable(i, dim) for i in range(1, dim + 1))


def monomials(dim: int, degree: int) -> Iterable[Polynomial]:
    """All monic monomials of exactly ``degree`` in lexicographic variable order."""
    from itertools import combinations_with_replacement

    for combo in combinations_with_replacement(range(dim), degree):
        exps = [0] * dim
        for i in combo:
            exps[i] += 1
        yield Polynomial._raw(dim, {tuple(exps): Fraction(1)})


def _ast_to_poly(node, dim: int) -> Polynomial:
    if isinstance(node, ast.BinOp):
        left = _ast_to_poly(node.left, dim)
        if isinstance(node.op, ast.Pow):
            if not isinstance(node.right, ast.Constant) or not isinstance(node.right.value, int):
                raise ValueError("exponents must be integer literals")
            return left ** node.right.value
        right = _ast_to_poly(node.right, dim)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant() or right.is_zero():
                raise ValueError("division only by nonzero constants")
            return left / right.constant_term()
        raise ValueError(f"unsupported operator {type(node.op).__name__}")
    if isinstance(node, ast.UnaryOp):
        inner = _ast_to_poly(node.operand, dim)
        if isinstance(node.op, ast.USub):
            return -inner
        if isinstance(node.op, ast.UAdd):
            return inner
        raise ValueError("unsupported unary operator")
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Polynomial.constant(node.value, dim)
    if isinstance(node, ast.Name) and node.id.startswith("x") and node.id[1:].isdigit():
        return Polynomial.variable(int(node.id[1:]), dim)
    raise ValueError(f"cannot parse polynomial fragment: {ast.dump(node)}")
