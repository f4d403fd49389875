"""Executable checks of the bracket identities.

Every identity is expressed as a *residual* function of an entry tuple that
vanishes exactly when the identity holds for that tuple.  A checker walks the
entry tuples produced by an :class:`EnumerationStrategy` and stops at the
first nonzero residual, which becomes the witness of a failing
:class:`~nambu.verdict.Verdict`.

Entry tuples are enumerated block by block.  A block on which the residual is
totally antisymmetric is walked by increasing combinations, a symmetric block
by combinations with repetition, and a block without symmetry (weighted
identities) by all ordered tuples.  This covers every coordinate tuple up to a
sign and keeps enumeration order lexicographic, so witnesses are
deterministic.

Permutation sums are evaluated as shuffle sums: for an antisymmetric bracket
the ``(n-1)! n!`` orderings inside the two blocks contribute identically, and
that factor is kept so residuals equal the literal permutation sums.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, FrozenSet, Iterator, List, Mapping, Sequence, Tuple

from . import linalg
from .core import BracketStructure, hamiltonian_vf, is_casimir, lie_bracket, schouten_nijenhuis
from .exterior import DifferentialForm, MultiVectorField, VectorField, interior_form, shuffle_sign, wedge
from .poly import Polynomial, as_rational, monomials, variables
from .verdict import Verdict, Witness

ANTI, SYM, FREE = "anti", "sym", "free"

MODES = ("coordinates", "coordinates-with-repeat", "coordinates-plus-products", "explicit-tuples")
MODE_ALIASES = {
    "coords": "coordinates",
    "coords-repeat": "coordinates-with-repeat",
    "coords-products": "coordinates-plus-products",
    "tuples": "explicit-tuples",
}


class NotApplicable(ValueError):
    """The check's precondition does not hold for this input."""


@dataclass(frozen=True)
class EnumerationStrategy:
    """How entry tuples are generated.

    ``coordinates`` uses the coordinate functions; ``coordinates-with-repeat``
    keeps only tuples in which some entry occurs twice;
    ``coordinates-plus-products`` appends tuples whose designated slot holds a
    monomial of degree ``2..max_product_degree``; ``explicit-tuples`` uses
    ``tuples`` verbatim.
    """

    mode: str = "coordinates"
    max_product_degree: int = 2
    tuples: Tuple[Tuple[Polynomial, ...], ...] = ()

    def __post_init__(self):
        mode = MODE_ALIASES.get(self.mode, self.mode)
        if mode not in MODES:
            raise ValueError(f"unknown enumeration mode {self.mode!r}")
        object.__setattr__(self, "mode", mode)
        if self.max_product_degree < 2 and mode == "coordinates-plus-products":
            raise ValueError("max_product_degree must be at least 2")
        object.__setattr__(self, "tuples", tuple(tuple(t) for t in self.tuples))
        if mode == "explicit-tuples" and not self.tuples:
            raise ValueError("explicit-tuples needs a non-empty tuple list")

    @classmethod
    def coordinates(cls) -> "EnumerationStrategy":
        return cls("coordinates")

    @classmethod
    def with_repeat(cls) -> "EnumerationStrategy":
        return cls("coordinates-with-repeat")

    @classmethod
    def products(cls, max_product_degree: int = 2) -> "EnumerationStrategy":
        return cls("coordinates-plus-products", max_product_degree)

    @classmethod
    def explicit(cls, tuples) -> "EnumerationStrategy":
        return cls("explicit-tuples", tuples=tuple(tuple(t) for t in tuples))


@dataclass(frozen=True)
class Layout:
    """Block structure of an entry tuple; ``product_block`` receives monomials."""

    blocks: Tuple[Tuple[str, int], ...]
    product_block: int = -1

    @property
    def arity(self) -> int:
        return sum(size for _, size in self.blocks)


def _choices(sym: str, size: int, pool: Sequence[Polynomial]):
    if size == 0:
        return [()]
    if sym == ANTI:
        return itertools.combinations(pool, size)
    if sym == SYM:
        return itertools.combinations_with_replacement(pool, size)
    return itertools.product(pool, repeat=size)


def _walk(blocks, pool_for_block) -> Iterator[Tuple[Polynomial, ...]]:
    def rec(b):
        if b == len(blocks):
            yield ()
            return
        sym, size = blocks[b]
        for head in pool_for_block(b, sym, size):
            for tail in rec(b + 1):
                yield tuple(head) + tail
    return rec(0)


def _has_repeat(t: Sequence[Polynomial]) -> bool:
    return len(set(t)) < len(t)


def enumerate_tuples(layout: Layout, dim: int, strategy: EnumerationStrategy) -> Iterator[Tuple[Polynomial, ...]]:
    if strategy.mode == "explicit-tuples":
        for t in strategy.tuples:
            if len(t) != layout.arity:
                raise ValueError(f"explicit tuple has {len(t)} entries, expected {layout.arity}")
            yield tuple(t)
        return
    coords = variables(dim)
    base = _walk(layout.blocks, lambda b, sym, size: _choices(sym, size, coords))
    if strategy.mode == "coordinates-with-repeat":
        yield from (t for t in base if _has_repeat(t))
        return
    yield from base
    if strategy.mode != "coordinates-plus-products":
        return
    target = layout.product_block % len(layout.blocks)
    if layout.blocks[target][1] == 0:
        nonempty = [i for i, (_, s) in enumerate(layout.blocks) if s]
        if not nonempty:
            return
        target = nonempty[-1]
    # A block wider than the dimension has no coordinate tuples: fill it with
    # all coordinates and draw the surplus slots from products.
    size = layout.blocks[target][1]
    surplus = size - 1 - dim
    extras = [m for deg in range(2, strategy.max_product_degree + 1) for m in monomials(dim, deg)]
    if surplus > 0:
        heads = [tuple(coords) + c for c in itertools.combinations(extras, surplus)]
    else:
        heads = None
    for deg in range(2, strategy.max_product_degree + 1):
        monos = list(monomials(dim, deg))

        def pool(b, sym, size, monos=monos):
            if b != target:
                return _choices(sym, size, coords)
            hs = heads if heads is not None else list(_choices(sym, size - 1, coords))
            return ((*head, m) for head in hs for m in monos)

        yield from _walk(layout.blocks, pool)


def _run(name: str, layout: Layout, residual: Callable, dim: int, strategy: EnumerationStrategy,
         details: Dict | None = None) -> Verdict:
    checked = 0
    for entries in enumerate_tuples(layout, dim, strategy):
        checked += 1
        r = residual(entries)
        if not r.is_zero():
            return Verdict(name, False, checked, Witness(entries, r), details or {})
    return Verdict(name, True, checked, None, details or {})


def _default(strategy, mode: str) -> EnumerationStrategy:
    return strategy if strategy is not None else EnumerationStrategy(mode)


def _splits(items: Sequence[int], k: int):
    """Increasing k-subsets A of ``items`` with complement B and the shuffle sign."""
    for a in itertools.combinations(items, k):
        b = tuple(i for i in items if i not in a)
        yield a, b, shuffle_sign(a, b)


# Weights


@dataclass(frozen=True)
class WeightsLambda:
    """Per-position weights of the weighted algebraic identity."""

    lambdas: Tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(self.lambdas))

    @classmethod
    def constant(cls, values: Sequence, dim: int) -> "WeightsLambda":
        return cls(tuple(Polynomial.constant(as_rational(v), dim) for v in values))

    def __len__(self) -> int:
        return len(self.lambdas)

    def average_is_zero(self) -> bool:
        total = Polynomial.zero(self.lambdas[0].dim)
        for lam in self.lambdas:
            total = total + lam
        return total.is_zero()

    def is_nondegenerate_at(self, points: Sequence[Sequence]) -> bool:
        """At every sampled point some weight is nonzero."""
        return all(any(lam.eval(p) for lam in self.lambdas) for p in points)

    def is_identically_zero(self) -> bool:
        return all(lam.is_zero() for lam in self.lambdas)


@dataclass(frozen=True)
class WeightsMu:
    """Permutation weights stored by symmetry class.

    ``kind`` is ``"gpi"`` (permutations of ``2n-1`` entries) or ``"gapi"``
    (``2n-2`` entries).  A weight depends only on the set of positions that
    land in the first block of ``n-1`` slots, which makes it symmetric in that
    block and in the trailing block by construction.  Missing classes weigh 0.
    """

    n: int
    kind: str
    table: Mapping[FrozenSet[int], Polynomial]
    dim: int

    def __post_init__(self):
        if self.kind not in ("gpi", "gapi"):
            raise ValueError("kind must be 'gpi' or 'gapi'")
        k = self.size
        clean = {}
        for key, v in dict(self.table).items():
            key = frozenset(key)
            if len(key) != self.n - 1 or not key <= set(range(1, k + 1)):
                raise ValueError(f"{sorted(key)} is not a symmetry class of {self.n - 1} positions out of 1..{k}")
            if not isinstance(v, Polynomial):
                v = Polynomial.constant(as_rational(v), self.dim)
            clean[key] = v
        object.__setattr__(self, "table", clean)

    @property
    def size(self) -> int:
        return 2 * self.n - 1 if self.kind == "gpi" else 2 * self.n - 2

    def classes(self) -> List[Tuple[int, ...]]:
        return list(itertools.combinations(range(1, self.size + 1), self.n - 1))

    def weight(self, first_block: Sequence[int]) -> Polynomial:
        return self.table.get(frozenset(first_block), Polynomial.zero(self.dim))

    @classmethod
    def constant(cls, n: int, kind: str, value, dim: int) -> "WeightsMu":
        k = 2 * n - 1 if kind == "gpi" else 2 * n - 2
        v = Polynomial.constant(as_rational(value), dim)
        return cls(n, kind, {frozenset(c): v for c in itertools.combinations(range(1, k + 1), n - 1)}, dim)

    def is_nondegenerate_at(self, points: Sequence[Sequence]) -> bool:
        return all(any(w.eval(p) for w in self.table.values()) for p in points)

    def total(self) -> Polynomial:
        out = Polynomial.zero(self.dim)
        for w in self.table.values():
            out = out + w
        return out


# Residuals


def fi_function(s: BracketStructure, f: Sequence[Polynomial], g: Sequence[Polynomial],
                weights: Sequence[Polynomial] | None = None, hvf: VectorField | None = None) -> Polynomial:
    """``X_f {g} - sum_i lambda_i {g_1, .., X_f[g_i], .., g_n}`` (all ``lambda_i = 1`` by default)."""
    if len(f) != s.n - 1 or len(g) != s.n:
        raise ValueError(f"need {s.n - 1} Hamiltonian entries and {s.n} bracket entries")
    x = hvf if hvf is not None else hamiltonian_vf(s, f)
    out = x(s.bracket(g))
    for i in range(s.n):
        xg = x(g[i])
        if xg.is_zero():
            continue
        term = s.bracket(tuple(g[:i]) + (xg,) + tuple(g[i + 1:]))
        if weights is not None:
            term = term * weights[i]
        out = out - term
    return out


def _fai_half(s, h1, h2, f, g, weights):
    out = Polynomial.zero(s.dim)
    for i in range(s.n):
        left = s.bracket((h1, *f, g[i]))
        if left.is_zero():
            continue
        right = s.bracket(tuple(g[:i]) + (h2,) + tuple(g[i + 1:]))
        if right.is_zero():
            continue
        term = left * right
        if weights is not None:
            term = term * weights[i]
        out = out + term
    return out


def fai_residual(s: BracketStructure, h1: Polynomial, h2: Polynomial, f: Sequence[Polynomial],
                 g: Sequence[Polynomial], weights: Sequence[Polynomial] | None = None) -> Polynomial:
    """Left side of the (weighted) algebraic identity plus its ``h1 <-> h2`` image."""
    if len(f) != s.n - 2 or len(g) != s.n:
        raise ValueError(f"need {s.n - 2} f-entries and {s.n} g-entries")
    return _fai_half(s, h1, h2, f, g, weights) + _fai_half(s, h2, h1, f, g, weights)


def sfai_residual(s: BracketStructure, scale: Polynomial, f, g, h1, h2) -> Polynomial:
    """``(lambda - 1) (X_f[h1] X_g[h2] + X_f[h2] X_g[h1])``."""
    xf = hamiltonian_vf(s, f)
    xg = hamiltonian_vf(s, g)
    core = xf(h1) * xg(h2) + xf(h2) * xg(h1)
    return (scale - 1) * core


def gpi_residual(s: BracketStructure, fs: Sequence[Polynomial], mu: WeightsMu | None = None) -> Polynomial:
    """``sum_{S_{2n-1}} sgn mu {f.., {f..}}`` as a shuffle sum."""
    n = s.n
    if len(fs) != 2 * n - 1:
        raise ValueError(f"need {2 * n - 1} entries")
    out = Polynomial.zero(s.dim)
    for a, b, sign in _splits(range(2 * n - 1), n - 1):
        w = mu.weight([i + 1 for i in a]) if mu is not None else None
        if w is not None and w.is_zero():
            continue
        inner = s.bracket([fs[i] for i in b])
        if inner.is_zero():
            continue
        term = s.bracket([fs[i] for i in a] + [inner])
        if term.is_zero():
            continue
        if w is not None:
            term = term * w
        out = out + term if sign > 0 else out - term
    return out.scale(factorial(n - 1) * factorial(n))


def _gapi_half(s, h1, h2, fs, mu, sign_swap=1):
    n = s.n
    out = Polynomial.zero(s.dim)
    for a, b, sign in _splits(range(2 * n - 2), n - 1):
        w = mu.weight([i + 1 for i in a]) if mu is not None else None
        if w is not None and w.is_zero():
            continue
        left = s.bracket([h1] + [fs[i] for i in a])
        if left.is_zero():
            continue
        right = s.bracket([fs[i] for i in b] + [h2])
        if right.is_zero():
            continue
        term = left * right
        if w is not None:
            term = term * w
        out = out + term if sign > 0 else out - term
    return out.scale(factorial(n - 1) ** 2)


def gapi_residual(s: BracketStructure, h1, h2, fs: Sequence[Polynomial], mu: WeightsMu | None = None) -> Polynomial:
    """``sum_{S_{2n-2}} sgn mu {h1, f..}{f.., h2}`` plus its ``h1 <-> h2`` image."""
    if len(fs) != 2 * s.n - 2:
        raise ValueError(f"need {2 * s.n - 2} f-entries")
    return _gapi_half(s, h1, h2, fs, mu) + _gapi_half(s, h2, h1, fs, mu)


def gapi_signed_residual(s: BracketStructure, h1, h2, fs: Sequence[Polynomial]) -> Polynomial:
    """The same sum, required to equal ``(-1)^n`` times its ``h1 <-> h2`` image."""
    if len(fs) != 2 * s.n - 2:
        raise ValueError(f"need {2 * s.n - 2} f-entries")
    swapped = _gapi_half(s, h2, h1, fs, None)
    return _gapi_half(s, h1, h2, fs, None) - (swapped if s.n % 2 == 0 else -swapped)


def mgpi_residual(s: BracketStructure, fs: Sequence[Polynomial], g1: Polynomial) -> Polynomial:
    """Two-sided ``S_{2n-2}`` identity ``(1 + (-1)^n) L = (n - 1) R``.

    ``L`` nests ``n-1`` entries around a bracket ending in ``g1``; ``R`` puts a
    bracket of ``n`` entries first.  These coefficients are the ones forced by
    the fundamental identity (for ``n = 2`` it is the Jacobi identity).
    """
    n = s.n
    if len(fs) != 2 * n - 2:
        raise ValueError(f"need {2 * n - 2} f-entries")
    left = Polynomial.zero(s.dim)
    if n % 2 == 0:
        for a, b, sign in _splits(range(2 * n - 2), n - 1):
            inner = s.bracket([fs[i] for i in b] + [g1])
            if inner.is_zero():
                continue
            term = s.bracket([fs[i] for i in a] + [inner])
            left = left + term if sign > 0 else left - term
        left = left.scale(2 * factorial(n - 1) ** 2)
    right = Polynomial.zero(s.dim)
    for a, b, sign in _splits(range(2 * n - 2), n):
        inner = s.bracket([fs[i] for i in a])
        if inner.is_zero():
            continue
        term = s.bracket([inner] + [fs[i] for i in b] + [g1])
        right = right + term if sign > 0 else right - term
    right = right.scale((n - 1) * factorial(n) * factorial(n - 2))
    return left - right


def _mgapi_half(s, h1, h2, fs, g1):
    n = s.n
    out = Polynomial.zero(s.dim)
    for a, b, sign in _splits(range(2 * n - 3), n - 1):
        left = s.bracket([h1] + [fs[i] for i in a])
        if left.is_zero():
            continue
        right = s.bracket([fs[i] for i in b] + [g1, h2])
        term = left * right
        out = out + term if sign > 0 else out - term
    return out.scale(factorial(n - 1) * factorial(n - 2))


def mgapi_residual(s: BracketStructure, h1, h2, fs: Sequence[Polynomial], g1: Polynomial) -> Polynomial:
    if s.n < 2 or len(fs) != 2 * s.n - 3:
        raise ValueError(f"need {2 * s.n - 3} f-entries")
    return _mgapi_half(s, h1, h2, fs, g1) + _mgapi_half(s, h2, h1, fs, g1)


# Checkers


def _need_n(s: BracketStructure, low: int, what: str) -> None:
    if s.n < low:
        raise ValueError(f"{what} needs n >= {low}, got n = {s.n}")


def check_fi(s: BracketStructure, strategy: EnumerationStrategy | None = None) -> Verdict:
    """Fundamental identity over entry tuples ``(f_1..f_{n-1}, g_1..g_n)``.

    The default strategy adds degree-2 products in the slot ``f_{n-1}``, the
    substitution that turns a failure of the algebraic identity into a failure
    of this one.
    """
    _need_n(s, 2, "the fundamental identity")
    n = s.n
    strategy = _default(strategy, "coordinates-plus-products")
    layout = Layout(((ANTI, n - 1), (ANTI, n)), product_block=0)
    cache: Dict[Tuple, VectorField] = {}

    def residual(t):
        f, g = t[: n - 1], t[n - 1:]
        if f not in cache:
            cache.clear()
            cache[f] = hamiltonian_vf(s, f)
        return fi_function(s, f, g, hvf=cache[f])

    return _run("fi", layout, residual, s.dim, strategy)


def _fai_layout(n: int, weighted: bool) -> Layout:
    return Layout(((SYM, 2), (ANTI, n - 2), (FREE if weighted else ANTI, n)), product_block=2)


def _fai_split(t, n):
    return t[0], t[1], t[2: n], t[n:]


def check_fai(s: BracketStructure, strategy: EnumerationStrategy | None = None) -> Verdict:
    """Fundamental algebraic identity over ``(h1, h2, f_1..f_{n-2}, g_1..g_n)``."""
    _need_n(s, 2, "the algebraic identity")
    n = s.n
    strategy = _default(strategy, "coordinates")
    return _run("fai", _fai_layout(n, False),
                lambda t: fai_residual(s, *_fai_split(t, n)), s.dim, strategy)


def check_fahi(s: BracketStructure, strategy: EnumerationStrategy | None = None) -> Verdict:
    """The algebraic identity on linearly dependent tuples (some coordinate repeated)."""
    _need_n(s, 2, "the hyper-identity")
    n = s.n
    strategy = _default(strategy, "coordinates-with-repeat")
    return _run("fahi", _fai_layout(n, False),
                lambda t: fai_residual(s, *_fai_split(t, n)), s.dim, strategy)


def _lambda_details(lam: WeightsLambda, points) -> Dict:
    det = {"lambda_average_zero": lam.average_is_zero()}
    if points:
        det["lambda_nondegenerate_at_points"] = lam.is_nondegenerate_at(points)
    return det


def _check_lambda(s: BracketStructure, lam: WeightsLambda) -> None:
    if len(lam) != s.n:
        raise ValueError(f"need {s.n} weights, got {len(lam)}")


def check_weighted_fai(s: BracketStructure, lam: WeightsLambda, strategy: EnumerationStrategy | None = None,
                       points: Sequence[Sequence] = ()) -> Verdict:
    """Weighted algebraic identity; the ``g`` block is walked as ordered tuples."""
    _need_n(s, 2, "the weighted algebraic identity")
    _check_lambda(s, lam)
    n = s.n
    strategy = _default(strategy, "coordinates")
    return _run("wfai", _fai_layout(n, True),
                lambda t: fai_residual(s, *_fai_split(t, n), weights=lam.lambdas),
                s.dim, strategy, _lambda_details(lam, points))


def check_weighted_fahi(s: BracketStructure, lam: WeightsLambda, strategy: EnumerationStrategy | None = None,
                        points: Sequence[Sequence] = ()) -> Verdict:
    _need_n(s, 2, "the weighted hyper-identity")
    _check_lambda(s, lam)
    n = s.n
    strategy = _default(strategy, "coordinates-with-repeat")
    return _run("wfahi", _fai_layout(n, True),
                lambda t: fai_residual(s, *_fai_split(t, n), weights=lam.lambdas),
                s.dim, strategy, _lambda_details(lam, points))


def check_scaled_fai(s: BracketStructure, scale, strategy: EnumerationStrategy | None = None) -> Verdict:
    """``(lambda - 1) X_f[h1] X_g[h2] = -(h1 <-> h2)`` over ``(f, g, h1, h2)``."""
    _need_n(s, 2, "the scaled identity")
    n = s.n
    if not isinstance(scale, Polynomial):
        scale = Polynomial.constant(as_rational(scale), s.dim)
    strategy = _default(strategy, "coordinates")
    layout = Layout(((ANTI, n - 1), (ANTI, n - 1), (SYM, 2)), product_block=2)
    k = n - 1
    return _run("sfai", layout,
                lambda t: sfai_residual(s, scale, t[:k], t[k: 2 * k], t[2 * k], t[2 * k + 1]),
                s.dim, strategy, {"scale": scale})


def check_gpi(s: BracketStructure, strategy: EnumerationStrategy | None = None) -> Verdict:
    """Generalized Poisson identity over ``2n-1`` entries."""
    n = s.n
    strategy = _default(strategy, "coordinates-plus-products")
    layout = Layout(((ANTI, 2 * n - 1),), product_block=0)
    return _run("gpi", layout, lambda t: gpi_residual(s, t), s.dim, strategy)


def check_gapi(s: BracketStructure, strategy: EnumerationStrategy | None = None) -> Verdict:
    """Generalized algebraic Poisson identity over ``(h1, h2, f_1..f_{2n-2})``."""
    _need_n(s, 2, "the algebraic Poisson identity")
    n = s.n
    strategy = _default(strategy, "coordinates-plus-products")
    layout = Layout(((SYM, 2), (ANTI, 2 * n - 2)), product_block=1)
    return _run("gapi", layout, lambda t: gapi_residual(s, t[0], t[1], t[2:]), s.dim, strategy)


def check_gapi_signed(s: BracketStructure, strategy: EnumerationStrategy | None = None) -> Verdict:
    """The ``(-1)^n``-signed pairwise form of the algebraic Poisson identity."""
    _need_n(s, 2, "the signed algebraic Poisson identity")
    n = s.n
    strategy = _default(strategy, "coordinates-plus-products")
    layout = Layout(((SYM, 2), (ANTI, 2 * n - 2)), product_block=1)
    return _run("gapi-signed", layout, lambda t: gapi_signed_residual(s, t[0], t[1], t[2:]), s.dim, strategy)


def check_mgpi(s: BracketStructure, strategy: EnumerationStrategy | None = None) -> Verdict:
    """Two-sided identity over ``(f_1..f_{2n-2}, g_1)``."""
    _need_n(s, 2, "the two-sided identity")
    n = s.n
    strategy = _default(strategy, "coordinates-plus-products")
    layout = Layout(((ANTI, 2 * n - 2), (FREE, 1)), product_block=0)
    return _run("mgpi", layout, lambda t: mgpi_residual(s, t[:-1], t[-1]), s.dim, strategy)


def check_mgapi(s: BracketStructure, strategy: EnumerationStrategy | None = None) -> Verdict:
    """Algebraic consequence of the two-sided identity over ``(h1, h2, f_1..f_{2n-3}, g_1)``.

    Only meaningful for ``n >= 3``: for bivectors it fails on every
    nondegenerate Poisson structure.
    """
    _need_n(s, 3, "the two-sided algebraic identity")
    n = s.n
    strategy = _default(strategy, "coordinates")
    layout = Layout(((SYM, 2), (ANTI, 2 * n - 3), (FREE, 1)), product_block=1)
    return _run("mgapi", layout, lambda t: mgapi_residual(s, t[0], t[1], t[2:-1], t[-1]), s.dim, strategy)


def contraction_pairs(pi: MultiVectorField, at: Sequence | None = None):
    """Yield ``(a, b, (i_{dx^a} pi) ^ (i_{dx^b} pi))`` for ``a <= b``."""
    field = pi.frozen_at(at) if at is not None else pi
    dim = pi.dim
    contr = [interior_form(DifferentialForm.basis(dim, (a,)), field) for a in range(1, dim + 1)]
    for a in range(dim):
        for b in range(a, dim):
            yield a + 1, b + 1, wedge(contr[a], contr[b])


def check_pairwise_decomp_identity(s: BracketStructure, at: Sequence | None = None) -> Verdict:
    """``(i_alpha pi) ^ (i_beta pi) = 0`` for all coordinate 1-forms, symbolically or at a point."""
    checked = 0
    details = {"point": [as_rational(v) for v in at]} if at is not None else {}
    for a, b, w in contraction_pairs(s.pi, at):
        checked += 1
        if not w.is_zero():
            xs = variables(s.dim)
            return Verdict("gapi2", False, checked, Witness((xs[a - 1], xs[b - 1]), w), details)
    return Verdict("gapi2", True, checked, None, details)


def check_involution_sn(s: BracketStructure) -> Verdict:
    """``(pi, pi)_SN = 0``."""
    r = schouten_nijenhuis(s.pi, s.pi)
    if r.is_zero():
        return Verdict("sn-involution", True, 1)
    return Verdict("sn-involution", False, 1, Witness((), r))


def _check_mu(s: BracketStructure, mu: WeightsMu, kind: str) -> None:
    if mu.kind != kind:
        raise ValueError(f"expected {kind} weights, got {mu.kind}")
    if mu.n != s.n:
        raise ValueError(f"weights are for n = {mu.n}, structure has n = {s.n}")
    if mu.dim != s.dim:
        raise ValueError("weight dimension mismatch")


def _mu_details(mu: WeightsMu, points) -> Dict:
    det = {"mu_total_zero": mu.total().is_zero()}
    if points:
        det["mu_nondegenerate_at_points"] = mu.is_nondegenerate_at(points)
    return det


def check_weighted_gpi(s: BracketStructure, mu: WeightsMu, strategy: EnumerationStrategy | None = None,
                       points: Sequence[Sequence] = ()) -> Verdict:
    """Weighted generalized Poisson identity; entries walked as ordered tuples."""
    _check_mu(s, mu, "gpi")
    n = s.n
    strategy = _default(strategy, "coordinates")
    layout = Layout(((FREE, 2 * n - 1),), product_block=0)
    return _run("wgpi", layout, lambda t: gpi_residual(s, t, mu), s.dim, strategy, _mu_details(mu, points))


def check_weighted_gapi(s: BracketStructure, mu: WeightsMu, strategy: EnumerationStrategy | None = None,
                        points: Sequence[Sequence] = ()) -> Verdict:
    _check_mu(s, mu, "gapi")
    n = s.n
    strategy = _default(strategy, "coordinates")
    layout = Layout(((SYM, 2), (FREE, 2 * n - 2)), product_block=1)
    return _run("wgapi", layout, lambda t: gapi_residual(s, t[0], t[1], t[2:], mu), s.dim, strategy,
                _mu_details(mu, points))


def wgpi_slice_weights(mu: WeightsMu, k: int) -> WeightsMu:
    """Algebraic-identity weights obtained by putting a product in entry ``k``.

    Keeps the permutations that send the last slot to ``k``; positions are
    relabelled order-preservingly and the sign ``(-1)^(2n-1-k)`` converts
    ``S_{2n-1}`` parity into ``S_{2n-2}`` parity.  The bilinear part of the
    substituted identity equals ``n (-1)^(n-1)`` times the resulting
    weighted algebraic identity.
    """
    if mu.kind != "gpi":
        raise ValueError("slices are taken from gpi weights")
    size = mu.size
    if not 1 <= k <= size:
        raise ValueError(f"slot {k} out of range 1..{size}")
    relabel = {old: new for new, old in enumerate((i for i in range(1, size + 1) if i != k), start=1)}
    sign = -1 if (size - k) % 2 else 1
    table = {}
    for key, w in mu.table.items():
        if k in key:
            continue
        table[frozenset(relabel[i] for i in key)] = w.scale(sign)
    return WeightsMu(mu.n, "gapi", table, mu.dim)


_N3_FAI_CLASSES = ((1, 2), (1, 3), (1, 4))


def gapi_weights_to_fai_weights(mu: WeightsMu) -> Tuple[WeightsLambda, bool]:
    """Rewrite n = 3 algebraic Poisson weights as algebraic-identity weights.

    With entries ``(h1, h2, F1..F4)``, the weighted algebraic Poisson residual
    equals ``4`` times the weighted algebraic residual at
    ``(h1, h2, f1 = F1, g = (F2, F3, F4))`` with
    ``lambda_i = mu(A_i) + mu(complement of A_i)``, ``A_i = {1, i+1}``.
    The flag is True when every ``lambda_i`` vanishes identically, which
    happens exactly when ``mu`` is odd under swapping the two blocks.
    """
    if mu.kind != "gapi" or mu.n != 3:
        raise ValueError("the rewrite is defined for n = 3 algebraic Poisson weights")
    full = {1, 2, 3, 4}
    lams = tuple(mu.weight(a) + mu.weight(full - set(a)) for a in _N3_FAI_CLASSES)
    lam = WeightsLambda(lams)
    return lam, lam.is_identically_zero()


def block_swap_odd(mu: WeightsMu) -> bool:
    """True when ``mu`` changes sign under exchanging the two blocks of ``n-1`` slots."""
    if mu.kind != "gapi":
        raise ValueError("block swap is defined for algebraic Poisson weights")
    full = frozenset(range(1, mu.size + 1))
    return all((mu.weight(c) + mu.weight(full - frozenset(c))).is_zero() for c in mu.classes())


# Pointwise integrability


def _nested_field(s: BracketStructure, ordered: Sequence[Polynomial]) -> VectorField:
    n = s.n
    inner = hamiltonian_vf(s, ordered[: n - 1])(ordered[n - 1])
    return hamiltonian_vf(s, [inner, *ordered[n:]])


def nested_fields(s: BracketStructure, fs: Sequence[Polynomial]) -> List[VectorField]:
    """The nested Hamiltonian vector fields for all orderings of ``2n-2`` functions."""
    n = s.n
    if len(fs) != 2 * n - 2:
        raise ValueError(f"need {2 * n - 2} functions")
    seen: Dict[Tuple, VectorField] = {}
    out = []
    for order in itertools.permutations(range(2 * n - 2)):
        key = tuple(fs[i] for i in order)
        if key not in seen:
            seen[key] = _nested_field(s, key)
        out.append(seen[key])
    return out


def nested_distribution_at(s: BracketStructure, p: Sequence, fs: Sequence[Polynomial]) -> List[Tuple[Fraction, ...]]:
    """A maximal independent subset of the nested fields evaluated at ``p``."""
    pt = tuple(as_rational(v) for v in p)
    values = []
    for x in nested_fields(s, fs):
        v = x.at(pt)
        if any(v):
            values.append(v)
    keep = linalg.independent_subset(values)
    return [values[i] for i in keep]


def _constant_field(values, dim) -> VectorField:
    return VectorField([Polynomial.constant(v, dim) for v in values])


def check_nested_integrability_at(s: BracketStructure, p: Sequence, f: Sequence[Polynomial],
                                  g: Sequence[Polynomial]) -> Verdict:
    """Pointwise test that ``[X_f, X_g](p)`` lies in the nested distribution at ``p``.

    A necessary condition only: the distribution is spanned over functions,
    while this tests a single point.
    """
    n = s.n
    if len(f) != n - 1 or len(g) != n - 1:
        raise ValueError(f"need two Hamiltonians of {n - 1} entries")
    pt = tuple(as_rational(v) for v in p)
    comm = lie_bracket(hamiltonian_vf(s, f), hamiltonian_vf(s, g)).at(pt)
    span = nested_distribution_at(s, pt, list(f) + list(g))
    details = {"pointwise": True, "point": list(pt), "span_dimension": len(span)}
    if linalg.solve_in_span(span, comm) is not None:
        return Verdict("nested-at", True, 1, None, details)
    return Verdict("nested-at", False, 1, Witness(tuple(f) + tuple(g), _constant_field(comm, s.dim)), details)


def omitted_entry_fields(s: BracketStructure, fs: Sequence[Polynomial]) -> List[VectorField]:
    return [hamiltonian_vf(s, list(fs[:j]) + list(fs[j + 1:])) for j in range(len(fs))]


def check_casimir_integrability_at(s: BracketStructure, p: Sequence, fs: Sequence[Polynomial]) -> Verdict:
    """If ``{f_1..f_n}`` is a Casimir, the omitted-entry fields must commute into their span at ``p``."""
    n = s.n
    if len(fs) != n:
        raise ValueError(f"need {n} functions")
    if not is_casimir(s, s.bracket(fs)):
        raise NotApplicable("the bracket of the given functions is not a Casimir function")
    pt = tuple(as_rational(v) for v in p)
    fields = omitted_entry_fields(s, fs)
    span_vals = [x.at(pt) for x in fields]
    checked = 0
    for j, k in itertools.combinations(range(n), 2):
        checked += 1
        comm = lie_bracket(fields[j], fields[k]).at(pt)
        if linalg.solve_in_span(span_vals, comm) is None:
            details = {"pointwise": True, "point": list(pt), "pair": [j + 1, k + 1]}
            return Verdict("casimir-at", False, checked, Witness(tuple(fs), _constant_field(comm, s.dim)), details)
    return Verdict("casimir-at", True, checked, None, {"pointwise": True, "point": list(pt)})


# Registry used by the CLI and the battery


def reproduce_residual(identity: str, s: BracketStructure, entries: Sequence[Polynomial], **options):
    """Recompute the residual of a witness tuple for a tuple-based identity."""
    n = s.n
    t = tuple(entries)
    if identity == "fi":
        return fi_function(s, t[: n - 1], t[n - 1:])
    if identity in ("fai", "fahi"):
        return fai_residual(s, *_fai_split(t, n))
    if identity in ("wfai", "wfahi"):
        return fai_residual(s, *_fai_split(t, n), weights=options["weights"].lambdas)
    if identity == "sfai":
        k = n - 1
        scale = options["scale"]
        if not isinstance(scale, Polynomial):
            scale = Polynomial.constant(as_rational(scale), s.dim)
        return sfai_residual(s, scale, t[:k], t[k: 2 * k], t[2 * k], t[2 * k + 1])
    if identity == "gpi":
        return gpi_residual(s, t)
    if identity == "wgpi":
        return gpi_residual(s, t, options["mu"])
    if identity == "gapi":
        return gapi_residual(s, t[0], t[1], t[2:])
    if identity == "wgapi":
        return gapi_residual(s, t[0], t[1], t[2:], options["mu"])
    if identity == "gapi-signed":
        return gapi_signed_residual(s, t[0], t[1], t[2:])
    if identity == "mgpi":
        return mgpi_residual(s, t[:-1], t[-1])
    if identity == "mgapi":
        return mgapi_residual(s, t[0], t[1], t[2:-1], t[-1])
    raise ValueError(f"no tuple residual for identity {identity!r}")
