"""Exact Gaussian elimination over the rationals.

Matrices are plain lists of rows of :class:`~fractions.Fraction`.  Pivots are
chosen as the first nonzero entry in column order, which makes every result
(bases, witnesses) deterministic.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List[Fraction]]


def _copy(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    m = _copy(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def row_space_basis(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    return rref(rows, ncols)[0]


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of ``{v : M v = 0}`` with one free variable set to 1 per basis vector."""
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def independent_subset(vectors: Sequence[Sequence]) -> List[int]:
    """Indices of a maximal linearly independent subset, greedy in input order."""
    kept: List[int] = []
    basis: Matrix = []
    for i, v in enumerate(vectors):
        trial = basis + [list(v)]
        if rank(trial) > len(basis):
            basis = row_space_basis(trial)
            kept.append(i)
    return kept


def solve_in_span(vectors: Sequence[Sequence], target: Sequence) -> List[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i vectors[i] == target``, or None."""
    n = len(target)
    if not vectors:
        return [] if not any(target) else None
    # columns are the spanning vectors; augmented with target
    k = len(vectors)
    aug = [[Fraction(vectors[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    reduced, pivots = rref(aug, k + 1)
    if k in pivots:
        return None
    coeffs = [Fraction(0)] * k
    for row, p in zip(reduced, pivots):
        coeffs[p] = row[k]
    return coeffs


def det(matrix: Sequence[Sequence]) -> Fraction:
    m = _copy(matrix)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    sign = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    out = sign
    for i in range(n):
        out *= m[i][i]
    return out


def inverse(matrix: Sequence[Sequence]) -> Matrix:
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    reduced, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in reduced[:n]]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    return [[sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]
