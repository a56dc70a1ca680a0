"""Exact linear algebra over the rationals.

Vectors and matrices are plain lists of :class:`fractions.Fraction`.  Everything
here is deterministic: elimination always pivots on the first nonzero entry of
the leftmost remaining column.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, decimal strings and floats to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[to_fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = as_matrix(rows)
    if not m:
        return [], []
    n_cols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def row_space_basis(rows: Sequence[Sequence]) -> Matrix:
    """Basis of the span of ``rows``: the nonzero rows of the RREF."""
    return rref(rows)[0]


def nullspace(rows: Sequence[Sequence], n_cols: int | None = None) -> Matrix:
    """Basis of ``{x : A x = 0}`` with one vector per free column."""
    if n_cols is None:
        if not rows:
            raise ValueError("n_cols is required for an empty matrix")
        n_cols = len(rows[0])
    reduced, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis: Matrix = []
    for f in free:
        x = [Fraction(0)] * n_cols
        x[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    a, b = as_matrix(a), as_matrix(b)
    if not a:
        return []
    inner = len(b)
    n = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(n)] for i in range(len(a))]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*as_matrix(a))]


def _normalize(coeffs: tuple[Fraction, ...], rhs: Fraction) -> tuple[tuple[Fraction, ...], Fraction]:
    scale = max((abs(c) for c in coeffs), default=Fraction(0))
    if scale == 0:
        return coeffs, rhs
    return tuple(c / scale for c in coeffs), rhs / scale


def span_contains_positive_vector(basis: Sequence[Sequence]) -> bool:
    """Decide whether the span of ``basis`` meets the open positive orthant.

    By scaling, this is equivalent to feasibility of ``sum_j lam_j b_j >= 1``
    componentwise, which is decided exactly by Fourier-Motzkin elimination on
    the coefficients ``lam``.
    """
    basis = as_matrix(basis)
    if not basis:
        return False
    d = len(basis)
    dim = len(basis[0])
    # constraint: coeffs . lam >= rhs
    system = {_normalize(tuple(basis[j][i] for j in range(d)), Fraction(1)) for i in range(dim)}
    for var in reversed(range(d)):
        pos, neg, rest = [], [], set()
        for coeffs, rhs in system:
            c = coeffs[var]
            if c > 0:
                pos.append((coeffs, rhs))
            elif c < 0:
                neg.append((coeffs, rhs))
            else:
                rest.add((coeffs[:var], rhs))
        for cp, rp in pos:
            for cn, rn in neg:
                a, b = cp[var], -cn[var]
                combined = tuple(x / a + y / b for x, y in zip(cp[:var], cn[:var]))
                rest.add(_normalize(combined, rp / a + rn / b))
        system = {_normalize(c, r) for c, r in rest}
    return all(rhs <= 0 for _, rhs in system)
