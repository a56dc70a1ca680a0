"""Univariate signomials ``sum_i c_i A**p_i`` with real exponents, and their positive roots.

Roots are isolated completely.  After the substitution ``A = exp(u)`` a
signomial becomes an exponential sum ``g(u) = sum_i c_i exp(p_i u)``.  Pick
``gamma`` strictly between the two exponents at the first sign change; the
function ``h(u) = exp(-gamma u) g(u)`` has the same zeros as ``g`` and its
derivative is again an exponential sum, with one sign change fewer.  The zeros
of ``h'`` are found recursively, ``h`` is monotone between consecutive ones,
and each monotone piece holds at most one root, located by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import NumericFailure

# relative size below which |h| at a critical point counts as a tangential zero
_TANGENT_RTOL = 1e-12
# log of the smallest normal and largest finite double
_U_MIN = math.log(np.finfo(float).tiny)
_U_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class Signomial:
    """Terms ``(coefficient, exponent)``, exponents strictly increasing, no zero coefficients."""

    terms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        exps = [p for _, p in self.terms]
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise ValueError("exponents must be strictly increasing")
        if any(c == 0 for c, _ in self.terms):
            raise ValueError("zero coefficients are not stored")
        if not all(math.isfinite(c) and math.isfinite(p) for c, p in self.terms):
            raise ValueError("coefficients and exponents must be finite")

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[float, float]]) -> Signomial:
        """Merge like exponents, drop zero coefficients and sort."""
        merged: dict[float, float] = {}
        for c, p in terms:
            p = float(p)
            merged[p] = merged.get(p, 0.0) + float(c)
        return cls(tuple((c, p) for p, c in sorted(merged.items()) if c != 0))

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(c for c, _ in self.terms)

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __call__(self, A):
        A = np.asarray(A, dtype=float)
        return sum(c * A ** p for c, p in self.terms)

    def sign_at(self, A: float) -> int:
        """Sign at ``A > 0``, computed without overflow."""
        return _sign_log(np.array(self.coefficients), np.array(self.exponents), math.log(A))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for c, p in self.terms:
            mono = "" if p == 0 else ("A" if p == 1 else f"A^{p:g}")
            mag = abs(c)
            body = mono if (mag == 1 and mono) else (f"{mag:g}" + (f"*{mono}" if mono else ""))
            out.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(out)
        return text[2:] if text.startswith("+ ") else "-" + text[1:]


def sign_changes(coefficients: Iterable[float]) -> int:
    signs = [c > 0 for c in coefficients if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def descartes_positive_root_count(s: Signomial) -> tuple[int, bool]:
    """Sign changes in ascending-exponent order, and whether that count is exact.

    The generalised rule of signs holds for real exponents: the number of
    positive roots (with multiplicity) is at most the sign changes and has the
    same parity, so 0 and 1 changes are exact counts.
    """
    if not s.terms:
        raise ValueError("the zero signomial has no finite root count")
    v = sign_changes(s.coefficients)
    return v, v <= 1


def _weighted_terms(c: np.ndarray, p: np.ndarray, u: float) -> tuple[np.ndarray, float]:
    e = p * u
    w = np.exp(e - e.max())
    return c * w, float(np.abs(c * w).sum())


def _sign_log(c: np.ndarray, p: np.ndarray, u: float) -> int:
    vals, _ = _weighted_terms(c, p, u)
    total = math.fsum(vals)
    return (total > 0) - (total < 0)


def _is_tangent_zero(c: np.ndarray, p: np.ndarray, u: float) -> bool:
    vals, scale = _weighted_terms(c, p, u)
    return abs(math.fsum(vals)) <= _TANGENT_RTOL * scale


def _root_window(c: np.ndarray, p: np.ndarray) -> tuple[float, float]:
    """An interval (lo, hi) in u containing every real zero of sum c_i exp(p_i u)."""
    a = np.abs(c)
    hi = 0.0
    rest = a[:-1].sum()
    if rest > 0:
        hi = max(hi, math.log(rest / a[-1]) / (p[-1] - p[-2]))
    lo = 0.0
    rest = a[1:].sum()
    if rest > 0:
        lo = min(lo, math.log(a[0] / rest) / (p[1] - p[0]))
    return lo - 1.0, hi + 1.0


def _bisect(c, p, a: float, b: float, sa: int) -> float:
    """Shrink [a, b] (in u) around the sign change until floats are exhausted."""
    for _ in range(2000):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        sm = _sign_log(c, p, mid)
        if sm == 0:
            return mid
        if sm == sa:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def _zeros_log(c: np.ndarray, p: np.ndarray) -> list[float]:
    """All real zeros u of sum c_i exp(p_i u), ascending."""
    if len(c) < 2 or sign_changes(c) == 0:
        return []
    j = next(i for i in range(len(c) - 1) if (c[i] > 0) != (c[i + 1] > 0))
    gamma = 0.5 * (p[j] + p[j + 1])
    q = p - gamma
    # zeros of h(u) = exp(-gamma u) g(u) coincide with those of g; h' = sum c q exp(q u)
    critical = _zeros_log(c * q, q)
    lo, hi = _root_window(c, p)
    points = [lo] + [u for u in critical if lo < u < hi] + [hi]
    roots: list[float] = []
    signs = [_sign_log(c, q, u) for u in points]
    if signs[0] == 0 or signs[-1] == 0:
        # the extreme terms dominate outside the window, so this is cancellation
        raise NumericFailure("exponents are too close together to separate the terms numerically")
    for k, u in enumerate(points):
        if signs[k] == 0 or (0 < k < len(points) - 1 and _is_tangent_zero(c, q, u)):
            roots.append(u)
    for k in range(len(points) - 1):
        sa, sb = signs[k], signs[k + 1]
        if sa * sb < 0:
            roots.append(_bisect(c, q, points[k], points[k + 1], sa))
    roots.sort()
    return roots


def positive_roots(s: Signomial, tol: float = 1e-9) -> list[float]:
    """All distinct positive roots of ``s``, ascending, each accurate to ``tol``.

    Brackets are refined to float precision, which is tighter than any sane
    ``tol``; roots closer than ``tol`` are reported once.  Raises
    NumericFailure when a root is not representable as a normal double or
    when exponents are too close to tell the terms apart.  A root of even multiplicity
    is found when the signomial vanishes (relative to its term magnitudes) at
    the corresponding critical point.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not s.terms:
        raise ValueError("the zero signomial vanishes identically")
    c = np.array(s.coefficients, dtype=float)
    p = np.array(s.exponents, dtype=float)

    roots: list[float] = []
    for u in _zeros_log(c, p):
        if not _U_MIN <= u <= _U_MAX:
            raise NumericFailure(f"a positive root lies at exp({u:.6g}), outside the floating-point range")
        A = math.exp(u)
        if roots and A - roots[-1] <= tol:
            continue
        roots.append(A)
    return roots
