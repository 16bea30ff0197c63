"""The KZ system for the natural representation of S_n.

Indices in the public functions are 1-based, matching the usual
notation ``P(i, j)`` for the transposition matrix and ``P_k = P(1, k+1)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Matrix
from .rational_core import RationalFunction, as_rational, format_rational

__all__ = [
    "InvalidSystemError",
    "KZSystem",
    "SpectralData",
    "a_matrix",
    "p_k",
    "parse_system",
    "perm_matrix",
    "s_matrix",
    "spectral_data",
    "t_coeff",
    "t_matrix",
    "weighted_p_sum",
]

ONE, ZERO = Fraction(1), Fraction(0)


class InvalidSystemError(ValueError):
    """Input that violates a KZ system invariant."""


@dataclass(frozen=True)
class KZSystem:
    """``dW/dz = rho * sum_k P_k / (z - z_k) * W`` with ``n - 1`` distinct poles."""

    n: int
    points: tuple[Fraction, ...]
    rho: int = -1

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise InvalidSystemError("n must be an integer")
        if self.n < 3:
            raise InvalidSystemError(f"n must be at least 3 (got {self.n})")
        pts = tuple(as_rational(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) != self.n - 1:
            raise InvalidSystemError(f"expected {self.n - 1} points for n={self.n}, got {len(pts)}")
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if pts[i] == pts[j]:
                    raise InvalidSystemError(
                        f"points must be pairwise distinct (indices {i + 1},{j + 1})"
                    )
        if self.rho not in (1, -1):
            raise InvalidSystemError(f"rho must be +1 or -1 (got {self.rho})")

    def with_rho(self, rho: int) -> "KZSystem":
        return KZSystem(self.n, self.points, rho)

    def to_json(self) -> dict:
        return {"n": self.n, "points": [format_rational(p) for p in self.points], "rho": self.rho}


def parse_system(doc) -> KZSystem:
    """Build a :class:`KZSystem` from a JSON string or an already-decoded dict."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InvalidSystemError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidSystemError("system document must be a JSON object")
    missing = [k for k in ("n", "points") if k not in doc]
    if missing:
        raise InvalidSystemError(f"missing field(s): {', '.join(missing)}")
    pts = doc["points"]
    if not isinstance(pts, list) or not all(isinstance(p, str) for p in pts):
        raise InvalidSystemError('points must be a list of "p/q" strings')
    try:
        points = tuple(as_rational(p) for p in pts)
    except ValueError as exc:
        raise InvalidSystemError(str(exc)) from None
    return KZSystem(doc["n"], points, doc.get("rho", -1))


def perm_matrix(n: int, i: int, j: int) -> Matrix:
    """Matrix of the transposition ``(i j)`` in the natural representation."""
    if i == j:
        raise ValueError("a transposition needs two distinct indices")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"indices ({i},{j}) out of range 1..{n}")
    i, j = i - 1, j - 1
    rows = [[ZERO] * n for _ in range(n)]
    for k in range(n):
        if k not in (i, j):
            rows[k][k] = ONE
    rows[i][j] = rows[j][i] = ONE
    return Matrix(rows)


def p_k(n: int, k: int) -> Matrix:
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} out of range 1..{n - 1}")
    return perm_matrix(n, 1, k + 1)


def s_matrix(n: int) -> Matrix:
    """Bordered matrix with ``2-n`` in the corner and ones on the border."""
    rows = [[ZERO] * n for _ in range(n)]
    rows[0][0] = Fraction(2 - n)
    for k in range(1, n):
        rows[0][k] = rows[k][0] = ONE
    return Matrix(rows)


def t_matrix(n: int) -> Matrix:
    """``T = sum_k P_k``; also equal to ``(n-2) I + S``."""
    if n < 3:
        raise ValueError("n must be at least 3")
    t = p_k(n, 1)
    for k in range(2, n):
        t = t + p_k(n, k)
    return t


def t_coeff(sys: KZSystem, p: int) -> Matrix:
    """``T_p = sum_k P_k z_k**(p+1)``, the coefficient of ``xi**p`` at infinity."""
    if p < 0:
        raise ValueError("p must be non-negative")
    return weighted_p_sum(sys.n, [z ** (p + 1) for z in sys.points])


def weighted_p_sum(n: int, weights: Sequence[Fraction]) -> Matrix:
    """``sum_k w_k P_k`` for arbitrary weights (no distinctness required)."""
    rows = [[ZERO] * n for _ in range(n)]
    for k, w in enumerate(weights, start=1):
        rows[0][k] += w
        rows[k][0] += w
        for d in range(1, n):
            if d != k:
                rows[d][d] += w
    return Matrix(rows)


def a_matrix(sys: KZSystem) -> Matrix:
    """``A(z) = sum_k P_k / (z - z_k)`` as a matrix of rational functions."""
    n = sys.n
    poles = [RationalFunction.simple_pole(z) for z in sys.points]
    rows = [[RationalFunction() for _ in range(n)] for _ in range(n)]
    for k, f in enumerate(poles, start=1):
        rows[0][k] = rows[0][k] + f
        rows[k][0] = rows[k][0] + f
        for d in range(1, n):
            if d != k:
                rows[d][d] = rows[d][d] + f
    return Matrix(rows)


@dataclass(frozen=True)
class SpectralData:
    """Eigen-structure of ``T``: eigenvalues ``n-1``, ``n-2``, ``-1``."""

    n: int
    eigenvalues: tuple[Fraction, Fraction, Fraction]
    v1: tuple[Fraction, ...]
    v2_basis: tuple[tuple[Fraction, ...], ...]
    v3: tuple[Fraction, ...]
    n_vectors: tuple[tuple[Fraction, ...], ...]


def spectral_data(n: int) -> SpectralData:
    if n < 3:
        raise ValueError("n must be at least 3")
    v1 = tuple([ONE] * n)
    v3 = tuple([Fraction(n - 1)] + [-ONE] * (n - 1))
    v2 = []
    for i in range(1, n - 1):
        v = [ZERO] * n
        v[i], v[i + 1] = ONE, -ONE
        v2.append(tuple(v))
    off = Fraction(-2, n - 2)
    nvec = []
    for i in range(1, n):
        nvec.append(tuple(ONE if j in (0, i) else off for j in range(n)))
    return SpectralData(
        n=n,
        eigenvalues=(Fraction(n - 1), Fraction(n - 2), Fraction(-1)),
        v1=v1,
        v2_basis=tuple(v2),
        v3=v3,
        n_vectors=tuple(nvec),
    )
