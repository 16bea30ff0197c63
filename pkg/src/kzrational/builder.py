"""Rational solutions of the KZ system in partial-fraction form.

For ``rho = -1`` the ``n`` columns of a fundamental matrix come from
three seeds of the recurrence at infinity:

* ``Y_1``: ``G_{n-1} = V1`` with all lower coefficients zero,
* ``Y_j`` (``2 <= j <= n-1``): ``G_{n-2} = col[0, a]`` with ``a_{j-1} = 1``,
  ``a_{n-1} = -1``,
* ``Y_n``: ``G_{-1} = V3``.

The recurrence fills in ``G_p`` up to ``p = n-1``; the residues ``L_k``
then solve the Vandermonde system ``sum_k z_k**(p-1) L_k = G_p`` and the
polynomial part is ``G_0 + z G_{-1}``.  The ``rho = +1`` fundamental
matrix is the inverse transpose of the ``rho = -1`` one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Matrix, determinant, inverse, lin_comb, vandermonde_residues
from .model import KZSystem, spectral_data
from .rational_core import PoleError, Polynomial, RationalFunction, as_rational
from .series import SeriesCoefficients, run_recurrence

__all__ = [
    "ConstructionError",
    "FundamentalSolution",
    "PartialFractionSolution",
    "build_fundamental",
    "build_y1",
    "build_yj",
    "build_yn",
    "evaluate",
    "rho_plus_fundamental",
    "yj_seed",
]


class ConstructionError(AssertionError):
    """An internal invariant of the construction failed."""


@dataclass(frozen=True)
class PartialFractionSolution:
    """``Y(z) = sum_k L_k / (z - z_k) + sum_q Q_q z**q`` for one column."""

    points: tuple[Fraction, ...]
    residues: tuple[tuple[Fraction, ...], ...]
    poly_part: tuple[tuple[Fraction, ...], ...] = ()
    rho: int = -1
    series: SeriesCoefficients | None = None

    @property
    def size(self) -> int:
        return len(self.residues[0])

    def entries(self) -> tuple[RationalFunction, ...]:
        """The column as exact rational functions."""
        den = Polynomial.from_roots(self.points)
        cofactors = [den.exact_div(Polynomial.linear_root(z)) for z in self.points]
        out = []
        for i in range(self.size):
            num = Polynomial()
            for cof, lk in zip(cofactors, self.residues):
                if lk[i]:
                    num = num + cof * lk[i]
            poly = Polynomial([q[i] for q in self.poly_part])
            out.append(RationalFunction(num + poly * den, den))
        return tuple(out)

    def evaluate(self, z0) -> tuple[Fraction, ...]:
        z0 = as_rational(z0)
        if z0 in self.points:
            raise PoleError(z0)
        out = [Fraction(0)] * self.size
        for zk, lk in zip(self.points, self.residues):
            w = 1 / (z0 - zk)
            for i in range(self.size):
                out[i] += w * lk[i]
        for q, qq in enumerate(self.poly_part):
            w = z0**q
            for i in range(self.size):
                out[i] += w * qq[i]
        return tuple(out)


@dataclass(frozen=True)
class FundamentalSolution:
    columns: tuple[PartialFractionSolution, ...]
    rho: int = -1

    @property
    def points(self) -> tuple[Fraction, ...]:
        return self.columns[0].points

    def matrix(self) -> Matrix:
        return Matrix.from_columns([c.entries() for c in self.columns])

    def residue_matrices(self) -> list[Matrix]:
        return [
            Matrix.from_columns([c.residues[k] for c in self.columns])
            for k in range(len(self.points))
        ]

    def evaluate(self, z0) -> Matrix:
        return Matrix.from_columns([c.evaluate(z0) for c in self.columns])


def evaluate(sol, z0):
    """Exact value of a column solution (tuple) or fundamental matrix."""
    return sol.evaluate(z0)


def _require_minus(sys: KZSystem):
    if sys.rho != -1:
        raise ValueError("explicit column builders need rho = -1")


def _from_seeds(sys: KZSystem, seeds: dict[int, Sequence]) -> PartialFractionSolution:
    n = sys.n
    coeffs = run_recurrence(sys, seeds, n - 1)
    moments = [coeffs[p] for p in range(1, n)]
    residues = tuple(vandermonde_residues(sys.points, moments))
    poly = tuple(coeffs[-q] for q in range(0, -coeffs.m + 1)) if coeffs.m <= 0 else ()
    return PartialFractionSolution(sys.points, residues, poly, sys.rho, coeffs)


def build_y1(sys: KZSystem) -> PartialFractionSolution:
    """Solution ``V1 / prod_k (z - z_k)``."""
    _require_minus(sys)
    return _from_seeds(sys, {sys.n - 1: spectral_data(sys.n).v1})


def yj_seed(n: int, j: int) -> tuple[Fraction, ...]:
    """``col[0, a_1..a_{n-1}]`` with ``a_{j-1} = 1``, ``a_{n-1} = -1``."""
    if not 2 <= j <= n - 1:
        raise ValueError(f"j={j} out of range 2..{n - 1}")
    a = [Fraction(0)] * n
    a[j - 1] = Fraction(1)
    a[n - 1] = Fraction(-1)
    return tuple(a)


def build_yj(sys: KZSystem, j: int) -> PartialFractionSolution:
    _require_minus(sys)
    seed = yj_seed(sys.n, j)
    return _from_seeds(sys, {sys.n - 2: seed})


def build_yn(sys: KZSystem) -> PartialFractionSolution:
    """Solution with linear growth ``z V3`` at infinity.

    The intermediate resonant steps (at ``n-2`` and ``n-1``) take the
    particular solution with no component along the kernel.
    """
    _require_minus(sys)
    return _from_seeds(sys, {-1: spectral_data(sys.n).v3})


def build_fundamental(sys: KZSystem) -> FundamentalSolution:
    _require_minus(sys)
    cols = [build_y1(sys)]
    cols += [build_yj(sys, j) for j in range(2, sys.n)]
    cols.append(build_yn(sys))
    sol = FundamentalSolution(tuple(cols), -1)
    if determinant(sol.matrix()).is_zero():
        raise ConstructionError("assembled columns are linearly dependent")
    return sol


def rho_plus_fundamental(sys: KZSystem) -> Matrix:
    """``(W^{-1})^T`` where ``W`` is the ``rho = -1`` fundamental matrix.

    Valid because every ``P_k`` is symmetric.
    """
    w = build_fundamental(sys.with_rho(-1)).matrix()
    return inverse(w).T
