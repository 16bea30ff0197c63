"""Closed-form coefficient formulas, kept as independent cross-checks.

The builders in :mod:`kzrational.builder` never call into this module;
tests compare the two routes.

Two of the published formulas do not hold as printed and are exposed
under explicit names so the discrepancy stays testable:

* ``beta_published`` (the on/off values ``-1/(n-1)`` and
  ``2/((n-1)(n-2))``) does not expand ``G_{k,l}`` in the ``N_s``;
  ``beta_closed`` gives the values that do: ``-1/(n-2)`` and
  ``1/((n-2)(n-3))``.
* ``L_s = gamma_s N_s`` reproduces ``G_1 = sum_s L_s`` but is not the
  residue set of a solution for ``n >= 5``; see ``yn_gamma_residues``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .linalg import Matrix, lin_comb, solve_singular
from .model import KZSystem, p_k, spectral_data
from .rational_core import as_rational

__all__ = [
    "alpha_coefficients",
    "beta_closed",
    "beta_published",
    "beta_solved",
    "gamma_coefficients",
    "g_kl",
    "m1_cofactor_unsigned",
    "u0",
    "u_kl",
    "vandermonde_det",
    "yj_moment_data",
    "yj_residues",
    "yn_g0",
    "yn_g1",
    "yn_g1_from_gamma",
    "yn_g1_rhs",
    "yn_gamma_residues",
]


def vandermonde_det(points: Sequence) -> Fraction:
    """``prod_{i > j} (z_i - z_j)``."""
    pts = [as_rational(p) for p in points]
    d = Fraction(1)
    for i in range(len(pts)):
        for j in range(i):
            d *= pts[i] - pts[j]
    return d


def alpha_coefficients(points: Sequence) -> list[Fraction]:
    """Signed last-row entries of the inverse Vandermonde matrix.

    ``alpha_k = (-1)**(n+k-1) / [prod_{i>k}(z_i - z_k) prod_{k>j}(z_k - z_j)]``
    with ``n = len(points) + 1`` and ``k`` 1-based.
    """
    pts = [as_rational(p) for p in points]
    n = len(pts) + 1
    out = []
    for k in range(1, n):
        zk = pts[k - 1]
        d = Fraction(1)
        for i in range(k + 1, n):
            d *= pts[i - 1] - zk
        for j in range(1, k):
            d *= zk - pts[j - 1]
        out.append(Fraction((-1) ** (n + k - 1)) / d)
    return out


def m1_cofactor_unsigned(points: Sequence, k: int) -> Fraction:
    """``prod_{i>j; i,j != k} (z_i - z_j)``, as printed (no sign factor)."""
    pts = [as_rational(p) for i, p in enumerate(points, start=1) if i != k]
    return vandermonde_det(pts)


def yj_moment_data(sys: KZSystem, a: Sequence) -> dict:
    """``m``, ``m_k``, ``b_k`` and the top coefficient ``G_{n-1}`` for seed ``col[0, a]``.

    ``a`` has ``n - 1`` entries summing to zero.
    """
    n, z = sys.n, sys.points
    a = [as_rational(x) for x in a]
    if len(a) != n - 1 or sum(a) != 0:
        raise ValueError("a must have n-1 entries summing to zero")
    m = sum(ai * zi for ai, zi in zip(a, z))
    total = sum(z)
    mk = [a[k] * (total - z[k]) for k in range(n - 1)]
    b = [mk[k] + m / (n - 1) for k in range(n - 1)]
    v3 = spectral_data(n).v3
    coef = m / (n * (n - 1))
    g_top = tuple(coef * v3[0] if i == 0 else coef * v3[i] + b[i - 1] for i in range(n))
    return {"m": m, "m_k": mk, "b": b, "g_top": g_top}


def yj_residues(sys: KZSystem, a: Sequence) -> list[tuple]:
    """``L_k = alpha_k [G_{n-1} - (sum_{i != k} z_i) G_{n-2}]``.

    This is the signed-cofactor reading of the two-term residue formula,
    including the ``1/det M1`` scale.
    """
    n, z = sys.n, sys.points
    g_low = (Fraction(0),) + tuple(as_rational(x) for x in a)
    g_top = yj_moment_data(sys, a)["g_top"]
    total = sum(z)
    out = []
    for k in range(n - 1):
        d = Fraction(1)
        for i in range(n - 1):
            if i != k:
                d *= z[k] - z[i]
        s = total - z[k]
        out.append(tuple((gt - s * gl) / d for gt, gl in zip(g_top, g_low)))
    return out


def yn_g0(sys: KZSystem) -> tuple:
    """``G_0 = -sum_i z_i N_i``."""
    nv = spectral_data(sys.n).n_vectors
    return lin_comb([-z for z in sys.points], nv)


def yn_g1_rhs(sys: KZSystem) -> tuple:
    """``sum_{k>l} (z_k - z_l)**2 P_k N_l``."""
    n, z = sys.n, sys.points
    nv = spectral_data(n).n_vectors
    acc = tuple(Fraction(0) for _ in range(n))
    for k in range(n - 1):
        for l in range(k):
            w = (z[k] - z[l]) ** 2
            v = p_k(n, k + 1) @ nv[l]
            acc = tuple(x + w * y for x, y in zip(acc, v))
    return acc


def u0(n: int) -> tuple:
    c = Fraction(-2, (n - 1) * (n - 2))
    return tuple(c * x for x in spectral_data(n).v3)


def u_kl(n: int, k: int, l: int) -> tuple:
    """Zero-sum part of ``P_k N_l`` (1-based ``k != l``), from its entry formulas."""
    off = Fraction(-2 * n, (n - 2) * (n - 1))
    on = Fraction(n * (n - 3), (n - 2) * (n - 1))
    return (Fraction(0),) + tuple(on if p in (k, l) else off for p in range(1, n))


def g_kl(n: int, k: int, l: int) -> tuple:
    """``U_0/2 + U_{k,l}/(3-n)``; needs ``n >= 4``."""
    if n < 4:
        raise ValueError("g_kl divides by 3 - n")
    return tuple(x / 2 + y / (3 - n) for x, y in zip(u0(n), u_kl(n, k, l)))


def yn_g1(sys: KZSystem) -> tuple:
    """``G_1 = sum_{k>l} (z_k - z_l)**2 G_{k,l}``."""
    n, z = sys.n, sys.points
    acc = tuple(Fraction(0) for _ in range(n))
    for k in range(2, n):
        for l in range(1, k):
            w = (z[k - 1] - z[l - 1]) ** 2
            acc = tuple(x + w * y for x, y in zip(acc, g_kl(n, k, l)))
    return acc


BetaFn = Callable[[int, int, int, int], Fraction]


def beta_published(n: int, s: int, k: int, l: int) -> Fraction:
    if s in (k, l):
        return Fraction(-1, n - 1)
    return Fraction(2, (n - 1) * (n - 2))


def beta_closed(n: int, s: int, k: int, l: int) -> Fraction:
    if s in (k, l):
        return Fraction(-1, n - 2)
    return Fraction(1, (n - 2) * (n - 3))


def beta_solved(n: int, k: int, l: int) -> tuple:
    """Coordinates of ``G_{k,l}`` in the basis ``N_1..N_{n-1}`` by exact elimination."""
    nv = spectral_data(n).n_vectors
    report = solve_singular(Matrix.from_columns(nv), g_kl(n, k, l), orthogonal=False)
    if not report.solvable or report.kernel_basis:
        raise ArithmeticError("G_{k,l} is not uniquely expressible in the N_s")
    return report.particular


def gamma_coefficients(sys: KZSystem, beta: BetaFn = beta_closed) -> list[Fraction]:
    """``gamma_s = sum_{k>l} (z_k - z_l)**2 beta_{s,k,l}``."""
    n, z = sys.n, sys.points
    out = []
    for s in range(1, n):
        g = Fraction(0)
        for k in range(2, n):
            for l in range(1, k):
                g += (z[k - 1] - z[l - 1]) ** 2 * beta(n, s, k, l)
        out.append(g)
    return out


def yn_g1_from_gamma(sys: KZSystem, beta: BetaFn = beta_closed) -> tuple:
    nv = spectral_data(sys.n).n_vectors
    return lin_comb(gamma_coefficients(sys, beta), nv)


def yn_gamma_residues(sys: KZSystem, beta: BetaFn = beta_closed) -> list[tuple]:
    """The ansatz ``L_s = gamma_s N_s``."""
    nv = spectral_data(sys.n).n_vectors
    return [tuple(g * x for x in v) for g, v in zip(gamma_coefficients(sys, beta), nv)]
