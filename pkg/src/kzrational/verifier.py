"""Exact checks on candidate solutions, the S_3 integrality gate and the
commutation relations behind the full multi-point system."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from .builder import build_fundamental
from .linalg import DimensionError, Matrix, characteristic_polynomial, determinant, inverse
from .model import KZSystem, a_matrix, perm_matrix
from .rational_core import Polynomial, RationalFunction, format_rational
from .series import SeriesCoefficients, laurent_at_infinity, moments_check, step_residuals

__all__ = [
    "GateVerdict",
    "VerificationReport",
    "consistency_report",
    "consistency_relations",
    "gate_characteristic_polynomial",
    "gate_matrix",
    "partial_fraction_parts",
    "rationality_gate",
    "verify_duality",
    "verify_ode",
]

EXTRA_MOMENTS = 3


@dataclass
class VerificationReport:
    ode_residual_zero: bool
    det_nonzero: bool | None
    pole_orders_ok: bool
    moments_ok: bool
    details: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.ode_residual_zero
            and self.det_nonzero is not False
            and self.pole_orders_ok
            and self.moments_ok
        )

    def to_json(self) -> dict:
        return asdict(self)


def _poly_strings(p: Polynomial) -> list[str]:
    return [format_rational(c) for c in p.coeffs]


def _witness_point(f: RationalFunction, avoid: Sequence[Fraction]) -> Fraction:
    # f is a nonzero function, so some small integer is neither a pole nor a root
    t = 0
    while True:
        for cand in (Fraction(t), Fraction(-t)):
            if cand in avoid or f.den(cand) == 0:
                continue
            if f(cand) != 0:
                return cand
        t += 1


def _as_matrix(w) -> Matrix:
    if isinstance(w, Matrix):
        return w.map(RationalFunction._coerce)
    return Matrix([[RationalFunction._coerce(x)] for x in w])


def partial_fraction_parts(f: RationalFunction, points: Sequence[Fraction]):
    """Split ``f`` into residues at ``points`` and a polynomial part.

    Returns ``None`` when ``f`` has a pole outside ``points`` or a pole of
    order above one.
    """
    d = Polynomial.from_roots(points)
    quot, rem = divmod(d, f.den)
    if rem:
        return None
    poly, _ = divmod(f.num, f.den)
    residues = []
    for z in points:
        if f.den(z) != 0:
            residues.append(Fraction(0))
        else:
            rest = f.den.exact_div(Polynomial.linear_root(z))
            residues.append(f.num(z) / rest(z))
    return residues, poly


def verify_ode(sys: KZSystem, w) -> VerificationReport:
    """Exact residual ``dW/dz - rho A(z) W`` plus structural checks.

    ``moments_ok`` is checked against the expansion of ``W`` at infinity,
    computed directly from each entry: every recurrence step equation must
    hold on those coefficients, and the residues must reproduce them
    through ``p = n - 1 + 3``.
    """
    m = _as_matrix(w)
    n = sys.n
    if m.nrows != n:
        raise DimensionError(f"expected {n} rows, got {m.nrows}")
    details: list[dict] = []

    a = a_matrix(sys)
    aw = a @ m
    ode_ok = True
    for i in range(n):
        for j in range(m.ncols):
            r = m[i, j].derivative() - aw[i, j] * sys.rho
            if not r.is_zero():
                ode_ok = False
                z0 = _witness_point(r, sys.points)
                details.append(
                    {
                        "check": "ode_residual",
                        "entry": [i, j],
                        "residual_num": _poly_strings(r.num),
                        "residual_den": _poly_strings(r.den),
                        "point": format_rational(z0),
                        "value": format_rational(r(z0)),
                    }
                )

    det_ok = None
    if m.is_square():
        det_ok = not determinant(m).is_zero()
        if not det_ok:
            details.append({"check": "determinant", "message": "det W is identically zero"})

    parts = {}
    poles_ok = True
    for i in range(n):
        for j in range(m.ncols):
            pf = partial_fraction_parts(m[i, j], sys.points)
            if pf is None:
                poles_ok = False
                details.append(
                    {
                        "check": "pole_order",
                        "entry": [i, j],
                        "den": _poly_strings(m[i, j].den),
                        "message": "pole of order > 1 or outside the given points",
                    }
                )
            else:
                parts[i, j] = pf

    moments_ok = True
    if poles_ok:
        for j in range(m.ncols):
            problem = _column_moments(sys, [m[i, j] for i in range(n)], [parts[i, j] for i in range(n)])
            if problem is not None:
                moments_ok = False
                details.append({"check": "moments", "column": j, "message": problem})
    else:
        moments_ok = False

    return VerificationReport(ode_ok, det_ok, poles_ok, moments_ok, details)


def _column_moments(sys: KZSystem, column, parts) -> str | None:
    n = sys.n
    top = n - 1 + EXTRA_MOMENTS
    expansions = [laurent_at_infinity(f, top) for f in column]
    starts = [min(e) for e in expansions if e]
    if not starts:
        return None  # the zero column
    m = min(starts)
    coeffs = SeriesCoefficients(
        m,
        {p: tuple(e.get(p, Fraction(0)) for e in expansions) for p in range(m, top + 1)},
    )
    bad = step_residuals(sys, coeffs)
    if bad:
        return f"series at infinity violates the recurrence at index {min(bad)}"
    residues = [tuple(parts[i][0][k] for i in range(n)) for k in range(n - 1)]
    if not moments_check(sys, coeffs, residues, EXTRA_MOMENTS):
        return "residues do not reproduce the moments at infinity"
    return None


@dataclass(frozen=True)
class GateVerdict:
    m1: int
    m2: int
    lambda_squared: int
    verdict: str

    def to_json(self) -> dict:
        return asdict(self)


def gate_matrix(m1: int, m2: int) -> Matrix:
    """``m1 P_1 + m2 P_2`` for ``n = 3``."""
    return Matrix(
        [
            [Fraction(0), Fraction(m1), Fraction(m2)],
            [Fraction(m1), Fraction(m2), Fraction(0)],
            [Fraction(m2), Fraction(0), Fraction(m1)],
        ]
    )


def rationality_gate(m1: int, m2: int) -> GateVerdict:
    """Integrality test on the spectrum of ``m1 P_1 + m2 P_2``.

    The eigenvalues are ``m1 + m2`` and ``+-sqrt(m1^2 - m1 m2 + m2^2)``.
    A non-square radicand rules out a rational fundamental solution; a
    square one is only a necessary condition, hence "inconclusive".
    """
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (m1, m2)):
        raise TypeError("m1 and m2 must be integers")
    lam2 = m1 * m1 - m1 * m2 + m2 * m2
    square = math.isqrt(lam2) ** 2 == lam2
    verdict = "inconclusive" if square else "no_rational_fundamental"
    return GateVerdict(m1, m2, lam2, verdict)


def gate_characteristic_polynomial(m1: int, m2: int) -> Polynomial:
    return characteristic_polynomial(gate_matrix(m1, m2))


def _commutes(a: Matrix, b: Matrix) -> bool:
    return a @ b == b @ a


def consistency_report(n: int) -> dict:
    """Exhaustive check of the three transposition identities.

    1. ``P(i,j) = P(j,i)``
    2. ``[P(i,j) + P(j,k), P(i,k)] = 0`` for distinct ``i, j, k``
    3. ``[P(i,j), P(k,l)] = 0`` for distinct ``i, j, k, l``
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    idx = range(1, n + 1)
    cache = {(i, j): perm_matrix(n, i, j) for i in idx for j in idx if i != j}
    failures = []
    c1 = c2 = c3 = 0
    for i, j in itertools.permutations(idx, 2):
        c1 += 1
        if cache[i, j] != cache[j, i]:
            failures.append(["symmetry", i, j])
    for i, j, k in itertools.permutations(idx, 3):
        c2 += 1
        if not _commutes(cache[i, j] + cache[j, k], cache[i, k]):
            failures.append(["triple", i, j, k])
    for i, j, k, l in itertools.permutations(idx, 4):
        c3 += 1
        if not _commutes(cache[i, j], cache[k, l]):
            failures.append(["disjoint", i, j, k, l])
    return {
        "n": n,
        "consistent": not failures,
        "checked": {"symmetry": c1, "triple": c2, "disjoint": c3},
        "failures": failures,
    }


def consistency_relations(n: int) -> bool:
    return consistency_report(n)["consistent"]


def verify_duality(sys: KZSystem) -> bool:
    """``(W^{-1})^T`` built from the ``rho = -1`` solution solves ``rho = +1``."""
    w = build_fundamental(sys.with_rho(-1)).matrix()
    y = inverse(w).T
    return verify_ode(sys.with_rho(1), y).ok
