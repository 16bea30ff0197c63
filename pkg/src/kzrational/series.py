"""Laurent expansion at infinity and the coefficient recurrence.

With ``z = 1/xi`` a solution reads ``V(xi) = sum_{p >= m} xi**p G_p``.
Comparing powers of ``xi`` gives, for ``q + 1 >= m``,

    [(q+1) I + rho T] G_{q+1} = -rho * sum_{j >= 0, j + l = q} T_j G_l

The operator on the left is singular exactly when ``-(q+1)/rho`` is an
eigenvalue of ``T``; those are the resonant steps where a seed may be
injected or the system may be obstructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import Matrix, SolveReport, dot, inverse, is_zero_vector, lin_comb, solve_singular
from .model import KZSystem, t_coeff, t_matrix
from .rational_core import RationalFunction

__all__ = [
    "MissingCoefficientError",
    "ObstructionError",
    "RecurrenceStepResult",
    "SeriesCoefficients",
    "extend",
    "laurent_at_infinity",
    "moments_check",
    "recurrence_rhs",
    "recurrence_step",
    "resonant_steps",
    "run_recurrence",
    "step_operator",
    "step_residuals",
]


class MissingCoefficientError(KeyError):
    pass


class ObstructionError(ArithmeticError):
    """A resonant step whose right-hand side is not in the operator's range."""

    def __init__(self, index: int, residual: tuple):
        super().__init__(f"recurrence obstructed at index {index}")
        self.index = index
        self.residual = residual


@dataclass(frozen=True)
class SeriesCoefficients:
    """Coefficients ``G_p`` for ``m <= p <= p_max``; indices below ``m`` are zero."""

    m: int
    coeffs: Mapping[int, tuple]

    @property
    def p_max(self) -> int:
        return max(self.coeffs) if self.coeffs else self.m - 1

    @property
    def size(self) -> int:
        return len(next(iter(self.coeffs.values())))

    def __getitem__(self, p: int) -> tuple:
        if p < self.m:
            return tuple(Fraction(0) for _ in range(self.size))
        try:
            return self.coeffs[p]
        except KeyError:
            raise MissingCoefficientError(p) from None

    def __contains__(self, p: int) -> bool:
        return p < self.m or p in self.coeffs

    def with_coefficient(self, p: int, g: tuple) -> "SeriesCoefficients":
        new = dict(self.coeffs)
        new[p] = tuple(g)
        return SeriesCoefficients(self.m, new)


@dataclass(frozen=True)
class RecurrenceStepResult:
    coefficient: tuple | None
    was_singular: bool
    freedom: list[tuple] = field(default_factory=list)
    obstruction: tuple | None = None


class _TCache:
    """Memoised ``T_j`` for one system."""

    def __init__(self, sys: KZSystem):
        self.sys = sys
        self._cache: dict[int, Matrix] = {}

    def __call__(self, j: int) -> Matrix:
        if j not in self._cache:
            self._cache[j] = t_coeff(self.sys, j)
        return self._cache[j]


def step_operator(sys: KZSystem, index: int) -> Matrix:
    """``index * I + rho * T``, the matrix acting on ``G_index``."""
    t = t_matrix(sys.n)
    n = sys.n
    return Matrix(
        [[(index if i == j else 0) + sys.rho * t[i, j] for j in range(n)] for i in range(n)]
    )


def resonant_steps(sys: KZSystem) -> tuple[int, int, int]:
    """Indices at which :func:`step_operator` is singular."""
    n = sys.n
    if sys.rho == -1:
        return (-1, n - 2, n - 1)
    return (-(n - 1), -(n - 2), 1)


def recurrence_rhs(sys: KZSystem, coeffs: SeriesCoefficients, q: int, _t=None) -> tuple:
    """Right-hand side of the equation determining ``G_{q+1}``."""
    tj = _t or _TCache(sys)
    acc = tuple(Fraction(0) for _ in range(sys.n))
    for l in range(coeffs.m, q + 1):
        g = coeffs[l]
        if is_zero_vector(g):
            continue
        term = tj(q - l) @ g
        acc = tuple(a + b for a, b in zip(acc, term))
    if sys.rho == 1:
        acc = tuple(-a for a in acc)
    return acc


def recurrence_step(sys: KZSystem, coeffs: SeriesCoefficients, q: int, _t=None) -> RecurrenceStepResult:
    """Solve for ``G_{q+1}`` given all lower coefficients.

    At a resonant step the particular solution has zero component along
    the kernel (an eigenspace of ``T``) and the kernel is reported as
    freedom; an inconsistent step reports the rhs component along the
    kernel as the obstruction.
    """
    rhs = recurrence_rhs(sys, coeffs, q, _t)
    op = step_operator(sys, q + 1)
    report: SolveReport = solve_singular(op, rhs, orthogonal=True)
    singular = bool(report.kernel_basis)
    if not report.solvable:
        obstruction = _kernel_component(rhs, report.kernel_basis)
        return RecurrenceStepResult(None, singular, report.kernel_basis, obstruction)
    return RecurrenceStepResult(report.particular, singular, report.kernel_basis)


def _kernel_component(v: tuple, basis: list[tuple]) -> tuple:
    # op is symmetric, so range is the orthogonal complement of the kernel
    gram = Matrix([[dot(a, b) for b in basis] for a in basis])
    coeffs = inverse(gram) @ [dot(a, v) for a in basis]
    return lin_comb(coeffs, basis)


def run_recurrence(sys: KZSystem, seeds: Mapping[int, Sequence], p_max: int) -> SeriesCoefficients:
    """Build ``G_m .. G_{p_max}`` from seeds, where ``m = min(seeds)``.

    A seeded index replaces the computed coefficient; the seed must still
    satisfy that step's equation (so seeds are only meaningful at resonant
    steps or as the leading coefficient).
    """
    if not seeds:
        raise ValueError("at least one seed is required")
    m = min(seeds)
    coeffs = SeriesCoefficients(m, {})
    return extend(sys, coeffs, p_max, seeds=seeds)


def extend(
    sys: KZSystem,
    coeffs: SeriesCoefficients,
    p_max: int,
    seeds: Mapping[int, Sequence] | None = None,
) -> SeriesCoefficients:
    seeds = {k: tuple(Fraction(x) for x in v) for k, v in (seeds or {}).items()}
    tj = _TCache(sys)
    out = dict(coeffs.coeffs)
    cur = SeriesCoefficients(coeffs.m, out)
    start = coeffs.p_max + 1 if coeffs.coeffs else coeffs.m
    for p in range(start, p_max + 1):
        if p in seeds:
            g = seeds[p]
            lhs = step_operator(sys, p) @ g
            rhs = recurrence_rhs(sys, cur, p - 1, tj)
            if lhs != rhs:
                raise ObstructionError(p, tuple(a - b for a, b in zip(lhs, rhs)))
        else:
            res = recurrence_step(sys, cur, p - 1, tj)
            if res.coefficient is None:
                raise ObstructionError(p, res.obstruction)
            g = res.coefficient
        out[p] = g
    return SeriesCoefficients(coeffs.m, out)


def step_residuals(sys: KZSystem, coeffs: SeriesCoefficients) -> dict[int, tuple]:
    """Nonzero residuals of every step equation over the stored range."""
    tj = _TCache(sys)
    bad = {}
    for p in range(coeffs.m, coeffs.p_max + 1):
        lhs = step_operator(sys, p) @ coeffs[p]
        rhs = recurrence_rhs(sys, coeffs, p - 1, tj)
        if lhs != rhs:
            bad[p] = tuple(a - b for a, b in zip(lhs, rhs))
    return bad


def moments_check(
    sys: KZSystem,
    coeffs: SeriesCoefficients,
    residues: Sequence[Sequence],
    extra: int = 0,
) -> bool:
    """``sum_k z_k**(p-1) L_k == G_p`` for ``1 <= p <= n-1+extra``.

    Missing coefficients above ``coeffs.p_max`` are produced by running the
    recurrence forward; for ``rho = -1`` every step past ``n-1`` is
    non-resonant, so the extension is unique.
    """
    top = sys.n - 1 + extra
    if coeffs.p_max < top:
        coeffs = extend(sys, coeffs, top)
    for p in range(1, top + 1):
        weights = [z ** (p - 1) for z in sys.points]
        if lin_comb(weights, residues) != tuple(coeffs[p]):
            return False
    return True


def laurent_at_infinity(f: RationalFunction, p_max: int) -> dict[int, Fraction]:
    """Coefficients ``c_p`` of ``f(1/xi) = sum_p c_p xi**p`` up to ``p_max``.

    The expansion starts at ``deg(den) - deg(num)``; the zero function
    returns an empty mapping.
    """
    if f.is_zero():
        return {}
    num, den = f.num.coeffs, f.den.coeffs
    dn, dd = len(num) - 1, len(den) - 1
    start = dd - dn
    # reversed coefficient lists are power series in xi
    a = list(reversed(num))
    b = list(reversed(den))
    out = {}
    series: list[Fraction] = []
    inv_b0 = 1 / b[0]
    for k in range(0, p_max - start + 1):
        s = a[k] if k < len(a) else Fraction(0)
        for i in range(1, min(k, len(b) - 1) + 1):
            s -= b[i] * series[k - i]
        c = s * inv_b0
        series.append(c)
        out[start + k] = c
    return out
