from fractions import Fraction

import pytest

from kzrational.linalg import determinant
from kzrational.model import KZSystem, spectral_data
from kzrational.rational_core import Polynomial, RationalFunction, Z
from kzrational.series import (
    ObstructionError,
    SeriesCoefficients,
    extend,
    laurent_at_infinity,
    recurrence_rhs,
    recurrence_step,
    resonant_steps,
    run_recurrence,
    step_operator,
    step_residuals,
)

F = Fraction
S3 = KZSystem(3, (F(0), F(1)))


def col(*xs):
    return tuple(F(x) for x in xs)


def test_rhs_example():
    coeffs = SeriesCoefficients(-1, {-1: col(2, -1, -1)})
    # G_0 equation: rhs = T_0 G_{-1} with T_0 = P_2 because z_1 = 0
    assert recurrence_rhs(S3, coeffs, -1) == col(-1, -1, 2)
    # and -T G_0 = rhs holds for G_0 = [-1, 2, -1]
    assert step_operator(S3, 0) @ col(-1, 2, -1) == col(-1, -1, 2)
    with_g0 = coeffs.with_coefficient(0, col(-1, 2, -1))
    assert step_residuals(S3, with_g0) == {}


def test_g0_for_linear_growth_column():
    c = run_recurrence(S3, {-1: spectral_data(3).v3}, 0)
    assert c[0] == col(-1, 2, -1)
    assert c[-5] == col(0, 0, 0)


@pytest.mark.parametrize("n", range(3, 8))
@pytest.mark.parametrize("rho", [-1, 1])
def test_resonant_indices(n, rho):
    s = KZSystem(n, tuple(F(k) for k in range(n - 1)), rho)
    expected = set(resonant_steps(s))
    for idx in range(-n - 2, n + 3):
        singular = determinant(step_operator(s, idx)) == 0
        assert singular == (idx in expected), idx


def test_nonresonant_step_is_unique():
    c = SeriesCoefficients(2, {2: col(0, 1, -1)})
    r = recurrence_step(S3, c, 2)
    assert not r.was_singular and r.freedom == []
    assert step_operator(S3, 3) @ r.coefficient == recurrence_rhs(S3, c, 2)


def test_resonant_step_freedom_is_orthogonal():
    # step to G_1 is singular (eigenvalue -1 direction V3)
    c = run_recurrence(S3, {-1: spectral_data(3).v3}, 0)
    r = recurrence_step(S3, c, 0)
    assert r.was_singular and r.coefficient is not None
    (k,) = r.freedom
    assert sum(a * b for a, b in zip(k, r.coefficient)) == 0


def test_obstruction_detected():
    # a leading G_0 must satisfy -T G_0 = 0, which V1 does not
    bad_seed = {0: spectral_data(3).v1}
    with pytest.raises(ObstructionError) as info:
        run_recurrence(S3, bad_seed, 3)
    assert info.value.index == 0


def test_obstructed_step_reports_kernel_component():
    s = KZSystem(3, (F(0), F(2)))
    # G_1 = V1 feeds a rhs with a V1 component into the resonant step at 2
    c = SeriesCoefficients(1, {1: spectral_data(3).v1})
    r = recurrence_step(s, c, 1)
    assert r.coefficient is None
    assert r.obstruction is not None and any(r.obstruction)
    ob = r.obstruction
    assert ob[0] == ob[1] == ob[2]


def test_extend_matches_run():
    seeds = {2: spectral_data(3).v1}
    full = run_recurrence(S3, seeds, 6)
    part = run_recurrence(S3, seeds, 3)
    assert extend(S3, part, 6).coeffs == full.coeffs
    assert step_residuals(S3, full) == {}


def test_laurent_examples():
    assert laurent_at_infinity(1 / (Z - 1), 3) == {1: 1, 2: 1, 3: 1}
    assert laurent_at_infinity(Z + 2, 1) == {-1: 1, 0: 2, 1: 0}
    assert laurent_at_infinity(RationalFunction(), 4) == {}
    f = RationalFunction(Polynomial([1, 0, 3]), Polynomial([0, -1, 1]) * Polynomial([-4, 1]))
    ser = laurent_at_infinity(f, 6)
    # compare with the numeric value at a large argument
    z0 = F(10**6)
    approx = sum(c / z0**p for p, c in ser.items())
    assert abs(approx - f(z0)) < F(1, 10**30)
