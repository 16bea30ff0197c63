import time
from fractions import Fraction

import pytest

from conftest import random_systems
from kzrational.builder import (
    FundamentalSolution,
    build_fundamental,
    build_y1,
    build_yj,
    build_yn,
    evaluate,
    rho_plus_fundamental,
    yj_seed,
)
from kzrational.linalg import determinant
from kzrational.model import KZSystem, p_k, spectral_data
from kzrational.rational_core import PoleError

F = Fraction
S3 = KZSystem(3, (F(0), F(1)))


def col(*xs):
    return tuple(F(x) for x in xs)


def pointwise_residual(sys, column, z0):
    """Y'(z0) - rho A(z0) Y(z0) from the partial-fraction data alone.

    Uses neither RationalFunction arithmetic nor the builder's own
    evaluation, so it is an independent oracle.
    """
    n = sys.n
    y = [F(0)] * n
    dy = [F(0)] * n
    for zk, lk in zip(column.points, column.residues):
        w = 1 / (z0 - zk)
        for i in range(n):
            y[i] += w * lk[i]
            dy[i] -= w * w * lk[i]
    for q, qq in enumerate(column.poly_part):
        for i in range(n):
            y[i] += z0**q * qq[i]
            if q:
                dy[i] += q * z0 ** (q - 1) * qq[i]
    ay = [F(0)] * n
    for k, zk in enumerate(sys.points, start=1):
        py = p_k(n, k) @ tuple(y)
        for i in range(n):
            ay[i] += py[i] / (z0 - zk)
    return [d - sys.rho * a for d, a in zip(dy, ay)]


def sample_points(sys, count):
    out, t = [], 1
    while len(out) < count:
        c = F(t, 3) + F(1, 7)
        if c not in sys.points:
            out.append(c)
        t += 1
    return out


def assert_column_solves(sys, column):
    # after clearing prod (z - z_k)^2 the residual numerator has degree <= 2n,
    # so vanishing at 2n + 1 points proves it is identically zero
    for z0 in sample_points(sys, 2 * sys.n + 1):
        assert pointwise_residual(sys, column, z0) == [0] * sys.n


def test_worked_s3_case():
    start = time.perf_counter()
    y1 = build_y1(S3)
    assert y1.residues == (col(-1, -1, -1), col(1, 1, 1))
    assert y1.poly_part == ()
    y2 = build_yj(S3, 2)
    assert y2.residues == (
        (F(1, 3), F(1, 3), F(-2, 3)),
        (F(-1, 3), F(2, 3), F(-1, 3)),
    )
    y3 = build_yn(S3)
    assert y3.poly_part == (col(-1, 2, -1), col(2, -1, -1))
    assert y3.residues == (
        (F(-1, 2), F(-1, 2), F(1)),
        (F(-1, 2), F(1), F(-1, 2)),
    )
    sol = build_fundamental(S3)
    for c in sol.columns:
        assert_column_solves(S3, c)
    assert not determinant(sol.matrix()).is_zero()
    assert time.perf_counter() - start < 1.0


def test_evaluate_examples():
    y1 = build_y1(S3)
    assert evaluate(y1, 2) == (F(1, 2), F(1, 2), F(1, 2))
    with pytest.raises(PoleError):
        evaluate(y1, 1)
    w = build_fundamental(S3)
    assert w.evaluate(F(2)).column(0) == (F(1, 2), F(1, 2), F(1, 2))


def test_entries_agree_with_evaluation():
    sol = build_fundamental(S3)
    z0 = F(5, 2)
    m = sol.matrix()
    ev = sol.evaluate(z0)
    assert m.map(lambda f: f(z0)) == ev


def test_yj_seed():
    assert yj_seed(4, 2) == col(0, 1, 0, -1)
    assert yj_seed(4, 3) == col(0, 0, 1, -1)
    with pytest.raises(ValueError):
        yj_seed(4, 4)


def test_builders_need_rho_minus():
    with pytest.raises(ValueError):
        build_y1(S3.with_rho(1))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_columns_solve_pointwise(n):
    for sys in random_systems(n, 2, seed=40 + n):
        sol = build_fundamental(sys)
        assert isinstance(sol, FundamentalSolution)
        assert len(sol.columns) == n
        for c in sol.columns:
            assert_column_solves(sys, c)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_structure_of_columns(n):
    (sys,) = random_systems(n, 1, seed=70 + n)
    sd = spectral_data(n)
    y1 = build_y1(sys)
    # Y1 = V1 / prod (z - z_k): every residue is a multiple of V1
    for lk in y1.residues:
        assert len(set(lk)) == 1
    for j in range(2, n):
        yj = build_yj(sys, j)
        assert yj.poly_part == ()
        assert yj.series.m == n - 2
    yn = build_yn(sys)
    assert len(yn.poly_part) == 2 and yn.poly_part[1] == sd.v3


def test_rho_plus_matrix_at_a_point():
    w = build_fundamental(S3).evaluate(F(3))
    y = rho_plus_fundamental(S3).map(lambda f: f(F(3)))
    prod = y.T @ w
    assert prod == type(prod).identity(3)
