"""Acceptance gate.

Every test here is named ``test_criterion_<k>_...``; the conftest hook
prints one PASS/FAIL line per criterion at the end of the run.
"""

import json
import re
import time
from fractions import Fraction
from functools import lru_cache

import pytest

from conftest import random_systems
from kzrational.builder import build_fundamental, build_y1, build_yj, build_yn
from kzrational.cli import main
from kzrational.closed_forms import (
    alpha_coefficients,
    beta_published,
    gamma_coefficients,
    yj_moment_data,
    yj_residues,
    yn_g0,
    yn_g1,
    yn_gamma_residues,
)
from kzrational.linalg import Matrix, determinant, inverse, lin_comb
from kzrational.model import KZSystem, p_k, s_matrix, spectral_data, t_matrix
from kzrational.series import SeriesCoefficients, step_residuals
from kzrational.verifier import consistency_report, rationality_gate, gate_characteristic_polynomial, verify_ode
from kzrational.rational_core import Polynomial

F = Fraction
SWEEP = [s for n in range(3, 8) for s in random_systems(n, 5, seed=2024)]


def col(*xs):
    return tuple(F(x) for x in xs)


@lru_cache(maxsize=None)
def fundamental_matrix(sys):
    return build_fundamental(sys).matrix()


# 1 --------------------------------------------------------------------------


def test_criterion_1_worked_s3_case():
    start = time.perf_counter()
    s = KZSystem(3, (F(0), F(1)))
    y1, y2, y3 = build_y1(s), build_yj(s, 2), build_yn(s)
    # Y1 = [1,1,1] (1/(z-1) - 1/z)
    assert y1.residues == (col(-1, -1, -1), col(1, 1, 1)) and y1.poly_part == ()
    assert y2.residues == ((F(1, 3), F(1, 3), F(-2, 3)), (F(-1, 3), F(2, 3), F(-1, 3)))
    assert y2.poly_part == ()
    assert y3.poly_part[1] == col(2, -1, -1) and len(y3.poly_part) == 2
    w = build_fundamental(s).matrix()
    rep = verify_ode(s, w)
    assert rep.ode_residual_zero and rep.det_nonzero
    assert time.perf_counter() - start < 1.0


# 2 --------------------------------------------------------------------------


def test_criterion_2_random_exactness_sweep():
    start = time.perf_counter()
    for s in SWEEP:
        rep = verify_ode(s, fundamental_matrix(s))
        assert rep.ode_residual_zero, s
        assert rep.det_nonzero, s
        assert rep.pole_orders_ok, s
        assert rep.moments_ok, s
    assert time.perf_counter() - start < 60.0


# 3 --------------------------------------------------------------------------


def test_criterion_3_duality():
    for s in SWEEP:
        w = fundamental_matrix(s)
        y = inverse(w).T
        assert verify_ode(s.with_rho(1), y).ode_residual_zero, s
        assert determinant(y) * determinant(w) == 1


# 4 --------------------------------------------------------------------------

CROSS = [s for n in (4, 5, 6) for s in random_systems(n, 3, seed=4)]


def test_criterion_4_alpha():
    for s in CROSS:
        alpha = alpha_coefficients(s.points)
        n = s.n
        for p in range(1, n):
            assert sum(a * z ** (p - 1) for a, z in zip(alpha, s.points)) == (p == n - 1)


def test_criterion_4_two_term_residues():
    for s in CROSS:
        n = s.n
        for j in range(2, n):
            a = [F(0)] * (n - 1)
            a[j - 2], a[n - 2] = F(1), F(-1)
            generic = build_yj(s, j)
            assert yj_moment_data(s, a)["g_top"] == generic.series[n - 1]
            assert tuple(yj_residues(s, a)) == generic.residues


def test_criterion_4_linear_growth_low_moments():
    for s in CROSS:
        generic = build_yn(s)
        assert yn_g0(s) == generic.series[0]
        assert yn_g1(s) == generic.series[1]


def test_criterion_4_published_beta_gamma():
    """``L_s = gamma_s N_s`` with the printed beta coefficients.

    Agreement after kernel projection means the moments of the ansatz
    residues satisfy every recurrence step from the same ``G_{-1}, G_0``;
    any kernel choice at the resonant steps is then allowed.
    """
    bad = []
    for s in CROSS:
        n = s.n
        res = yn_gamma_residues(s, beta_published)
        coeffs = {-1: spectral_data(n).v3, 0: yn_g0(s)}
        for p in range(1, n):
            coeffs[p] = lin_comb([z ** (p - 1) for z in s.points], res)
        residual = step_residuals(s, SeriesCoefficients(-1, coeffs))
        if residual:
            bad.append((n, s.points, min(residual)))
    assert not bad, f"{len(bad)} of {len(CROSS)} cases disagree, first: {bad[0]}"


# 5 --------------------------------------------------------------------------


def test_criterion_5_spectral_facts():
    for n in range(3, 9):
        t = t_matrix(n)
        explicit = p_k(n, 1)
        for k in range(2, n):
            explicit = explicit + p_k(n, k)
        assert t == explicit == Matrix.identity(n).scale(n - 2) + s_matrix(n)
        sd = spectral_data(n)
        assert t @ sd.v1 == tuple((n - 1) * x for x in sd.v1)
        assert t @ sd.v3 == tuple(-x for x in sd.v3)
        for v in sd.v2_basis:
            assert t @ v == tuple((n - 2) * x for x in v)
        assert lin_comb([1] * (n - 1), sd.n_vectors) == sd.v3
        for k in range(1, n):
            for m in range(1, n):
                assert p_k(n, k) @ sd.n_vectors[m - 1] == p_k(n, m) @ sd.n_vectors[k - 1]


# 6 --------------------------------------------------------------------------


def test_criterion_6_gate():
    for m2 in range(-10, 11):
        expected = "inconclusive" if m2 in (0, 1) else "no_rational_fundamental"
        assert rationality_gate(1, m2).verdict == expected, m2
    for m1 in range(-6, 7):
        for m2 in range(-6, 7):
            lam2 = m1 * m1 - m1 * m2 + m2 * m2
            expected = Polynomial([-(m1 + m2), 1]) * Polynomial([-lam2, 0, 1])
            assert gate_characteristic_polynomial(m1, m2) == expected


# 7 --------------------------------------------------------------------------


def test_criterion_7_consistency():
    for n in range(3, 8):
        rep = consistency_report(n)
        assert rep["consistent"], rep["failures"][:3]


# 8 --------------------------------------------------------------------------


def _cli(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_criterion_8_cli_closed_loop(tmp_path, capsys):
    path = tmp_path / "w.json"
    argv = ["build", "--n", "3", "--points", "0,1", "--output", str(path)]
    assert _cli(argv, capsys)[0] == 0
    original = path.read_bytes()
    assert _cli(argv, capsys)[0] == 0
    assert path.read_bytes() == original
    code, first = _cli(["verify", "--input", str(path)], capsys)
    assert code == 0
    assert _cli(["verify", "--input", str(path)], capsys)[1] == first

    doc = json.loads(original)
    bad = tmp_path / "bad.json"
    flips = 0
    for k, mat in enumerate(doc["residues"]):
        for i, row in enumerate(mat):
            for j, text in enumerate(row):
                for m in re.finditer(r"\d", text):
                    d = int(m.group())
                    new = text[: m.start()] + str(d + 1 if d < 9 else d - 1) + text[m.end():]
                    corrupt = json.loads(original)
                    corrupt["residues"][k][i][j] = new
                    bad.write_text(json.dumps(corrupt))
                    code, out = _cli(["verify", "--input", str(bad)], capsys)
                    assert code == 1, (k, i, j, new)
                    rep = json.loads(out)
                    assert any(d["check"] == "ode_residual" and d["value"] != "0" for d in rep["details"])
                    flips += 1
    assert flips >= 18
