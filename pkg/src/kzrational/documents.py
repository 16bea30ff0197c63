"""JSON documents exchanged by the command-line tool.

Every scalar is written as a ``"p/q"`` string (``"p"`` when ``q = 1``).
A solution document looks like::

    {
      "schema": "kz-rational/1",
      "kind": "solution",
      "n": 3,
      "rho": -1,
      "points": ["0", "1"],
      "shape": [3, 3],
      "residues": [L_1, ..., L_{n-1}],
      "poly_part": [Q_0, Q_1, ...]
    }

where each ``L_k`` and ``Q_q`` is a list of rows of scalar strings and the
solution is ``W(z) = sum_k L_k / (z - z_k) + sum_q Q_q z**q``.  Trailing
all-zero ``Q_q`` are dropped.  Serialisation is deterministic, so a parsed
document re-serialises to identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .builder import FundamentalSolution, PartialFractionSolution
from .linalg import Matrix
from .model import InvalidSystemError, KZSystem
from .rational_core import Polynomial, RationalFunction, format_rational, parse_rational
from .verifier import partial_fraction_parts

__all__ = [
    "SCHEMA",
    "DocumentError",
    "dumps",
    "matrix_from_document",
    "parse_solution_document",
    "solution_document",
]

SCHEMA = "kz-rational/1"


class DocumentError(ValueError):
    pass


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _fmt_matrix(rows: Sequence[Sequence[Fraction]]) -> list[list[str]]:
    return [[format_rational(x) for x in r] for r in rows]


def solution_document(sol, sys: KZSystem | None = None) -> dict:
    """Document for a :class:`FundamentalSolution`, a single column, or a
    matrix of rational functions (which must have simple poles only at the
    system's points)."""
    if isinstance(sol, FundamentalSolution):
        points = sol.points
        n = sol.columns[0].size
        ncols = len(sol.columns)
        residues = [m.rows for m in sol.residue_matrices()]
        deg = max(len(c.poly_part) for c in sol.columns)
        poly = []
        for q in range(deg):
            poly.append(
                [
                    [c.poly_part[q][i] if q < len(c.poly_part) else Fraction(0) for c in sol.columns]
                    for i in range(n)
                ]
            )
        rho = sol.rho
    elif isinstance(sol, PartialFractionSolution):
        points, n, ncols, rho = sol.points, sol.size, 1, sol.rho
        residues = [[[x] for x in lk] for lk in sol.residues]
        poly = [[[x] for x in qq] for qq in sol.poly_part]
    elif isinstance(sol, Matrix):
        if sys is None:
            raise ValueError("a KZSystem is needed to decompose a bare matrix")
        points, n, ncols, rho = sys.points, sol.nrows, sol.ncols, sys.rho
        residues, poly = _decompose(sol, points)
    else:
        raise TypeError(f"cannot serialise {type(sol).__name__}")
    while poly and all(x == 0 for r in poly[-1] for x in r):
        poly.pop()
    return {
        "schema": SCHEMA,
        "kind": "solution",
        "n": n,
        "rho": rho,
        "points": [format_rational(p) for p in points],
        "shape": [n, ncols],
        "residues": [_fmt_matrix(r) for r in residues],
        "poly_part": [_fmt_matrix(q) for q in poly],
    }


def _decompose(m: Matrix, points):
    nres = len(points)
    residues = [[[Fraction(0)] * m.ncols for _ in range(m.nrows)] for _ in range(nres)]
    polys = {}
    for i in range(m.nrows):
        for j in range(m.ncols):
            f = RationalFunction._coerce(m[i, j])
            parts = partial_fraction_parts(f, points)
            if parts is None:
                raise ValueError(f"entry ({i},{j}) has a pole that is not simple or not at a given point")
            res, poly = parts
            for k in range(nres):
                residues[k][i][j] = res[k]
            polys[i, j] = poly
    deg = max((len(p.coeffs) for p in polys.values()), default=0)
    poly = [
        [[polys[i, j].coeffs[q] if q < len(polys[i, j].coeffs) else Fraction(0) for j in range(m.ncols)]
         for i in range(m.nrows)]
        for q in range(deg)
    ]
    return residues, poly


def _parse_matrix(obj, shape, what: str) -> list[list[Fraction]]:
    nrows, ncols = shape
    if not isinstance(obj, list) or len(obj) != nrows:
        raise DocumentError(f"{what}: expected {nrows} rows")
    out = []
    for r in obj:
        if not isinstance(r, list) or len(r) != ncols:
            raise DocumentError(f"{what}: expected rows of length {ncols}")
        row = []
        for x in r:
            if not isinstance(x, str):
                raise DocumentError(f'{what}: scalars must be "p/q" strings')
            try:
                row.append(parse_rational(x))
            except ValueError as exc:
                raise DocumentError(f"{what}: {exc}") from None
        out.append(row)
    return out


def parse_solution_document(text: str) -> tuple[KZSystem, Matrix]:
    """Decode a solution document into its system and rational-function matrix."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise DocumentError(f'unsupported schema {doc.get("schema")!r}, expected "{SCHEMA}"')
    for key in ("n", "rho", "points", "shape", "residues", "poly_part"):
        if key not in doc:
            raise DocumentError(f"missing field {key!r}")
    shape = doc["shape"]
    if (
        not isinstance(shape, list)
        or len(shape) != 2
        or not all(isinstance(x, int) and x > 0 for x in shape)
    ):
        raise DocumentError("shape must be [rows, cols]")
    pts = doc["points"]
    if not isinstance(pts, list) or not all(isinstance(p, str) for p in pts):
        raise DocumentError('points must be a list of "p/q" strings')
    try:
        sys = KZSystem(doc["n"], tuple(parse_rational(p) for p in pts), doc["rho"])
    except (InvalidSystemError, ValueError) as exc:
        raise DocumentError(str(exc)) from None
    if shape[0] != sys.n:
        raise DocumentError(f"shape has {shape[0]} rows but n = {sys.n}")
    res = doc["residues"]
    if not isinstance(res, list) or len(res) != len(sys.points):
        raise DocumentError(f"expected {len(sys.points)} residue matrices")
    residues = [_parse_matrix(r, shape, f"residues[{k}]") for k, r in enumerate(res)]
    if not isinstance(doc["poly_part"], list):
        raise DocumentError("poly_part must be a list")
    poly = [_parse_matrix(q, shape, f"poly_part[{k}]") for k, q in enumerate(doc["poly_part"])]
    return sys, matrix_from_parts(sys.points, residues, poly, shape)


def matrix_from_parts(points, residues, poly, shape) -> Matrix:
    nrows, ncols = shape
    den = Polynomial.from_roots(points)
    cofactors = [den.exact_div(Polynomial.linear_root(z)) for z in points]
    rows = []
    for i in range(nrows):
        row = []
        for j in range(ncols):
            num = Polynomial()
            for cof, lk in zip(cofactors, residues):
                if lk[i][j]:
                    num = num + cof * lk[i][j]
            q = Polynomial([qq[i][j] for qq in poly])
            row.append(RationalFunction(num + q * den, den))
        rows.append(row)
    return Matrix(rows)


def matrix_from_document(doc: dict) -> Matrix:
    return parse_solution_document(dumps(doc))[1]
