"""Dense exact linear algebra over Q and over Q(z).

A :class:`Matrix` holds either :class:`~fractions.Fraction` entries or
:class:`~kzrational.rational_core.RationalFunction` entries.  Columns
passed around outside a matrix are plain tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .rational_core import DomainError, Polynomial, RationalFunction, as_rational, poly_gcd

__all__ = [
    "DimensionError",
    "Matrix",
    "SingularMatrixError",
    "SolveReport",
    "characteristic_polynomial",
    "determinant",
    "dot",
    "inverse",
    "is_zero_vector",
    "lin_comb",
    "solve_singular",
    "vandermonde_inverse",
    "vandermonde_residues",
]


class DimensionError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


class Matrix:
    """Immutable row-major matrix."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise DimensionError("ragged rows")

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> "Matrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int, zero=Fraction(0)) -> "Matrix":
        return cls([[zero] * ncols for _ in range(nrows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Matrix":
        if not columns:
            raise DimensionError("no columns")
        return cls(zip(*columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows)) if self.rows else self

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def is_function_matrix(self) -> bool:
        return any(isinstance(x, RationalFunction) for r in self.rows for x in r)

    def map(self, fn: Callable) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self.rows])

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Matrix({[[str(x) for x in r] for r in self.rows]})"

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, c) -> "Matrix":
        return self.map(lambda x: x * c)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return Matrix([[dot(r, c) for c in cols] for r in self.rows])
        # column vector
        other = tuple(other)
        if self.ncols != len(other):
            raise DimensionError(f"cannot apply {self.shape} matrix to length-{len(other)} vector")
        return tuple(dot(r, other) for r in self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)


def dot(u: Sequence, v: Sequence):
    acc = None
    for x, y in zip(u, v):
        if x == 0 or y == 0:
            continue
        t = x * y
        acc = t if acc is None else acc + t
    if acc is None:
        if any(isinstance(x, RationalFunction) for x in (*u, *v)):
            return RationalFunction()
        return Fraction(0)
    return acc


def lin_comb(coeffs: Sequence, vectors: Sequence[Sequence]) -> tuple:
    """``sum(c * v)`` for equal-length column tuples."""
    if not vectors:
        raise DimensionError("empty linear combination")
    n = len(vectors[0])
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c == 0:
            continue
        for i in range(n):
            if v[i] != 0:
                out[i] = out[i] + c * v[i]
    return tuple(out)


def is_zero_vector(v: Sequence) -> bool:
    return all(x == 0 for x in v)


# ---------------------------------------------------------------------------
# fraction-free elimination


def _bareiss(rows: list[list], zero, exact_div) -> tuple[object, list[list], int]:
    """In-place Bareiss forward elimination on a (possibly augmented) matrix.

    Works over any integral domain given ``exact_div``.  Only the first
    ``len(rows)`` columns are used for pivoting.  Returns the last pivot
    (``+-det`` of the square part, zero if singular), the reduced rows and
    the sign of the row permutation.
    """
    n = len(rows)
    width = len(rows[0]) if rows else 0
    sign = 1
    prev = None
    for k in range(n):
        piv = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if piv is None:
            return zero, rows, sign
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        pk = rows[k][k]
        for i in range(k + 1, n):
            rik = rows[i][k]
            ri = rows[i]
            for j in range(k + 1, width):
                v = pk * ri[j] - rik * rows[k][j]
                ri[j] = v if prev is None else exact_div(v, prev)
            ri[k] = zero
        prev = pk
    return (rows[n - 1][n - 1] if n else None), rows, sign


def _fraction_det(a: Matrix) -> Fraction:
    # clear denominators row-wise so Bareiss runs over the integers
    scale = Fraction(1)
    rows = []
    for r in a.rows:
        lcm = 1
        for x in r:
            d = Fraction(x).denominator
            lcm = math.lcm(lcm, d)
        rows.append([int(Fraction(x) * lcm) for x in r])
        scale /= lcm
    if not rows:
        return Fraction(1)
    last, _, sign = _bareiss(rows, 0, lambda u, v: u // v)
    return Fraction(sign * last) * scale


def _common_denominator(a: Matrix) -> Polynomial:
    den = Polynomial((1,))
    for r in a.rows:
        for x in r:
            if isinstance(x, RationalFunction) and not x.den.is_constant():
                g = poly_gcd(den, x.den)
                den = den * x.den.exact_div(g)
    return den


def _as_poly_matrix(a: Matrix, den: Polynomial) -> list[list[Polynomial]]:
    out = []
    for r in a.rows:
        row = []
        for x in r:
            f = RationalFunction._coerce(x)
            row.append(f.num * den.exact_div(f.den))
        out.append(row)
    return out


def _poly_det(rows: list[list[Polynomial]]) -> Polynomial:
    if not rows:
        return Polynomial((1,))
    last, _, sign = _bareiss(rows, Polynomial(), lambda u, v: u.exact_div(v))
    return last * sign


def determinant(a: Matrix):
    """Exact determinant.

    Over Q this is Bareiss elimination on the integer matrix obtained by
    clearing row denominators.  Over Q(z) the matrix is multiplied by a
    common denominator ``D`` and Bareiss runs over Q[z]; the result is
    ``det(D a) / D^n``.
    """
    if not a.is_square():
        raise DimensionError(f"determinant of non-square {a.shape} matrix")
    if not a.is_function_matrix():
        return _fraction_det(a)
    den = _common_denominator(a)
    num = _poly_det(_as_poly_matrix(a, den))
    return RationalFunction(num, den**a.nrows)


def characteristic_polynomial(a: Matrix) -> Polynomial:
    """``det(x I - a)`` for a rational matrix, via Bareiss over Q[x]."""
    if not a.is_square():
        raise DimensionError("characteristic polynomial of a non-square matrix")
    n = a.nrows
    rows = [
        [Polynomial((-as_rational(a[i, j]), 1 if i == j else 0)) for j in range(n)]
        for i in range(n)
    ]
    return _poly_det(rows)


def inverse(a: Matrix) -> Matrix:
    """Exact inverse over Q or Q(z).

    For function matrices, ``a = N/D`` with ``N`` polynomial; a
    fraction-free Gauss-Jordan pass on ``[N | I]`` yields ``X`` with
    ``N X = d I`` and ``a^{-1} = D X / d``.
    """
    if not a.is_square():
        raise DimensionError(f"inverse of non-square {a.shape} matrix")
    n = a.nrows
    if not a.is_function_matrix():
        return _fraction_inverse(a)
    den = _common_denominator(a)
    one, zero = Polynomial((1,)), Polynomial()
    rows = _as_poly_matrix(a, den)
    aug = [rows[i] + [one if i == j else zero for j in range(n)] for i in range(n)]
    d, aug, _ = _bareiss(aug, zero, lambda u, v: u.exact_div(v))
    if d.is_zero():
        raise SingularMatrixError("matrix determinant is identically zero")
    x = [[zero] * n for _ in range(n)]
    # fraction-free back substitution: every quotient is exact (Cramer)
    for i in range(n - 1, -1, -1):
        uii = aug[i][i]
        for c in range(n):
            acc = aug[i][n + c] * d
            for j in range(i + 1, n):
                if aug[i][j]:
                    acc = acc - aug[i][j] * x[j][c]
            x[i][c] = acc.exact_div(uii)
    return Matrix([[RationalFunction(den * x[i][j], d) for j in range(n)] for i in range(n)])


def _fraction_inverse(a: Matrix) -> Matrix:
    n = a.nrows
    rows = [
        [Fraction(x) for x in a.rows[i]] + [Fraction(int(i == j)) for j in range(n)]
        for i in range(n)
    ]
    for k in range(n):
        piv = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        rows[k], rows[piv] = rows[piv], rows[k]
        inv = 1 / rows[k][k]
        rows[k] = [x * inv for x in rows[k]]
        for i in range(n):
            if i != k and rows[i][k] != 0:
                f = rows[i][k]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[k])]
    return Matrix([r[n:] for r in rows])


# ---------------------------------------------------------------------------
# singular-aware solves


@dataclass(frozen=True)
class SolveReport:
    """Outcome of ``a x = b`` for a possibly singular square ``a``."""

    particular: tuple | None
    kernel_basis: list[tuple] = field(default_factory=list)

    @property
    def solvable(self) -> bool:
        return self.particular is not None


def _rref(a: Matrix, b: Sequence[Fraction]):
    n, m = a.shape
    rows = [[Fraction(x) for x in a.rows[i]] + [Fraction(b[i])] for i in range(n)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return rows, pivots


def solve_singular(a: Matrix, b: Sequence, orthogonal: bool | None = None) -> SolveReport:
    """Solve ``a x = b`` exactly, reporting the kernel.

    The particular solution is pinned so that it is deterministic: with
    ``orthogonal`` it has zero component along the kernel (for a symmetric
    operator such as ``c I +- T`` this is zero component along the kernel
    eigenvectors); otherwise the free coordinates are set to zero.
    ``orthogonal=None`` picks the orthogonal rule exactly when ``a`` is
    symmetric.
    """
    n, m = a.shape
    if len(b) != n:
        raise DimensionError(f"rhs length {len(b)} does not match {n} rows")
    rows, pivots = _rref(a, b)
    free = [c for c in range(m) if c not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * m
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        kernel.append(tuple(v))
    inconsistent = any(rows[i][m] != 0 for i in range(len(pivots), n))
    if inconsistent:
        return SolveReport(None, kernel)
    x = [Fraction(0)] * m
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][m]
    if orthogonal is None:
        orthogonal = a.is_symmetric()
    if orthogonal and kernel:
        x = list(_remove_span_component(tuple(x), kernel))
    return SolveReport(tuple(x), kernel)


def _remove_span_component(x: tuple, basis: list[tuple]) -> tuple:
    """Orthogonal projection of ``x`` onto the complement of ``span(basis)``."""
    k = len(basis)
    gram = Matrix([[dot(u, v) for v in basis] for u in basis])
    rhs = [dot(u, x) for u in basis]
    coeffs = _fraction_inverse(gram) @ rhs
    shift = lin_comb(coeffs, basis)
    return tuple(xi - si for xi, si in zip(x, shift))


def vandermonde_inverse(points: Sequence) -> list[list[Fraction]]:
    """Inverse of ``M1[p][k] = z_k**p`` (p, k from 0).

    Row ``k`` holds the ascending coefficients of the Lagrange basis
    polynomial ``prod_{i != k} (x - z_i) / (z_k - z_i)``.
    """
    pts = [as_rational(p) for p in points]
    for i in range(len(pts)):
        for j in range(i):
            if pts[i] == pts[j]:
                raise DomainError(f"repeated Vandermonde node at indices {j + 1},{i + 1}")
    out = []
    s = len(pts)
    for k, zk in enumerate(pts):
        others = [zi for i, zi in enumerate(pts) if i != k]
        basis = Polynomial.from_roots(others)
        scale = Fraction(1)
        for zi in others:
            scale *= zk - zi
        coeffs = list(basis.coeffs) + [Fraction(0)] * (s - len(basis.coeffs))
        out.append([c / scale for c in coeffs])
    return out


def vandermonde_residues(points: Sequence, moments: Sequence[Sequence]) -> list[tuple]:
    """Columns ``L_k`` with ``sum_k z_k**(p-1) L_k = G_p`` for ``p = 1..len(points)``.

    The block system is ``I_n``-blocked, so it is solved as one scalar
    Vandermonde inverse applied to the stacked moment columns.
    """
    if len(moments) != len(points):
        raise DimensionError(f"need {len(points)} moments, got {len(moments)}")
    vinv = vandermonde_inverse(points)
    return [lin_comb(row, moments) for row in vinv]
