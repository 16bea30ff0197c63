"""Exact scalars, univariate polynomials and rational functions over Q.

Scalars are :class:`fractions.Fraction`.  Polynomials keep their
coefficients in ascending order with no trailing zeros, and rational
functions are always stored reduced with a monic denominator, so two
equal functions compare equal structurally.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "DomainError",
    "PoleError",
    "Polynomial",
    "RationalFunction",
    "Z",
    "as_rational",
    "format_rational",
    "parse_rational",
    "poly_gcd",
]

Scalar = Union[int, Fraction]

NEG_INF = float("-inf")

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


class DomainError(ValueError):
    """Raised when an operation is undefined for its inputs (e.g. gcd(0, 0))."""


class PoleError(ZeroDivisionError):
    """Evaluation of a rational function at one of its poles."""

    def __init__(self, location: Fraction):
        super().__init__(f"pole at z = {format_rational(location)}")
        self.location = location


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; the sign may only precede ``p``."""
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


class Polynomial:
    """Immutable univariate polynomial with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: tuple[Fraction, ...]) -> "Polynomial":
        # trusted constructor: coeffs already Fractions and trimmed
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> "Polynomial":
        return cls([0] * degree + [c])

    @classmethod
    def linear_root(cls, root: Scalar) -> "Polynomial":
        """The monic factor ``z - root``."""
        return cls((-as_rational(root), 1))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> "Polynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls.linear_root(r)
        return p

    @property
    def degree(self):
        """Degree; the zero polynomial has degree ``-inf``."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self):
        return self.to_text()

    def to_text(self, var: str = "z") -> str:
        """Ascending-power rendering, e.g. ``-1 + 2*z^2``."""
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                body = format_rational(abs(c))
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if abs(c) == 1 else f"{format_rational(abs(c))}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial((other,))
        return NotImplemented

    def __neg__(self):
        return Polynomial._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Polynomial._raw(())
            return Polynomial._raw(tuple(c * other for c in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial._raw(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Polynomial._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Polynomial._raw((Fraction(1),))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "Polynomial"):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        if len(rem) - 1 < db:
            return Polynomial._raw(()), self
        inv_lead = 1 / other.coeffs[-1]
        quot = [Fraction(0)] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] * inv_lead
            quot[k - db] = c
            if c:
                for i in range(db + 1):
                    rem[k - db + i] -= c * bc[i]
        return Polynomial(quot), Polynomial(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other!r} does not divide {self!r}")
        return q

    def monic(self) -> "Polynomial":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        inv = 1 / self.coeffs[-1]
        return Polynomial._raw(tuple(c * inv for c in self.coeffs))

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm.

    Remainders are made monic at every step to keep coefficient growth in
    check.  ``poly_gcd(p, 0)`` is ``p.monic()``.
    """
    if p.is_zero() and q.is_zero():
        raise DomainError("gcd of two zero polynomials is undefined")
    a, b = p.monic(), q.monic()
    while b:
        if b.is_constant():
            return Polynomial._raw((Fraction(1),))
        a, b = b, (a % b).monic()
    return a


class RationalFunction:
    """Quotient ``num/den`` of polynomials, kept reduced with monic ``den``."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num = num if isinstance(num, Polynomial) else Polynomial((as_rational(num),))
        den = den if isinstance(den, Polynomial) else Polynomial((as_rational(den),))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, Polynomial._raw((Fraction(1),))
            return
        if not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lead
        if lc != 1:
            num, den = num * (1 / lc), den.monic()
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        f = object.__new__(cls)
        f.num, f.den = num, den
        return f

    @classmethod
    def polynomial(cls, p: Polynomial) -> "RationalFunction":
        return cls._raw(p, Polynomial._raw((Fraction(1),)))

    @classmethod
    def simple_pole(cls, location: Scalar, residue: Scalar = 1) -> "RationalFunction":
        """``residue / (z - location)``."""
        return cls(Polynomial((residue,)), Polynomial.linear_root(location))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, Polynomial)):
            return self == RationalFunction._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self, var: str = "z") -> str:
        if self.den.is_constant():
            return self.num.to_text(var)
        return f"({self.num.to_text(var)}) / ({self.den.to_text(var)})"

    @staticmethod
    def _coerce(other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.polynomial(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.polynomial(Polynomial((other,)))
        return NotImplemented

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.is_constant():
            return RationalFunction._reduce_against(
                self.num * other.den + other.num * self.den, self.den * other.den, None
            )
        b_g = self.den.exact_div(g)
        d_g = other.den.exact_div(g)
        num = self.num * d_g + other.num * b_g
        # any common factor of num and b_g*d_g*g can only come from g
        return RationalFunction._reduce_against(num, b_g * d_g * g, g)

    __radd__ = __add__

    @staticmethod
    def _reduce_against(num: Polynomial, den: Polynomial, g) -> "RationalFunction":
        if num.is_zero():
            return RationalFunction._raw(num, Polynomial._raw((Fraction(1),)))
        if g is not None:
            h = poly_gcd(num, g)
            if not h.is_constant():
                num, den = num.exact_div(h), den.exact_div(h)
        lc = den.lead
        if lc != 1:
            num, den = num * (1 / lc), den.monic()
        return RationalFunction._raw(num, den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalFunction()
            return RationalFunction._raw(self.num * other, self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RationalFunction()
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if not g1.is_constant():
            a, d = a.exact_div(g1), d.exact_div(g1)
        if not g2.is_constant():
            c, b = c.exact_div(g2), b.exact_div(g2)
        return RationalFunction._reduce_against(a * c, b * d, None)

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of the zero function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        return RationalFunction._raw(self.num**k, self.den**k)

    def derivative(self) -> "RationalFunction":
        """Quotient rule, reduced."""
        if self.den.is_constant():
            return RationalFunction.polynomial(self.num.derivative())
        num = self.num.derivative() * self.den - self.num * self.den.derivative()
        return RationalFunction(num, self.den * self.den)

    def __call__(self, z0: Scalar) -> Fraction:
        z0 = as_rational(z0)
        d = self.den(z0)
        if d == 0:
            raise PoleError(z0)
        return self.num(z0) / d

    evaluate = __call__


Z = RationalFunction.polynomial(Polynomial((0, 1)))
