"""Exact arithmetic in real quadratic fields Q(sqrt d).

Newton-polygon root extraction occasionally needs square roots of rationals
(for example the roots of ``x^2 - 2``).  Elements are kept as ``a + b*sqrt(d)``
with rational ``a``, ``b`` and a squarefree integer ``d > 1``.  Mixing two
different radicands is refused: it would need a degree-4 extension.
"""
from __future__ import annotations

import math
from fractions import Fraction

from gmpy2 import mpq, mpz, is_square, isqrt

from .errors import UnsupportedExtension

Rational = mpq


def as_mpq(x) -> mpq:
    if isinstance(x, type(mpq())):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x)
    raise TypeError(f"not a rational: {x!r}")


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(s, k)`` with ``n == s * k**2`` and ``s`` squarefree (n > 0)."""
    n = int(n)
    if n <= 0:
        raise ValueError("squarefree_part expects a positive integer")
    s, k = 1, 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        if n % p == 0:
            n //= p
            s *= p
        p += 1 if p == 2 else 2
    return s * n, k


class QuadraticNumber:
    """``a + b*sqrt(d)``; always built through :func:`qnum` so ``b != 0``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = as_mpq(a)
        self.b = as_mpq(b)
        self.d = int(d)

    # -- helpers -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise UnsupportedExtension(
                    f"cannot combine sqrt({self.d}) and sqrt({other.d}): degree > 2 extension"
                )
            return other.a, other.b
        try:
            return as_mpq(other), mpq(0)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return qnum(self.a + o[0], self.b + o[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return qnum(self.a - o[0], self.b - o[1], self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return qnum(o[0] - self.a, o[1] - self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = o
        return qnum(self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.b * self.b * self.d
        return qnum(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadraticNumber):
            return self * other.inverse()
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return qnum(self.a / o[0], self.b / o[0], self.d)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = mpq(1), self
        while n:
            if n & 1:
                result = base * result
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sa == 0:
            return sb
        if sb == 0:
            return sa
        # opposite signs: compare a^2 with b^2 d
        lhs, rhs = self.a * self.a, self.b * self.b * self.d
        return sa if lhs > rhs else sb

    def __bool__(self):
        return True  # qnum() collapses zero irrational parts

    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        return False

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def sqrt(self):
        """Square root inside the same field, if it exists there."""
        if self.sign() < 0:
            raise ValueError("square root of a negative number")
        # (x + y sqrt d)^2 = x^2 + d y^2 + 2xy sqrt d
        disc = self.a * self.a - self.b * self.b * self.d
        r = rational_sqrt(disc)
        if r is None:
            raise UnsupportedExtension(f"sqrt({self}) needs a degree-4 extension")
        for x2 in ((self.a + r) / 2, (self.a - r) / 2):
            x = rational_sqrt(x2)
            if x is None or x == 0:
                continue
            y = self.b / (2 * x)
            cand = qnum(x, y, self.d)
            if cand * cand == self:
                return cand if _sign(cand) > 0 else -cand
        raise UnsupportedExtension(f"sqrt({self}) needs a degree-4 extension")

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return render_coeff(self)


def rational_sqrt(x) -> mpq | None:
    x = as_mpq(x)
    if x < 0:
        return None
    n, m = x.numerator, x.denominator
    if is_square(n) and is_square(m):
        return mpq(isqrt(n), isqrt(m))
    return None


def qnum(a, b, d: int):
    """Canonical constructor: returns a plain ``mpq`` when ``b == 0``."""
    b = as_mpq(b)
    if b == 0:
        return as_mpq(a)
    return QuadraticNumber(a, b, d)


def sqrt_rational(x):
    """Exact square root of a non-negative rational, possibly irrational."""
    x = as_mpq(x)
    if x < 0:
        raise ValueError("square root of a negative rational")
    r = rational_sqrt(x)
    if r is not None:
        return r
    # sqrt(n/m) = sqrt(n*m)/m
    n, m = int(x.numerator), int(x.denominator)
    s, k = squarefree_part(n * m)
    return qnum(0, mpq(k, m), s)


def coeff_sqrt(c):
    if isinstance(c, QuadraticNumber):
        return c.sqrt()
    return sqrt_rational(c)


def _sign(c) -> int:
    if isinstance(c, QuadraticNumber):
        return c.sign()
    return (c > 0) - (c < 0)


coeff_sign = _sign


def render_rational(q) -> str:
    q = as_mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def render_coeff(c) -> str:
    if isinstance(c, QuadraticNumber):
        rad = f"sqrt({c.d})"
        if c.b == 1:
            irr = rad
        elif c.b == -1:
            irr = f"-{rad}"
        else:
            irr = f"{render_rational(c.b)}*{rad}"
        if c.a == 0:
            return irr
        if irr.startswith("-"):
            return f"{render_rational(c.a)} - {irr[1:]}"
        return f"{render_rational(c.a)} + {irr}"
    return render_rational(c)


def to_float(c) -> float:
    return float(c)


__all__ = [
    "QuadraticNumber",
    "qnum",
    "sqrt_rational",
    "coeff_sqrt",
    "coeff_sign",
    "rational_sqrt",
    "render_coeff",
    "render_rational",
    "as_mpq",
    "squarefree_part",
    "mpz",
]
