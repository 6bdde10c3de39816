"""Truncated real Puiseux series over Q.

A series is a finite, sorted tuple of ``(exponent, coefficient)`` terms plus a
truncation order ``trunc``: the true element agrees with the listed terms for
all exponents below ``trunc`` and is unknown from there on.  Exact series carry
``trunc = inf``.  Exponents are rationals (``gmpy2.mpq``); coefficients are
rationals or :class:`~tconvex.quadratic.QuadraticNumber`.

The ordering is the usual one on R((t^Q)): ``t`` is a positive infinitesimal,
so the sign of a nonzero series is the sign of its leading coefficient.
"""
from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable

from gmpy2 import mpq

from .errors import DenominatorLimitError, TruncationError, UndecidableError, UnsupportedExtension
from .quadratic import QuadraticNumber, coeff_sign, render_coeff, render_rational

INF = math.inf
MPQ = type(mpq())


@dataclass(frozen=True)
class Precision:
    order: mpq = mpq(8)
    max_den: int = 64


_PRECISION = contextvars.ContextVar("tconvex_precision", default=Precision())


def precision() -> Precision:
    return _PRECISION.get()


@contextlib.contextmanager
def working_precision(order=None, max_den: int | None = None):
    """Temporarily change the default truncation order / denominator limit."""
    cur = _PRECISION.get()
    new = Precision(
        mpq(order) if order is not None else cur.order,
        int(max_den) if max_den is not None else cur.max_den,
    )
    token = _PRECISION.set(new)
    try:
        yield new
    finally:
        _PRECISION.reset(token)


def check_den(e) -> None:
    lim = _PRECISION.get().max_den
    if e.denominator > lim:
        raise DenominatorLimitError(
            f"exponent {render_rational(e)} has denominator > {lim}"
        )


def vadd(a, b):
    """Sum in the value group with infinity."""
    if a == INF or b == INF:
        return INF
    return a + b


def vmin(*xs):
    m = INF
    for x in xs:
        if x < m:
            m = x
    return m


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _is_scalar(x) -> bool:
    return isinstance(x, (int, MPQ, Fraction, QuadraticNumber))


class PuiseuxSeries:
    __slots__ = ("terms", "trunc", "_hash")

    def __init__(self, terms: tuple = (), trunc=INF):
        self.terms = terms
        self.trunc = trunc
        self._hash = None

    # -- construction ------------------------------------------------------
    @classmethod
    def from_terms(cls, items: Iterable | dict, trunc=INF) -> "PuiseuxSeries":
        acc: dict = {}
        if isinstance(items, dict):
            items = items.items()
        for e, c in items:
            e = mpq(e)
            if e >= trunc:
                continue
            acc[e] = acc.get(e, 0) + c
        terms = tuple(
            (e, _norm_coeff(c)) for e, c in sorted(acc.items()) if c != 0
        )
        if trunc != INF:
            trunc = mpq(trunc)
        return cls(terms, trunc)

    @classmethod
    def const(cls, c) -> "PuiseuxSeries":
        c = _norm_coeff(c)
        if c == 0:
            return ZERO
        return cls(((mpq(0), c),))

    @classmethod
    def monomial(cls, c, e) -> "PuiseuxSeries":
        c = _norm_coeff(c)
        if c == 0:
            return ZERO
        return cls(((mpq(e), c),))

    # -- inspection --------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.trunc == INF

    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return not self.terms and self.trunc == INF

    def is_known_nonzero(self) -> bool:
        return bool(self.terms)

    def is_truncated_zero(self) -> bool:
        return not self.terms and self.trunc != INF

    def val(self):
        if self.terms:
            return self.terms[0][0]
        if self.trunc == INF:
            return INF
        raise TruncationError(
            f"valuation undetermined: series is zero up to t^{render_rational(self.trunc)}"
        )

    def val_lower_bound(self):
        """Known lower bound for the valuation (never raises)."""
        return self.terms[0][0] if self.terms else self.trunc

    def lead(self):
        """``(exponent, coefficient)`` of the leading term."""
        if self.terms:
            return self.terms[0]
        self.val()
        raise ZeroDivisionError("zero series has no leading term")

    def coeff(self, e):
        """Coefficient of ``t^e``; raises if ``e`` is beyond the truncation."""
        if e >= self.trunc:
            raise TruncationError(
                f"coefficient of t^{render_rational(mpq(e))} beyond truncation"
            )
        for ee, c in self.terms:
            if ee == e:
                return c
            if ee > e:
                break
        return mpq(0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1 and self.trunc == INF

    def is_constant(self) -> bool:
        return self.trunc == INF and all(e == 0 for e, _ in self.terms)

    def constant_value(self):
        if not self.terms:
            return mpq(0)
        return self.terms[0][1]

    def is_rational_coeffs(self) -> bool:
        return all(not isinstance(c, QuadraticNumber) for _, c in self.terms)

    def truncate(self, order) -> "PuiseuxSeries":
        order = mpq(order) if order != INF else INF
        if order >= self.trunc:
            return self
        return PuiseuxSeries(tuple(t for t in self.terms if t[0] < order), order)

    def exponent_lcm(self) -> int:
        m = 1
        for e, _ in self.terms:
            m = math.lcm(m, int(e.denominator))
        return m

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            if not _is_scalar(other):
                return NotImplemented
            other = PuiseuxSeries.const(other)
        if not other.terms and other.trunc == INF:
            return self
        if not self.terms and self.trunc == INF:
            return other
        trunc = self.trunc if self.trunc < other.trunc else other.trunc
        acc: dict = {}
        for e, c in self.terms:
            if e < trunc:
                acc[e] = c
        for e, c in other.terms:
            if e < trunc:
                acc[e] = acc[e] + c if e in acc else c
        terms = tuple((e, c) for e, c in sorted(acc.items()) if c != 0)
        return PuiseuxSeries(terms, trunc)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(tuple((e, -c) for e, c in self.terms), self.trunc)

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            if not _is_scalar(other):
                return NotImplemented
            other = PuiseuxSeries.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            if not _is_scalar(other):
                return NotImplemented
            c = _norm_coeff(other)
            if c == 0:
                return ZERO
            return PuiseuxSeries(tuple((e, k * c) for e, k in self.terms), self.trunc)
        if len(other.terms) == 1 and other.trunc == INF:
            return self._times_monomial(*other.terms[0])
        if len(self.terms) == 1 and self.trunc == INF:
            return other._times_monomial(*self.terms[0])
        vx = self.val_lower_bound()
        vy = other.val_lower_bound()
        trunc = vmin(vadd(vx, other.trunc), vadd(vy, self.trunc), vadd(self.trunc, other.trunc))
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if e >= trunc:
                    break
                p = c1 * c2
                acc[e] = acc[e] + p if e in acc else p
        terms = tuple((e, c) for e, c in sorted(acc.items()) if c != 0)
        return PuiseuxSeries(terms, trunc)

    __rmul__ = __mul__

    def _times_monomial(self, e0, c0) -> "PuiseuxSeries":
        return PuiseuxSeries(tuple((e + e0, c * c0) for e, c in self.terms),
                             vadd(self.trunc, e0))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inv(self, order=None) -> "PuiseuxSeries":
        """Multiplicative inverse, exact for monomials.

        For a non-monomial the geometric series is cut at ``order`` (default:
        the working truncation order); a truncated input additionally limits
        the result to ``trunc - 2*val``.
        """
        if not self.terms:
            if self.trunc == INF:
                raise ZeroDivisionError("inverse of zero")
            self.val()
        v, c = self.terms[0]
        cinv = 1 / c if isinstance(c, QuadraticNumber) else mpq(1) / c
        if len(self.terms) == 1 and self.trunc == INF:
            return PuiseuxSeries(((-v, _norm_coeff(cinv)),))
        if order is None:
            order = _PRECISION.get().order
        target = vmin(mpq(order), self.trunc - 2 * v if self.trunc != INF else INF)
        # x = c t^v (1 + u), val(u) > 0; 1/x = c^-1 t^-v sum (-u)^k
        u = PuiseuxSeries(
            tuple((e - v, k * cinv) for e, k in self.terms[1:]),
            self.trunc - v if self.trunc != INF else INF,
        )
        rel = target + v  # relative precision needed
        if rel <= 0:
            return PuiseuxSeries((), target)
        vu = u.val_lower_bound()
        acc = ONE.truncate(rel)
        power = ONE.truncate(rel)
        if vu != INF:
            nu = -u
            k = 1
            while k * vu < rel:
                power = (power * nu).truncate(rel)
                acc = acc + power
                k += 1
        res = PuiseuxSeries(
            tuple((e - v, _norm_coeff(k * cinv)) for e, k in acc.terms if e - v < target),
            target,
        )
        return res

    def __truediv__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self * other.inv()
        if not _is_scalar(other):
            return NotImplemented
        c = _norm_coeff(other)
        inv = 1 / c if isinstance(c, QuadraticNumber) else mpq(1) / c
        return self * inv

    def __rtruediv__(self, other):
        return self.inv() * other

    def shift(self, e) -> "PuiseuxSeries":
        """Multiply by ``t^e`` exactly."""
        e = mpq(e)
        return PuiseuxSeries(
            tuple((x + e, c) for x, c in self.terms),
            self.trunc + e if self.trunc != INF else INF,
        )

    # -- order -------------------------------------------------------------
    def sign(self) -> int:
        if self.terms:
            return coeff_sign(self.terms[0][1])
        if self.trunc == INF:
            return 0
        raise UndecidableError(
            f"sign undecidable: zero up to t^{render_rational(self.trunc)}"
        )

    def compare(self, other) -> Ordering:
        return Ordering((self - other).sign())

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # Structural equality: same known terms and same truncation order.
    def __eq__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self.terms == other.terms and self.trunc == other.trunc
        if _is_scalar(other):
            return self == PuiseuxSeries.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.terms, self.trunc))
        return self._hash

    def __float__(self):
        raise TypeError("Puiseux series have no float value")

    # -- rendering ---------------------------------------------------------
    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"PuiseuxSeries({render(self)!r})"

    def to_json(self) -> str:
        return render(self)


def _norm_coeff(c):
    if isinstance(c, QuadraticNumber):
        return c
    if isinstance(c, MPQ):
        return c
    return mpq(c)


def render_monomial(c, e) -> str:
    if e == 0:
        return render_coeff(c)
    tpart = "t" if e == 1 else (
        f"t^{e.numerator}" if e.denominator == 1 and e > 0 else f"t^({render_rational(e)})"
    )
    if isinstance(c, QuadraticNumber):
        return f"({render_coeff(c)})*{tpart}"
    if c == 1:
        return tpart
    if c == -1:
        return f"-{tpart}"
    return f"{render_rational(c)}*{tpart}"


def render(x: PuiseuxSeries) -> str:
    parts = [render_monomial(c, e) for e, c in x.terms]
    if x.trunc != INF:
        parts.append(f"O({render_monomial(mpq(1), x.trunc)})")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


def _scaled_terms(terms, k):
    for e, c in terms:
        yield e, c * k


def val_of_combination(items) -> object:
    """Valuation of ``sum(k * x for k, x in items)`` without building the sum.

    ``k`` are scalars.  Terms are merged lazily in increasing exponent order,
    so the cost is proportional to the cancelling prefix.  A sum that is zero
    below the combined truncation returns ``("bound", trunc)``.
    """
    import heapq

    trunc = INF
    iters = []
    for k, x in items:
        if x.trunc < trunc:
            trunc = x.trunc
        iters.append(_scaled_terms(x.terms, k))
    cur_e = None
    acc = 0
    for e, c in heapq.merge(*iters, key=lambda t: t[0]):
        if e >= trunc:
            break
        if e != cur_e:
            if cur_e is not None and acc != 0:
                return cur_e
            cur_e, acc = e, c
        else:
            acc = acc + c
    if cur_e is not None and acc != 0 and cur_e < trunc:
        return cur_e
    if trunc == INF:
        return INF
    return ("bound", trunc)


def diff_val_bound(x: PuiseuxSeries, y: PuiseuxSeries):
    """Lower bound for ``val(x - y)`` that also works across quadratic fields.

    Coefficients from different fields ``Q(sqrt d)`` cannot be subtracted
    here, but they are equal only when both are the same rational, so the
    first exponent where they differ is still known.
    """
    trunc = min(x.trunc, y.trunc)
    tx, ty = x.terms, y.terms
    i = j = 0
    while i < len(tx) or j < len(ty):
        ex = tx[i][0] if i < len(tx) else INF
        ey = ty[j][0] if j < len(ty) else INF
        e = min(ex, ey)
        if e >= trunc:
            break
        if ex != ey:
            return e
        try:
            if tx[i][1] - ty[j][1] != 0:
                return e
        except UnsupportedExtension:
            return e
        i += 1
        j += 1
    return trunc


def parse_series(text: str) -> PuiseuxSeries:
    """Parse a series written in the polynomial grammar with no variables."""
    from .formula import parse_constant

    return parse_constant(text)


def series(x) -> PuiseuxSeries:
    """Coerce ints, rationals, strings and series into a series."""
    if isinstance(x, PuiseuxSeries):
        return x
    if isinstance(x, str):
        return parse_series(x)
    return PuiseuxSeries.const(x)


def T(e=1) -> PuiseuxSeries:
    """The monomial ``t^e``."""
    return PuiseuxSeries(((mpq(e), mpq(1)),))


def val(x: PuiseuxSeries):
    return x.val()


def compare(x: PuiseuxSeries, y: PuiseuxSeries) -> Ordering:
    return series(x).compare(series(y))


def add(x, y) -> PuiseuxSeries:
    return series(x) + series(y)


def mul(x, y) -> PuiseuxSeries:
    return series(x) * series(y)


def neg(x) -> PuiseuxSeries:
    return -series(x)


def inv(x) -> PuiseuxSeries:
    return series(x).inv()


def truncate(x, order) -> PuiseuxSeries:
    return series(x).truncate(order)


ZERO = PuiseuxSeries()
ONE = PuiseuxSeries(((mpq(0), mpq(1)),))


def render_value(v) -> str:
    """Render an element of the value group with infinity."""
    if v == INF:
        return "inf"
    return render_rational(v)


__all__ = [
    "PuiseuxSeries",
    "Ordering",
    "INF",
    "ZERO",
    "ONE",
    "T",
    "series",
    "parse_series",
    "render",
    "render_value",
    "val",
    "compare",
    "vadd",
    "val_of_combination",
    "vmin",
    "working_precision",
    "precision",
    "check_den",
    "add",
    "mul",
    "neg",
    "inv",
    "truncate",
    "diff_val_bound",
]
