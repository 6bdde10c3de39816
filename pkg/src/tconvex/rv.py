"""The leading-term sorts RV and RV^(n), and balls.

``rvo(x)`` records the valuation and the leading coefficient of ``x``.  Two
nonzero series have the same class exactly when ``val(x - y) > val(x)``.
RV inherits a total order from the field: negative classes, then zero, then
positive classes.
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import DomainError, TruncationError
from .quadratic import QuadraticNumber, coeff_sign, render_coeff, render_rational
from .series import INF, PuiseuxSeries, ZERO, render_monomial, render_value, series


@dataclass(frozen=True)
class RvElement:
    gamma: object  # mpq, or INF for the zero class
    lead: object   # mpq | QuadraticNumber, 0 for the zero class

    @property
    def is_zero(self) -> bool:
        return self.gamma == INF

    def sign(self) -> int:
        return 0 if self.is_zero else coeff_sign(self.lead)

    def __mul__(self, other: "RvElement") -> "RvElement":
        return rv_mul(self, other)

    def __truediv__(self, other: "RvElement") -> "RvElement":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero class")
        if self.is_zero:
            return ZERO_RV
        inv = 1 / other.lead if isinstance(other.lead, QuadraticNumber) else mpq(1) / other.lead
        return RvElement(self.gamma - other.gamma, self.lead * inv)

    def __neg__(self):
        return self if self.is_zero else RvElement(self.gamma, -self.lead)

    def __lt__(self, other):
        return rv_compare(self, other) < 0

    def __le__(self, other):
        return rv_compare(self, other) <= 0

    def __gt__(self, other):
        return rv_compare(self, other) > 0

    def __ge__(self, other):
        return rv_compare(self, other) >= 0

    def representative(self) -> PuiseuxSeries:
        """The monomial ``lead * t^gamma`` (zero for the zero class)."""
        if self.is_zero:
            return ZERO
        return PuiseuxSeries.monomial(self.lead, self.gamma)

    def __str__(self):
        if self.is_zero:
            return "0@RV"
        return f"{render_coeff(self.lead)}·t^{render_rational(self.gamma)}@RV"

    def to_json(self) -> str:
        return str(self)


ZERO_RV = RvElement(INF, mpq(0))


def rv(lead, gamma=0) -> RvElement:
    """Build a nonzero class, or the zero class when ``lead == 0``."""
    if lead == 0:
        return ZERO_RV
    if not isinstance(lead, QuadraticNumber):
        lead = mpq(lead)
    return RvElement(mpq(gamma), lead)


def rvo(x) -> RvElement:
    x = series(x)
    if x.terms:
        e, c = x.terms[0]
        return RvElement(e, c)
    if x.trunc == INF:
        return ZERO_RV
    raise TruncationError(
        f"rv class undetermined: zero up to t^{render_rational(x.trunc)}"
    )


def vrv(xi: RvElement):
    return xi.gamma


def rv_mul(a: RvElement, b: RvElement) -> RvElement:
    if a.is_zero or b.is_zero:
        return ZERO_RV
    return RvElement(a.gamma + b.gamma, a.lead * b.lead)


def rv_compare(a: RvElement, b: RvElement) -> int:
    """Compare two classes in the order induced from the field."""
    sa, sb = a.sign(), b.sign()
    if sa != sb:
        return -1 if sa < sb else 1
    if sa == 0:
        return 0
    if a.gamma != b.gamma:
        # for positive classes a smaller valuation means a larger element
        bigger = a.gamma < b.gamma
        if sa < 0:
            bigger = not bigger
        return 1 if bigger else -1
    d = coeff_sign(a.lead - b.lead)
    return d


def rv_relation(a: RvElement, op: str, b: RvElement) -> bool:
    c = rv_compare(a, b)
    return _OPS[op](c)


_OPS = {
    "<": lambda c: c < 0,
    "<=": lambda c: c <= 0,
    "=": lambda c: c == 0,
    "!=": lambda c: c != 0,
    ">=": lambda c: c >= 0,
    ">": lambda c: c > 0,
}


def holds(c: int, op: str) -> bool:
    return _OPS[op](c)


@dataclass(frozen=True)
class RvNElement:
    gamma: object
    lead_vec: tuple

    @property
    def is_zero(self) -> bool:
        return self.gamma == INF

    def __str__(self):
        if self.is_zero:
            return "0@RV" + str(len(self.lead_vec))
        vec = ", ".join(render_coeff(c) for c in self.lead_vec)
        return f"({vec})·t^{render_rational(self.gamma)}@RV{len(self.lead_vec)}"

    def to_json(self) -> str:
        return str(self)


def rvo_n(xs) -> RvNElement:
    """Class of a tuple: minimal valuation and the vector of t^gamma coefficients."""
    xs = [series(x) for x in xs]
    known = [x.terms[0][0] for x in xs if x.terms]
    if not known:
        if all(x.trunc == INF for x in xs):
            return RvNElement(INF, tuple(mpq(0) for _ in xs))
        raise TruncationError("rv class of a tuple undetermined at this truncation")
    g = min(known)
    for x in xs:
        if not x.terms and x.trunc <= g:
            raise TruncationError("rv class of a tuple undetermined at this truncation")
    return RvNElement(g, tuple(x.coeff(g) for x in xs))


def val_tuple(xs):
    """Minimum valuation of the coordinates (raises when undecidable)."""
    xs = [series(x) for x in xs]
    known = [x.terms[0][0] for x in xs if x.terms]
    if not known:
        if all(x.trunc == INF for x in xs):
            return INF
        raise TruncationError("valuation of a tuple undetermined")
    g = min(known)
    for x in xs:
        if not x.terms and x.trunc <= g:
            raise TruncationError("valuation of a tuple undetermined")
    return g


def res(x) -> object:
    """Residue map O -> R (coefficient of t^0)."""
    x = series(x)
    if x.terms and x.terms[0][0] < 0:
        raise DomainError(f"res undefined: val({x}) < 0")
    return x.coeff(mpq(0))


@dataclass(frozen=True)
class Ball:
    """``{x : val(x - center) > radius}`` (open) or ``>=`` (closed)."""

    center: tuple
    radius: object
    closed: bool = False

    def __post_init__(self):
        c = self.center
        if isinstance(c, PuiseuxSeries):
            object.__setattr__(self, "center", (c,))
        else:
            object.__setattr__(self, "center", tuple(series(x) for x in c))

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, x) -> bool:
        if isinstance(x, PuiseuxSeries):
            x = (x,)
        d = val_tuple([a - c for a, c in zip(x, self.center)])
        return d >= self.radius if self.closed else d > self.radius

    __contains__ = contains

    def __str__(self):
        c = self.center[0] if len(self.center) == 1 else "(" + ", ".join(map(str, self.center)) + ")"
        op = ">=" if self.closed else ">"
        return f"B({c}, {op}{render_value(self.radius)})"

    def to_json(self) -> str:
        return str(self)


def rv_fiber(xi: RvElement) -> Ball:
    """The fiber ``rvo^{-1}(xi)`` as a ball; ``{0}`` for the zero class."""
    if xi.is_zero:
        return Ball((ZERO,), INF, closed=True)
    return Ball((PuiseuxSeries.monomial(xi.lead, xi.gamma),), xi.gamma, closed=False)


def parse_rv(text: str) -> RvElement:
    """Parse ``"c·t^g@RV"`` / ``"0@RV"``, or any constant series expression."""
    s = text.strip()
    if s.endswith("@RV"):
        body = s[:-3]
        if body.strip() == "0":
            return ZERO_RV
        if "·t^" in body:
            lead_s, gamma_s = body.rsplit("·t^", 1)
            from .formula import parse_constant

            lead = parse_constant(lead_s).constant_value()
            return rv(lead, mpq(gamma_s))
        s = body
    from .formula import parse_constant

    return rvo(parse_constant(s))


def render_rv(xi: RvElement) -> str:
    return str(xi)


__all__ = [
    "RvElement",
    "RvNElement",
    "ZERO_RV",
    "Ball",
    "rv",
    "rvo",
    "rvo_n",
    "vrv",
    "rv_mul",
    "rv_compare",
    "rv_relation",
    "rv_fiber",
    "res",
    "val_tuple",
    "parse_rv",
    "render_rv",
    "holds",
    "render_monomial",
]
