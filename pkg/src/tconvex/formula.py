"""Polynomials over the series field, atoms, definable pieces and partitions.

Grammar (whitespace-insensitive)::

    formula := atom (('&' | 'and') atom)*
    atom    := 'true' | 'rv' '(' expr ')' relop expr | 'val' '(' expr ')' relop expr
             | expr relop expr
    relop   := '<' | '<=' | '=' | '>=' | '>' | '!='
    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := primary ['^' exponent]
    primary := NUMBER | 't' | VAR | '(' expr ')' | 'sqrt' '(' expr ')' | 'O' '(' expr ')'

``t`` is the infinitesimal; ``t^(p/q)`` takes any rational exponent, other
bases integer exponents.  ``O(t^k)`` marks a truncation.  Every other
identifier is a variable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import ParseError, TruncationError, UndecidableError
from .quadratic import QuadraticNumber, sqrt_rational
from .rv import RvElement, ZERO_RV, holds, rv_compare, rvo
from .series import INF, MPQ, ONE, ZERO, PuiseuxSeries, check_den, render, series


def natural_key(name: str):
    m = re.match(r"([A-Za-z_]*)(\d*)$", name)
    if m is None:
        return (name, -1)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

class PolyExpr:
    """Polynomial in named variables with Puiseux-series coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: dict | None = None):
        self.vars = tuple(vars)
        self.terms = {} if terms is None else terms

    # -- constructors ------------------------------------------------------
    @classmethod
    def const(cls, c, vars: Sequence[str] = ()) -> "PolyExpr":
        c = series(c)
        vars = tuple(vars)
        if c.is_zero():
            return cls(vars, {})
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, name: str, vars: Sequence[str]) -> "PolyExpr":
        vars = tuple(vars)
        i = vars.index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(vars)))
        return cls(vars, {mono: ONE})

    @classmethod
    def from_univariate(cls, coeffs: Sequence, name: str = "x") -> "PolyExpr":
        terms = {}
        for k, c in enumerate(coeffs):
            c = series(c)
            if not c.is_zero():
                terms[(k,)] = c
        return cls((name,), terms)

    # -- variable handling -------------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> "PolyExpr":
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = []
        for v in self.vars:
            if v not in vars:
                if any(m[self.vars.index(v)] for m in self.terms):
                    raise ValueError(f"variable {v} not in {vars}")
                idx.append(None)
            else:
                idx.append(vars.index(v))
        terms = {}
        for m, c in self.terms.items():
            nm = [0] * len(vars)
            for k, j in zip(m, idx):
                if j is not None:
                    nm[j] = k
            terms[tuple(nm)] = c
        return PolyExpr(vars, terms)

    def _unify(self, other) -> tuple["PolyExpr", "PolyExpr"]:
        if not isinstance(other, PolyExpr):
            other = PolyExpr.const(other, self.vars)
        if other.vars == self.vars:
            return self, other
        vars = tuple(sorted(set(self.vars) | set(other.vars), key=natural_key))
        return self.with_vars(vars), other.with_vars(vars)

    def used_vars(self) -> tuple[int, ...]:
        used = set()
        for m in self.terms:
            for i, k in enumerate(m):
                if k:
                    used.add(i)
        return tuple(sorted(used))

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (PolyExpr, PuiseuxSeries, int, MPQ)):
            return NotImplemented
        a, b = self._unify(other)
        terms = dict(a.terms)
        for m, c in b.terms.items():
            if m in terms:
                s = terms[m] + c
                if s.is_zero():
                    del terms[m]
                else:
                    terms[m] = s
            else:
                terms[m] = c
        return PolyExpr(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return PolyExpr(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (PolyExpr, PuiseuxSeries, int, MPQ)):
            return NotImplemented
        a, b = self._unify(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (PolyExpr, PuiseuxSeries, int, MPQ)):
            return NotImplemented
        a, b = self._unify(other)
        terms: dict = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                p = c1 * c2
                terms[m] = terms[m] + p if m in terms else p
        return PolyExpr(a.vars, {m: c for m, c in terms.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = PolyExpr.const(ONE, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "PolyExpr":
        c = series(c)
        out = {}
        for m, k in self.terms.items():
            p = k * c
            if not p.is_zero():
                out[m] = p
        return PolyExpr(self.vars, out)

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant(self) -> PuiseuxSeries:
        return self.terms.get((0,) * len(self.vars), ZERO)

    def partial(self, i: int) -> "PolyExpr":
        out = {}
        for m, c in self.terms.items():
            k = m[i]
            if k:
                nm = m[:i] + (k - 1,) + m[i + 1:]
                out[nm] = c * k
        return PolyExpr(self.vars, out)

    def derivative(self, alpha: Sequence[int]) -> "PolyExpr":
        p = self
        for i, k in enumerate(alpha):
            for _ in range(k):
                p = p.partial(i)
        return p

    def gradient(self) -> tuple["PolyExpr", ...]:
        return tuple(self.partial(i) for i in range(len(self.vars)))

    def coeffs_in(self, i: int) -> list["PolyExpr"]:
        """Coefficients as a polynomial in ``x_i`` (remaining variables kept)."""
        d = self.degree_in(i)
        out = [dict() for _ in range(max(d + 1, 0))]
        for m, c in self.terms.items():
            nm = m[:i] + (0,) + m[i + 1:]
            out[m[i]][nm] = c
        return [PolyExpr(self.vars, t) for t in out]

    def univariate_coeffs(self, i: int | None = None) -> list[PuiseuxSeries]:
        """Series coefficients when the polynomial only involves one variable."""
        used = self.used_vars()
        if i is None:
            if len(used) > 1:
                raise ValueError(f"{self} is not univariate")
            i = used[0] if used else 0
        elif any(j != i for j in used):
            raise ValueError(f"{self} involves variables other than {self.vars[i]}")
        if not self.vars:
            return [self.constant()] if self.terms else []
        d = self.degree_in(i)
        out = [ZERO] * (d + 1)
        for m, c in self.terms.items():
            out[m[i]] = c
        return out

    def substitute(self, values: dict[int, PuiseuxSeries]) -> "PolyExpr":
        """Substitute series for some variables (variables stay in ``vars``)."""
        pw: dict = {}
        out: dict = {}
        for m, c in self.terms.items():
            coef = c
            nm = list(m)
            for i, v in values.items():
                k = m[i]
                if k:
                    key = (i, k)
                    if key not in pw:
                        pw[key] = series(v) ** k
                    coef = coef * pw[key]
                    nm[i] = 0
            nm = tuple(nm)
            out[nm] = out[nm] + coef if nm in out else coef
        return PolyExpr(self.vars, {m: c for m, c in out.items() if not c.is_zero()})

    def evaluate(self, point: Sequence) -> PuiseuxSeries:
        if len(point) != len(self.vars):
            raise ValueError(f"expected {len(self.vars)} coordinates, got {len(point)}")
        powers: list[list[PuiseuxSeries]] = []
        for i, x in enumerate(point):
            d = self.degree_in(i)
            x = series(x)
            pw = [ONE]
            for _ in range(max(d, 0)):
                pw.append(pw[-1] * x)
            powers.append(pw)
        acc = ZERO
        for m, c in self.terms.items():
            term = c
            for i, k in enumerate(m):
                if k:
                    term = term * powers[i][k]
            acc = acc + term
        return acc

    __call__ = evaluate

    def shift(self, point: Sequence) -> "PolyExpr":
        """The polynomial ``y -> p(point + y)``."""
        out = PolyExpr.const(ZERO, self.vars)
        lin = [PolyExpr.var(v, self.vars) + series(point[i]) for i, v in enumerate(self.vars)]
        cache: dict = {}
        for m, c in self.terms.items():
            term = PolyExpr.const(c, self.vars)
            for i, k in enumerate(m):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = lin[i] ** k
                    term = term * cache[(i, k)]
            out = out + term
        return out

    def homogeneous_part(self, k: int) -> "PolyExpr":
        return PolyExpr(self.vars, {m: c for m, c in self.terms.items() if sum(m) == k})

    def lowest_form(self) -> tuple[int, "PolyExpr"]:
        if not self.terms:
            return -1, self
        k = min(sum(m) for m in self.terms)
        return k, self.homogeneous_part(k)

    def is_rational(self) -> bool:
        """All coefficients are exact rational constants (no ``t``)."""
        return all(c.is_constant() and c.is_rational_coeffs() for c in self.terms.values())

    # -- comparison / rendering -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, PolyExpr):
            a, b = self._unify(other)
            return a.terms == b.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"PolyExpr({render_poly(self)!r})"


def _mono_str(vars, m) -> str:
    parts = []
    for v, k in zip(vars, m):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def render_poly(p: PolyExpr) -> str:
    if not p.terms:
        return "0"
    order = sorted(p.terms, key=lambda m: (-sum(m), tuple(-k for k in m)))
    pieces = []
    for m in order:
        c = p.terms[m]
        ms = _mono_str(p.vars, m)
        cs = render(c)
        if not ms:
            pieces.append(cs)
            continue
        simple = len(c.terms) == 1 and c.trunc == INF
        if simple and cs == "1":
            pieces.append(ms)
        elif simple and cs == "-1":
            pieces.append("-" + ms)
        elif simple and not isinstance(c.terms[0][1], QuadraticNumber):
            pieces.append(f"{cs}*{ms}")
        else:
            pieces.append(f"({cs})*{ms}")
    out = pieces[0]
    for s in pieces[1:]:
        out += (" - " + s[1:]) if s.startswith("-") else (" + " + s)
    return out


# ---------------------------------------------------------------------------
# Atoms, pieces, partitions
# ---------------------------------------------------------------------------

SIGN_OPS = ("<", "<=", "=", "!=", ">=", ">")
_FLIP = {"<": ">", "<=": ">=", "=": "=", "!=": "!=", ">=": "<=", ">": "<"}


def flip_op(op: str) -> str:
    return _FLIP[op]


@dataclass(frozen=True)
class Atom:
    kind: str          # "sign", "rv" or "val"
    poly: PolyExpr
    op: str
    rhs: object = None  # RvElement for rv atoms, a rational for val atoms

    def with_vars(self, vars) -> "Atom":
        return Atom(self.kind, self.poly.with_vars(vars), self.op, self.rhs)

    def holds_at(self, point, approx: bool = False) -> bool:
        v = self.poly.evaluate(point)
        if self.kind == "sign":
            if approx and v.is_truncated_zero():
                s = 0
            else:
                s = v.sign()
            return holds(s, self.op)
        if self.kind == "val":
            return _val_holds(v, self.op, self.rhs, approx)
        if approx and v.is_truncated_zero():
            xi = ZERO_RV
        else:
            xi = rvo(v)
        return holds(rv_compare(xi, self.rhs), self.op)

    def negation(self) -> list["Atom"]:
        neg = {"<": ">=", "<=": ">", "=": "!=", "!=": "=", ">=": "<", ">": "<="}[self.op]
        return [Atom(self.kind, self.poly, neg, self.rhs)]

    def __str__(self):
        if self.kind == "sign":
            return f"{render_poly(self.poly)} {self.op} 0"
        if self.kind == "val":
            g = self.rhs
            gs = str(g.numerator) if g.denominator == 1 else f"{g.numerator}/{g.denominator}"
            return f"val({render_poly(self.poly)}) {self.op} {gs}"
        return f"rv({render_poly(self.poly)}) {self.op} {render(self.rhs.representative())}"


def _val_holds(v: PuiseuxSeries, op: str, g, approx: bool) -> bool:
    if v.terms:
        e = v.terms[0][0]
        return holds((e > g) - (e < g), op)
    if v.trunc == INF or approx:
        return op in (">", ">=", "!=")
    # only a lower bound v.trunc is known
    if v.trunc > g:
        return op in (">", ">=", "!=")
    if v.trunc == g and op == ">=":
        return True
    raise UndecidableError(f"val condition undecidable: zero up to t^{v.trunc}")


@dataclass(frozen=True)
class DefinablePiece:
    atoms: tuple
    vars: tuple

    @property
    def dim(self) -> int:
        return len(self.vars)

    def contains(self, point, approx: bool = False) -> bool:
        return all(a.holds_at(point, approx) for a in self.atoms)

    __contains__ = contains

    def conj(self, other: "DefinablePiece | Iterable[Atom]") -> "DefinablePiece":
        atoms = other.atoms if isinstance(other, DefinablePiece) else tuple(other)
        vars = self.vars
        if isinstance(other, DefinablePiece) and other.vars != vars:
            vars = tuple(sorted(set(vars) | set(other.vars), key=natural_key))
        merged = tuple(a.with_vars(vars) for a in self.atoms + tuple(atoms))
        return DefinablePiece(merged, vars)

    def equations(self) -> list[Atom]:
        return [a for a in self.atoms if a.kind == "sign" and a.op == "="]

    def __str__(self):
        if not self.atoms:
            return "true"
        return " & ".join(str(a) for a in self.atoms)

    def to_json(self) -> str:
        return str(self)


def piece(text: str, vars: Sequence[str] | None = None) -> DefinablePiece:
    return parse_formula(text, vars)


@dataclass
class Partition:
    pieces: list
    domain: DefinablePiece | None = None

    def locate(self, point, approx: bool = False) -> list[int]:
        return [i for i, p in enumerate(self.pieces) if p.contains(point, approx)]

    def to_json(self):
        return [str(p) for p in self.pieces]


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|"
    r"(?P<op><=|>=|!=|==|≤|≥|≠|∧|[-+*/^()<>=&,·]))"
)
_RESERVED = {"t", "sqrt", "rv", "val", "O", "true", "and"}
_REL = {"<": "<", "<=": "<=", "=": "=", "==": "=", ">=": ">=", ">": ">", "!=": "!=",
        "≤": "<=", "≥": ">=", "≠": "!="}


def _tokenize(text: str):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            j = pos
            while j < n and text[j].isspace():
                j += 1
            raise ParseError(f"unexpected character {text[j]!r}", j, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, vars: Sequence[str] | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        if vars is None:
            found = {v for k, v, _ in self.toks if k == "id" and v not in _RESERVED}
            vars = sorted(found, key=natural_key)
        else:
            for k, v, p in self.toks:
                if k == "id" and v not in _RESERVED and v not in vars:
                    raise ParseError(f"unknown variable {v!r}", p, text)
        self.vars = tuple(vars)

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        k, v, p = self.next()
        if v != value:
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", p, self.text)

    def error(self, msg: str):
        raise ParseError(msg, self.peek()[2], self.text)

    # grammar
    def formula(self) -> DefinablePiece:
        atoms = [self.atom()]
        while self.peek()[1] in ("&", "∧", "and"):
            self.next()
            atoms.append(self.atom())
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        atoms = [a for a in atoms if a is not None]
        return DefinablePiece(tuple(atoms), self.vars)

    def relop(self) -> str:
        k, v, p = self.next()
        if v not in _REL:
            raise ParseError(f"expected a comparison, found {v or 'end of input'!r}", p, self.text)
        return _REL[v]

    def atom(self):
        k, v, p = self.peek()
        if v == "true":
            self.next()
            return None
        if v == "rv":
            self.next()
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            op = self.relop()
            rp = self.peek()[2]
            rhs = self.expr()
            if not rhs.is_constant():
                raise ParseError("right side of an rv atom must be constant", rp, self.text)
            c = rhs.constant()
            try:
                xi = rvo(c)
            except TruncationError as exc:
                raise ParseError(str(exc), rp, self.text) from None
            return Atom("rv", inner, op, xi)
        if v == "val":
            self.next()
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            op = self.relop()
            rp = self.peek()[2]
            rhs = self.expr()
            c = rhs.constant()
            if not rhs.is_constant() or not c.is_constant() or not c.is_rational_coeffs():
                raise ParseError("right side of a val atom must be a rational", rp, self.text)
            return Atom("val", inner, op, c.constant_value())
        lhs = self.expr()
        op = self.relop()
        rhs = self.expr()
        return Atom("sign", lhs - rhs, op)

    def expr(self) -> PolyExpr:
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.next()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> PolyExpr:
        acc = self.unary()
        while self.peek()[1] in ("*", "/", "·"):
            op = self.next()[1]
            p = self.peek()[2]
            rhs = self.unary()
            if op == "/":
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by a nonzero constant", p, self.text)
                acc = acc.scale(rhs.constant().inv())
            else:
                acc = acc * rhs
        return acc

    def unary(self) -> PolyExpr:
        if self.peek()[1] == "-":
            self.next()
            return -self.unary()
        if self.peek()[1] == "+":
            self.next()
            return self.unary()
        return self.factor()

    def factor(self) -> PolyExpr:
        start = self.peek()
        base, is_t = self.primary()
        if self.peek()[1] == "^":
            self.next()
            p = self.peek()[2]
            e = self.exponent()
            if is_t:
                check_den(e)
                return PolyExpr.const(PuiseuxSeries.monomial(1, e), self.vars)
            if e.denominator != 1:
                raise ParseError("fractional exponent allowed only on t", p, self.text)
            n = int(e)
            if n < 0:
                if not base.is_constant() or base.is_zero():
                    raise ParseError("negative exponent on a non-constant", p, self.text)
                return PolyExpr.const(base.constant().inv() ** (-n), self.vars)
            return base ** n
        return base

    def exponent(self) -> mpq:
        neg = False
        if self.peek()[1] == "-":
            self.next()
            neg = True
        k, v, p = self.next()
        if k == "num":
            e = mpq(v)
        elif v == "(":
            inner = self.expr()
            self.expect(")")
            c = inner.constant()
            if not inner.is_constant() or not c.is_constant() or not c.is_rational_coeffs():
                raise ParseError("exponent must be a rational number", p, self.text)
            e = c.constant_value()
        else:
            raise ParseError("bad exponent", p, self.text)
        return -e if neg else e

    def primary(self) -> tuple[PolyExpr, bool]:
        k, v, p = self.next()
        if k == "num":
            return PolyExpr.const(PuiseuxSeries.const(mpq(v)), self.vars), False
        if v == "(":
            e = self.expr()
            self.expect(")")
            return e, False
        if k == "id":
            if v == "t":
                return PolyExpr.const(PuiseuxSeries.monomial(1, 1), self.vars), True
            if v == "sqrt":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                c = inner.constant()
                if not inner.is_constant() or not c.is_constant() or not c.is_rational_coeffs():
                    raise ParseError("sqrt takes a rational constant", p, self.text)
                try:
                    r = sqrt_rational(c.constant_value())
                except ValueError as exc:
                    raise ParseError(str(exc), p, self.text) from None
                return PolyExpr.const(PuiseuxSeries.const(r), self.vars), False
            if v == "O":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                c = inner.constant()
                if not inner.is_constant() or len(c.terms) != 1:
                    raise ParseError("O(...) takes a monomial in t", p, self.text)
                return PolyExpr.const(PuiseuxSeries((), c.terms[0][0]), self.vars), False
            if v in _RESERVED:
                raise ParseError(f"unexpected keyword {v!r}", p, self.text)
            return PolyExpr.var(v, self.vars), False
        raise ParseError(f"unexpected {v or 'end of input'!r}", p, self.text)


def parse_poly(text: str, vars: Sequence[str] | None = None) -> PolyExpr:
    ps = _Parser(text, vars)
    e = ps.expr()
    if ps.peek()[0] != "end":
        ps.error(f"unexpected {ps.peek()[1]!r}")
    return e


def parse_formula(text: str, vars: Sequence[str] | None = None) -> DefinablePiece:
    return _Parser(text, vars).formula()


def parse_constant(text: str) -> PuiseuxSeries:
    ps = _Parser(text, ())
    e = ps.expr()
    if ps.peek()[0] != "end":
        ps.error(f"unexpected {ps.peek()[1]!r}")
    return e.constant() if e.terms else ZERO


def parse_map(texts: Sequence[str] | str, vars: Sequence[str] | None = None) -> tuple[PolyExpr, ...]:
    """Parse a polynomial map given as a list of components (or ';'-joined)."""
    if isinstance(texts, str):
        texts = [s for s in texts.split(";") if s.strip()]
    if vars is None:
        found: set = set()
        for s in texts:
            found |= {v for k, v, _ in _tokenize(s) if k == "id" and v not in _RESERVED}
        vars = sorted(found, key=natural_key)
    return tuple(parse_poly(s, vars) for s in texts)


def domain_piece(text: str | DefinablePiece | None, vars: Sequence[str]) -> DefinablePiece:
    """Domain shorthand: ``O`` (valuation ring), ``M`` (maximal ideal), ``R``
    or ``true`` (everything), otherwise a formula."""
    if isinstance(text, DefinablePiece):
        return text
    key = (text or "R").strip()
    if key in ("R", "true", ""):
        return DefinablePiece((), tuple(vars))
    if key in ("O", "M"):
        op = ">=" if key == "O" else ">"
        atoms = tuple(Atom("val", PolyExpr.var(v, vars), op, mpq(0)) for v in vars)
        return DefinablePiece(atoms, tuple(vars))
    return parse_formula(key, vars)


def evaluate(formula, point, approx: bool = False):
    """Evaluate a piece (bool) or polynomial (series) at a point."""
    if isinstance(formula, DefinablePiece):
        return formula.contains(point, approx)
    if isinstance(formula, PolyExpr):
        return formula.evaluate(point)
    raise TypeError(formula)


def gradient(p: PolyExpr) -> tuple[PolyExpr, ...]:
    return p.gradient()


def membership(piece: DefinablePiece, point, approx: bool = False) -> bool:
    return piece.contains(point, approx)


def safe_contains(piece: DefinablePiece, point) -> bool | None:
    """Membership, or ``None`` when undecidable at the working truncation."""
    try:
        return piece.contains(point)
    except (UndecidableError, TruncationError):
        return None


__all__ = [
    "domain_piece",
    "PolyExpr",
    "Atom",
    "DefinablePiece",
    "Partition",
    "parse_poly",
    "parse_formula",
    "parse_constant",
    "parse_map",
    "piece",
    "evaluate",
    "gradient",
    "membership",
    "safe_contains",
    "render_poly",
    "flip_op",
    "natural_key",
]
