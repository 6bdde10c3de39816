"""Puiseux roots of univariate polynomials by iterated Newton polygons.

Roots are grown term by term.  At a prefix ``r`` (an exact finite series)
the shifted polynomial ``q(Y) = p(r + Y)`` is inspected; each edge of its
Newton polygon with slope ``-gamma`` (``gamma`` above the previous exponent)
carries the roots whose next term is ``c*t^gamma``, where ``c`` runs over the
nonzero roots of the edge's characteristic polynomial.  Real characteristic
roots are followed, non-real ones are reported as conjugate pairs.

The independent check used in tests is :func:`sturm_count`, an exact Sturm
sequence over the series field built with sign-preserving pseudo-remainders.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from gmpy2 import mpq

from .errors import UnresolvedRoots, UnsupportedExtension
from .formula import PolyExpr
from .quadratic import QuadraticNumber, coeff_sign, coeff_sqrt, qnum
from .series import INF, ONE, ZERO, PuiseuxSeries, check_den, precision, series


@dataclass(frozen=True)
class NewtonRoot:
    root: PuiseuxSeries
    realness: str            # "real", "complex-pair" or "unresolved"
    multiplicity: int = 1    # for complex pairs: number of pairs
    residual_bound: object = INF

    def __iter__(self):
        yield self.root
        yield self.realness

    def to_json(self) -> dict:
        from .series import render_value

        return {
            "root": str(self.root),
            "realness": self.realness,
            "multiplicity": self.multiplicity,
            "residual_bound": render_value(self.residual_bound),
        }


# ---------------------------------------------------------------------------
# characteristic polynomials over Q or Q(sqrt d)
# ---------------------------------------------------------------------------

def _coef_div(a, b):
    if isinstance(b, QuadraticNumber):
        return a * b.inverse()
    if isinstance(a, QuadraticNumber):
        return a / b
    return mpq(a) / b


def _solve_small(cs: list) -> tuple[list, int]:
    """Roots of a degree <= 2 polynomial (coefficients low to high).

    Returns ``(real_roots_with_multiplicity, complex_pairs)``.
    """
    if len(cs) == 2:
        return [(_coef_div(-cs[0], cs[1]), 1)], 0
    c, b, a = cs
    disc = b * b - 4 * a * c
    s = coeff_sign(disc)
    if s < 0:
        return [], 1
    if s == 0:
        return [(_coef_div(-b, 2 * a), 2)], 0
    root = coeff_sqrt(disc)  # may raise UnsupportedExtension
    r1 = _coef_div(-b + root, 2 * a)
    r2 = _coef_div(-b - root, 2 * a)
    return [(r1, 1), (r2, 1)], 0


def _to_sympy(c, sympy):
    if isinstance(c, QuadraticNumber):
        return sympy.Rational(int(c.a.numerator), int(c.a.denominator)) + sympy.Rational(
            int(c.b.numerator), int(c.b.denominator)) * sympy.sqrt(c.d)
    c = mpq(c)
    return sympy.Rational(int(c.numerator), int(c.denominator))


def _from_sympy(e, d, sympy):
    e = sympy.expand(e)
    a, b = mpq(0), mpq(0)
    for term in sympy.Add.make_args(e):
        k, rest = term.as_coeff_Mul()
        k = sympy.Rational(k)
        q = mpq(int(k.p), int(k.q))
        if rest == 1:
            a += q
        elif d is not None and rest == sympy.sqrt(d):
            b += q
        else:
            raise UnsupportedExtension(f"coefficient {e} outside Q(sqrt d)")
    return qnum(a, b, d or 1)


def solve_characteristic(cs: Sequence) -> tuple[list, int]:
    """Nonzero real roots (with multiplicity) and number of complex pairs."""
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) <= 1:
        return [], 0
    if len(cs) <= 3:
        return _solve_small(cs)
    import sympy

    ds = {c.d for c in cs if isinstance(c, QuadraticNumber)}
    if len(ds) > 1:
        raise UnsupportedExtension("characteristic polynomial mixes radicands")
    d = ds.pop() if ds else None
    x = sympy.Symbol("c")
    expr = sum(_to_sympy(c, sympy) * x ** k for k, c in enumerate(cs))
    if d is None:
        poly = sympy.Poly(expr, x, domain="QQ")
    else:
        poly = sympy.Poly(expr, x, extension=sympy.sqrt(d))
    _, factors = poly.factor_list()
    reals: list = []
    pairs = 0
    for f, mu in factors:
        coeffs = [_from_sympy(k, d, sympy) for k in reversed(f.all_coeffs())]
        deg = len(coeffs) - 1
        if deg <= 2:
            rr, pp = _solve_small(coeffs)
            reals.extend((r, m * mu) for r, m in rr)
            pairs += pp * mu
            continue
        if d is not None:
            raise UnsupportedExtension("irreducible factor of degree > 2 over Q(sqrt d)")
        if sympy.Poly(f, x, domain="QQ").count_roots() > 0:
            raise UnsupportedExtension(
                f"real root of an irreducible degree-{deg} residue polynomial"
            )
        pairs += (deg // 2) * mu
    return reals, pairs


# ---------------------------------------------------------------------------
# Newton polygon iteration
# ---------------------------------------------------------------------------

def taylor_shift(a: Sequence[PuiseuxSeries], r: PuiseuxSeries) -> list[PuiseuxSeries]:
    """Coefficients of ``Y -> p(r + Y)``."""
    d = len(a) - 1
    if r.is_zero():
        return list(a)
    pw = [ONE]
    for _ in range(d):
        pw.append(pw[-1] * r)
    out = []
    for j in range(d + 1):
        acc = ZERO
        for i in range(j, d + 1):
            if a[i].is_zero():
                continue
            acc = acc + a[i] * pw[i - j] * comb(i, j)
        out.append(acc)
    return out


def _lower_hull(pts: list[tuple[int, object]]) -> list[tuple[int, int]]:
    """Indices into ``pts`` (sorted by j) forming the lower convex hull."""
    hull: list[int] = []
    for k in range(len(pts)):
        while len(hull) >= 2:
            (j1, v1), (j2, v2), (j3, v3) = pts[hull[-2]], pts[hull[-1]], pts[k]
            # drop middle point when it lies on or above segment 1-3
            if (v2 - v1) * (j3 - j1) >= (v3 - v1) * (j2 - j1):
                hull.pop()
            else:
                break
        hull.append(k)
    return hull


def _coeff_list(p) -> list[PuiseuxSeries]:
    if isinstance(p, PolyExpr):
        cs = p.univariate_coeffs()
    else:
        cs = [series(c) for c in p]
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def newton_polygon_roots(p, order=None) -> list[NewtonRoot]:
    """All Puiseux roots of ``p`` up to ``order`` (default: working order)."""
    a = _coeff_list(p)
    if len(a) < 2:
        raise ValueError("newton_polygon_roots needs a polynomial of degree >= 1")
    if not a[-1].is_known_nonzero():
        raise UnresolvedRoots("leading coefficient undetermined at this truncation")
    order = precision().order if order is None else mpq(order)
    out: list[NewtonRoot] = []
    _branch(a, ZERO, -INF, len(a) - 1, order, out)
    return out


def _branch(q, r, last, m, order, out):
    # q holds the coefficients of Y -> p(r + Y); children shift it by one monomial
    known: list = []
    uncertain: list = []
    for j, qj in enumerate(q[: m + 1]):
        if qj.terms:
            known.append((j, qj.terms[0][0]))
        elif qj.trunc != INF:
            uncertain.append((j, qj.trunc))
    k0 = 0
    while k0 <= m and q[k0].is_zero():
        k0 += 1
    if k0 > m:
        raise UnresolvedRoots("degenerate cluster")
    if k0 > 0:
        out.append(NewtonRoot(r, "real" if k0 == 1 else "real", k0, INF))
    if k0 == m:
        return
    if uncertain and uncertain[0][0] == k0:
        # q(k0) only known to vanish below its truncation: treat it as a tail
        j0, t0 = uncertain[0]
        pts = [(j0, t0)] + [(j, v) for j, v in known if j > j0]
    else:
        pts = [(j, v) for j, v in known if j >= k0]
    hull = _lower_hull(pts)
    edges = []
    for h1, h2 in zip(hull, hull[1:]):
        (j1, v1), (j2, v2) = pts[h1], pts[h2]
        gamma = (v1 - v2) / (j2 - j1)
        if gamma <= last:
            break
        edges.append((j1, v1, j2, v2, gamma))
    total = sum(e[2] - e[0] for e in edges)
    if total != m - k0:
        raise UnresolvedRoots("Newton polygon does not account for the cluster")
    for j, t in uncertain:
        # an unknown coefficient must not be able to lower the hull
        for j1, v1, j2, v2, g in edges:
            if j1 <= j <= j2 and t < v1 - g * (j - j1) and not (j == pts[0][0] and t == pts[0][1]):
                raise UnresolvedRoots("coefficient undetermined at this truncation")
    tail = [e for e in edges if e[4] >= order]
    for j1, v1, j2, v2, gamma in edges:
        if gamma >= order:
            continue
        if pts[0][0] == j1 and uncertain and uncertain[0][0] == j1 and not q[j1].terms:
            raise UnresolvedRoots("constant term undetermined at this truncation")
        check_den(gamma)
        phi = []
        for j in range(j1, j2 + 1):
            qj = q[j]
            if qj.terms and qj.terms[0][0] == v1 - gamma * (j - j1):
                phi.append(qj.terms[0][1])
            else:
                phi.append(mpq(0))
        reals, pairs = solve_characteristic(phi)
        for c, mu in reals:
            step = PuiseuxSeries.monomial(c, gamma)
            _branch(taylor_shift(q, step), r + step, gamma, mu, order, out)
        if pairs:
            out.append(NewtonRoot(PuiseuxSeries(r.terms, gamma), "complex-pair", pairs, INF))
    if tail:
        jt = tail[-1][2]
        vt = tail[-1][3]
        length = sum(e[2] - e[0] for e in tail)
        bound = vt + jt * order
        real = "real" if length == 1 else "unresolved"
        out.append(NewtonRoot(PuiseuxSeries(r.terms, order), real, length, bound))


@lru_cache(maxsize=4096)
def _real_roots_cached(coeffs: tuple, order, max_den) -> tuple:
    roots = newton_polygon_roots(list(coeffs), order)
    res = []
    for nr in roots:
        if nr.realness == "unresolved":
            raise UnresolvedRoots(
                f"{nr.multiplicity} roots near {nr.root} not separated at order {order}"
            )
        if nr.realness == "real":
            res.append(nr)
    return tuple(res)


def real_root_data(p, order=None) -> list[NewtonRoot]:
    """Real roots (distinct, sorted increasingly) with multiplicities."""
    cs = tuple(_coeff_list(p))
    if len(cs) < 2:
        return []
    prec = precision()
    order = prec.order if order is None else mpq(order)
    roots = list(_real_roots_cached(cs, order, prec.max_den))
    from functools import cmp_to_key

    roots.sort(key=cmp_to_key(lambda x, y: x.root.compare(y.root)))
    return roots


def real_roots(p, order=None) -> list[PuiseuxSeries]:
    return [nr.root for nr in real_root_data(p, order)]


# ---------------------------------------------------------------------------
# Sturm sequences over the series field (exact coefficients only)
# ---------------------------------------------------------------------------

def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def _normalize(p: list) -> list:
    # divide by a positive monomial t^v: keeps every sign
    v = min(c.val() for c in p if not c.is_zero())
    return [c.shift(-v) for c in p]


def _prem_even(a: list, b: list) -> list:
    """Pseudo-remainder of ``a`` by ``b`` scaled by an even power of lc(b)."""
    r = list(a)
    lc = b[-1]
    n = len(b) - 1
    k = 0
    r = _trim(r)
    while len(r) - 1 >= n and r:
        lead = r[-1]
        shift = len(r) - 1 - n
        new = [c * lc for c in r]
        for i, bc in enumerate(b):
            new[i + shift] = new[i + shift] - lead * bc
        r = _trim(new[:-1] + [new[-1]])
        k += 1
    if k % 2 == 1:
        r = _trim([c * lc for c in r])
    return r


def sturm_count(p) -> int:
    """Number of distinct real roots, from an exact Sturm sequence."""
    a = _trim(_coeff_list(p))
    if any(not c.is_exact for c in a):
        raise UnresolvedRoots("Sturm sequences need exact coefficients")
    if len(a) < 2:
        return 0
    da = [c * k for k, c in enumerate(a)][1:]
    seq = [_normalize(a), _normalize(_trim(da))]
    while True:
        r = _prem_even(seq[-2], seq[-1])
        if not r:
            break
        seq.append(_normalize([-c for c in r]))
    def changes(signs):
        s = [x for x in signs if x != 0]
        return sum(1 for u, v in zip(s, s[1:]) if u != v)
    at_pos = [c[-1].sign() for c in seq]
    at_neg = [c[-1].sign() * (-1) ** (len(c) - 1) for c in seq]
    return changes(at_neg) - changes(at_pos)


__all__ = [
    "NewtonRoot",
    "newton_polygon_roots",
    "real_roots",
    "real_root_data",
    "sturm_count",
    "taylor_shift",
    "solve_characteristic",
]
