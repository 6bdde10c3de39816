from __future__ import annotations

import pytest
import sympy
from gmpy2 import mpq

from tconvex.formula import parse_poly
from tconvex.newton import newton_polygon_roots, real_root_data, real_roots, sturm_count
from tconvex.series import working_precision

from conftest import S

T_SMALL = sympy.Rational(1, 10 ** 8)


def _residual_val(p, r):
    return p.evaluate((r,)).val_lower_bound()


def _real_count_at(text: str, tval=T_SMALL) -> int:
    # oracle: exact real root count of p(x) with t replaced by a tiny rational
    x = sympy.Symbol("x")
    t = sympy.Symbol("t", positive=True)
    expr = sympy.sympify(text.replace("^", "**"), locals={"t": t, "x": x}).subs(t, tval)
    return sympy.Poly(expr, x).count_roots()


def test_sqrt_t():
    p = parse_poly("x^2 - t")
    roots = real_roots(p, order=6)
    assert [r.terms for r in roots] == [S("-t^(1/2)").terms, S("t^(1/2)").terms]
    for r in roots:
        assert _residual_val(p, r) >= 6


def test_split_roots():
    p = parse_poly("x^2 - (2+t)*x + (1+t)")
    roots = real_roots(p, order=6)
    assert [r.terms for r in roots] == [S("1").terms, S("1+t").terms]
    # exact factorization (x - 1)(x - 1 - t)
    assert parse_poly("(x-1)*(x-1-t)") == p


def test_no_real_roots():
    data = newton_polygon_roots(parse_poly("x^2 + 1"))
    assert [d.realness for d in data] == ["complex-pair"]
    assert real_roots(parse_poly("x^2 + 1")) == []


CASES = [
    "x^3 - 3*x + t",
    "x^4 - t*x^2 + t^3",
    "x^3 - t^2",
    "(x - t)*(x - 2*t)*(x + t^(1/2))",
    "t*x^2 - x + 1",
    "x^5 - t^3*x",
    "x^2 - 2*t*x + t^2 - t^3",
]


@pytest.mark.parametrize("text", CASES)
def test_real_count_matches_sympy(text):
    p = parse_poly(text)
    with working_precision(order=10):
        n = len(real_roots(p))
    if "^(1/2)" in text:
        return  # sympy count needs rational coefficients
    want = _real_count_at(text)
    assert n == want
    assert sturm_count(p) == want


def test_roots_approximate_numeric_roots():
    # evaluate the series roots at t = 1e-8 and match against numeric roots
    text = "x^3 - 3*x + t"
    with working_precision(order=6):
        roots = real_roots(parse_poly(text))
    x = sympy.Symbol("x")
    num = sorted(float(r) for r in sympy.Poly(x ** 3 - 3 * x + T_SMALL, x).real_roots())
    approx = []
    for r in roots:
        approx.append(sum(float(c) * 1e-8 ** float(e) for e, c in r.terms))
    assert len(approx) == len(num)
    for a, b in zip(sorted(approx), num):
        assert abs(a - b) < 1e-12


def test_multiplicity_sum_is_degree():
    p = parse_poly("(x - t)^2*(x^2 + t)")
    data = newton_polygon_roots(p, order=6)
    total = sum(d.multiplicity * (2 if d.realness == "complex-pair" else 1) for d in data)
    assert total == 4
    reals = real_root_data(p, order=6)
    assert [(r.root.terms, r.multiplicity) for r in reals] == [(S("t").terms, 2)]
