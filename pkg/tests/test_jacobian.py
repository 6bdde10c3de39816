from __future__ import annotations

import random

import sympy
from gmpy2 import mpq

from tconvex.formula import parse_formula, parse_poly
from tconvex.jacobian import _dist, _margin_comb, jp_check, jp_run, jp_witness, mean_value_check
from tconvex.series import INF

from conftest import S, to_sympy

UNIT = parse_formula("rv(x) = 1")
UNIT2 = parse_formula("rv(x) = 1 & rv(y) = 1")


def test_mean_value_perturbed_identity():
    rep = mean_value_check("x + t*x^2", samples=60, seed=1)
    assert rep.verdict == "holds"
    # g(x) - g(x') - (x - x') = t (x - x')(x + x'), and val(x + x') >= 0 on O
    assert rep.details["min_margin"] >= 1


def test_mean_value_margin_oracle():
    # recompute one margin with sympy: val(t(x-x')(x+x')) - val(x-x'), with t = s^2
    t = sympy.Symbol("t", positive=True)
    s = sympy.Symbol("s", positive=True)

    def lead(e):
        e = sympy.expand(e.subs(t, s ** 2))
        return sympy.Rational(min(m[0] for m in sympy.Poly(e, s).monoms()), 2)

    x, y = S("1 + t^(1/2)"), S("-1 + 3*t")
    X, Y = to_sympy(x), to_sympy(y)
    assert lead(t * (X - Y) * (X + Y)) - lead(X - Y) == sympy.Rational(3, 2)
    g = parse_poly("x + t*x^2")
    L = lambda p: g.evaluate((p,)) - p
    got = _margin_comb([(1, L(x)), (-1, L(y))], _dist(x, y))
    assert got == mpq(3, 2)


def test_mean_value_identity_map():
    rep = mean_value_check("x", samples=20)
    assert rep.verdict == "holds" and rep.details["min_margin"] == INF


def test_mean_value_precondition():
    rep = mean_value_check("x^2", samples=40)
    assert rep.verdict == "precondition-error"


def test_witness():
    assert jp_witness("x^2", UNIT) == (S("2"),)
    assert jp_witness("x*y", UNIT2) == (S("1"), S("1"))


def test_jp_check_square():
    ok = jp_check("x^2", UNIT, (S("2"),), pairs=500)
    assert ok.verdict == "holds" and ok.min_margin > 0
    # z = 1 leaves (x - x')(x + x' - 1) with val(x + x' - 1) = 0
    bad = jp_check("x^2", UNIT, (S("1"),), pairs=500)
    assert bad.verdict == "violated" and bad.violating_pair is not None


def test_jp_check_product():
    rep = jp_check("x*y", UNIT2, (S("1"), S("1")), pairs=500)
    assert rep.verdict == "holds"


def test_jp_check_linear_exact():
    f = parse_poly("3*x - t*y + 2", ("x", "y"))
    dom = parse_formula("val(x) >= 0 & val(y) >= 0")
    rep = jp_check(f, dom, (S("3"), S("-t")), pairs=300)
    assert rep.verdict == "holds" and rep.min_margin == INF


def test_jp_run_cubic():
    rep = jp_run("x^3 - t*x", domain="O", pieces=4, pairs=300)
    assert rep.verdict == "holds", rep.details
    assert rep.details["min_margin"] > 0


def test_jp_run_constant_skips():
    rep = jp_run(parse_poly("5 + t", ("x", "y")), pieces=2, pairs=50)
    assert rep.verdict == "skipped"


def test_scaling_covariance():
    # c*f has witness c*z and the same margins
    base = jp_check("x^2", UNIT, (S("2"),), pairs=300, seed=2)
    for c in ("3", "-t", "t^(1/2)/2"):
        z = jp_witness(f"({c})*x^2", UNIT)
        assert z == (S(c) * S("2"),)
        scaled = jp_check(f"({c})*x^2", UNIT, z, pairs=300, seed=2)
        assert scaled.min_margin == base.min_margin
