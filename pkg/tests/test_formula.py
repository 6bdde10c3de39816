from __future__ import annotations

import random

import pytest
import sympy
from gmpy2 import mpq

from tconvex.errors import ParseError, SamplingExhausted
from tconvex.formula import (PolyExpr, domain_piece, evaluate, gradient, membership, parse_formula,
                             parse_poly, render_poly)
from tconvex.rv import rv, rvo
from tconvex.sampling import sample_piece
from tconvex.series import PuiseuxSeries

from conftest import S, to_sympy


def test_atom_kinds():
    p = parse_formula("x^2 - t < 0")
    assert [a.kind for a in p.atoms] == ["sign"]
    p = parse_formula("rv(x) = 1*t^1")
    assert p.atoms[0].kind == "rv" and p.atoms[0].rhs == rv(1, 1)
    p = parse_formula("x*y - 1 = 0 & x > 0")
    assert len(p.atoms) == 2 and p.vars == ("x", "y")


def test_parse_error_position():
    with pytest.raises(ParseError) as ei:
        parse_formula("x^2 + * y > 0")
    assert ei.value.position == 6


def test_render_reparses():
    for text in ("x^2 - t*y + 3", "(1+t)*x*y - t^(1/2)", "x^3 - 3*x"):
        p = parse_poly(text, ("x", "y"))
        assert parse_poly(render_poly(p), ("x", "y")) == p


def test_eval_examples():
    assert evaluate(parse_poly("x^2 - t"), (S("t^(1/2)"),)).is_zero()
    assert evaluate(parse_poly("x + y"), (S("1"), S("t"))) == S("1+t")
    assert evaluate(parse_poly("x*y"), (S("1+t"), S("1-t"))) == S("1 - t^2")


def test_eval_against_sympy():
    # oracle: the same polynomial expanded by sympy with t a positive symbol
    t = sympy.Symbol("t", positive=True)
    X, Y = sympy.symbols("X Y")
    text = "x^3*y - t*x*y^2 + (2 - t^(1/2))*y + 5"
    ref = X ** 3 * Y - t * X * Y ** 2 + (2 - sympy.sqrt(t)) * Y + 5
    p = parse_poly(text, ("x", "y"))
    rng = random.Random(3)
    pool = ["1+t", "t^(1/3) - 2", "3*t^-1", "t^(1/2)", "-1/2 + t^2"]
    for _ in range(20):
        a, b = S(rng.choice(pool)), S(rng.choice(pool))
        want = sympy.expand(ref.subs({X: to_sympy(a), Y: to_sympy(b)}))
        assert sympy.simplify(to_sympy(p.evaluate((a, b))) - want) == 0


def test_gradient():
    x2 = parse_poly("x^2")
    assert gradient(x2) == (parse_poly("2*x"),)
    assert gradient(parse_poly("x*y")) == (parse_poly("y", ("x", "y")), parse_poly("x", ("x", "y")))
    c = parse_poly("5 + t", ("x", "y"))
    assert all(g.is_zero() for g in gradient(c))


def test_gradient_against_sympy():
    X, Y = sympy.symbols("x y")
    t = sympy.Symbol("t", positive=True)
    text = "x^3*y^2 - 4*t*x*y + y^4 - x"
    ref = X ** 3 * Y ** 2 - 4 * t * X * Y + Y ** 4 - X
    p = parse_poly(text, ("x", "y"))
    pt = (S("2 - t"), S("t^(1/2) + 1"))
    sub = {X: to_sympy(pt[0]), Y: to_sympy(pt[1])}
    for g, v in zip(gradient(p), (X, Y)):
        want = sympy.expand(sympy.diff(ref, v).subs(sub))
        assert sympy.simplify(to_sympy(g.evaluate(pt)) - want) == 0


def test_membership():
    disc = parse_formula("x^2 + y^2 - 1 <= 0")
    assert membership(disc, (S("1-t"), S("t")))
    # x^2+y^2-1 at (1-t, t) is -2t + 2t^2
    assert parse_poly("x^2 + y^2 - 1").evaluate((S("1-t"), S("t"))) == S("-2*t + 2*t^2")
    assert not membership(disc, (S("1+t"), S("0")))
    assert membership(parse_formula("0 = 0", ("x",)), (S("17*t^-3"),))


def test_sample_unit_fiber():
    unit = parse_formula("rv(x) = 1")
    pts = sample_piece(unit, 30, seed=1)
    assert len(pts) >= 10
    assert all(rvo(p[0]) == rv(1, 0) for p in pts)


def test_sample_thin_interval():
    iv = parse_formula("x > 0 & x < t")
    pts = sample_piece(iv, 30, seed=2)
    for (x,) in pts:
        e, c = x.terms[0]
        # c = 1 is fine when the next term is negative
        assert e > 1 or (e == 1 and 0 < c <= 1)
        assert S("0") < x < S("t")


def test_sample_empty_piece():
    with pytest.raises(SamplingExhausted):
        sample_piece(parse_formula("x > 0 & x < 0"), 5, budget=200)


def test_domain_keywords():
    O = domain_piece("O", ("x",))
    M = domain_piece("M", ("x",))
    assert membership(O, (S("1+t"),)) and not membership(M, (S("1+t"),))
    assert membership(M, (S("t^(1/5)"),))


def test_partition_soundness():
    # a sign partition of the plane by x*y - t: exactly one piece per point
    from tconvex.formula import Partition

    pieces = [parse_formula(f"x*y - t {op} 0", ("x", "y")) for op in ("<", "=", ">")]
    part = Partition(pieces)
    pts = sample_piece(parse_formula("0 = 0", ("x", "y")), 1000, seed=9)
    # add points on the curve itself
    pts += [(S(f"{k}"), S(f"{k}^-1*t") if k else S("0")) for k in range(1, 20)]
    assert len(pts) >= 1000
    for p in pts:
        assert len(part.locate(p)) == 1


def _random_poly(rng, vars=("x", "y")):
    terms = []
    for _ in range(rng.randint(1, 4)):
        c = rng.choice(["1", "-2", "t", "3*t^(1/2)", "(1-t)"])
        terms.append(f"{c}*x^{rng.randint(0, 3)}*y^{rng.randint(0, 2)}")
    return parse_poly(" + ".join(terms), vars)


def test_eval_is_multiplicative_and_additive():
    rng = random.Random(21)
    pool = ["1+t", "t^(1/3) - 2", "3*t^-1", "-1/2 + t^2"]
    for _ in range(40):
        p, q = _random_poly(rng), _random_poly(rng)
        pt = (S(rng.choice(pool)), S(rng.choice(pool)))
        assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
        assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)


def test_gradient_linear_and_leibniz():
    rng = random.Random(22)
    for _ in range(40):
        p, q = _random_poly(rng), _random_poly(rng)
        for dp, dq, dpq, dsum in zip(gradient(p), gradient(q), gradient(p * q), gradient(p + q)):
            assert dpq == dp * q + p * dq
            assert dsum == dp + dq
