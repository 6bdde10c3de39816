from __future__ import annotations

import random

import pytest

from tconvex.cells import (ball_decomposition_with_centres, cell_decompose_1var,
                           monotone_decomposition, normal_form_1var)
from tconvex.formula import parse_formula, parse_poly, safe_contains
from tconvex.rv import rv, rvo
from tconvex.series import PuiseuxSeries
from tconvex.sampling import make_rng, random_series

from conftest import S


def test_monotone_square():
    out = [(str(c), d) for c, d in monotone_decomposition("x^2")]
    assert out == [("(-inf, 0)", "strictly_decreasing"), ("{0}", "constant"),
                   ("(0, +inf)", "strictly_increasing")]


def test_monotone_cubic_splits_at_critical_points():
    out = monotone_decomposition("x^3 - 3*x")
    points = [str(c) for c, d in out if c.kind == "point"]
    # critical points are the roots of 3x^2 - 3
    assert points == ["{-1}", "{1}"]
    assert [d for _, d in out] == ["strictly_increasing", "constant", "strictly_decreasing",
                                   "constant", "strictly_increasing"]


def test_monotone_constant():
    out = monotone_decomposition("5")
    assert len(out) == 1 and out[0][1] == "constant"


def test_cells_examples():
    (c,) = cell_decompose_1var("0 < x & x < 1")
    assert c.kind == "interval" and str(c) == "(0, 1)"
    (c,) = cell_decompose_1var("rv(x) = 1*t^1")
    assert c.kind == "vdisc"
    assert S("t + t^2") in c and S("2*t") not in c
    (c,) = cell_decompose_1var("x^2 < t")
    assert c.kind == "interval"
    assert c.lo.center == S("-t^(1/2)") and c.hi.center == S("t^(1/2)")


def test_normal_forms():
    nf = normal_form_1var("x = 2")
    assert nf.centers == [S("0"), S("2")]
    assert str(nf) == "(rv(x - 2) = 0@RV)"
    nf = normal_form_1var("0 < x & x < 1")
    assert str(nf) == "(rv(x) > 0@RV & rv(x - 1) < 0@RV)"


FORMULAS = [
    "x^2 < t",
    "x^3 - x > 0",
    "rv(x) = 1*t^1",
    "rv(x - 1) > 1*t^1 & x < 2",
    "x^2 - 2*t*x - t^3 >= 0 & x < 1",
    "x*(x - t)*(x - 2*t) != 0",
]


def _points(f, rng, n=150):
    # random points plus points straddling every centre of the normal form
    pts = [random_series(rng) for _ in range(n)]
    for c in normal_form_1var(f).centers:
        for e in ("t^(1/2)", "t", "t^2", "t^3"):
            pts += [c, c + S(e), c - S(e), c + S(e) * S("1/2")]
    return pts


@pytest.mark.parametrize("text", FORMULAS)
def test_decomposition_agrees_with_formula(text):
    piece = parse_formula(text)
    cells = cell_decompose_1var(text)
    nf = normal_form_1var(text)
    rng = make_rng(7)
    checked = 0
    for x in _points(text, rng):
        want = safe_contains(piece, (x,))
        if want is None:
            continue  # a truncated root itself: the oracle cannot decide
        checked += 1
        assert sum(c.contains(x) for c in cells) == int(want)
        assert nf.evaluate(x) == want
    assert checked > 150


def test_centres_single_point():
    bd = ball_decomposition_with_centres([S("0")])
    for x in (S("t"), S("-3 + t"), S("t^-2")):
        assert bd.centre(x) == S("0")
        assert bd.fiber_code(x) == rvo(x)


def test_centres_two_points():
    bd = ball_decomposition_with_centres([S("0"), S("1")])
    b = S("1+t")
    # val(b - 1) = 1 beats val(b - 0) = 0
    assert bd.centre(b) == S("1")
    assert bd.fiber_code(b) == rv(1, 1)
    assert S("1 + 2*t") not in bd.fiber(b)
    assert S("1 + t - t^2") in bd.fiber(b)
    assert bd.centre(S("t")) == S("0")


def test_disjunction_is_not_in_the_grammar():
    from tconvex.errors import ParseError

    with pytest.raises(ParseError):
        parse_formula("x < 0 | x > 1")
