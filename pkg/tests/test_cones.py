from __future__ import annotations

import pytest
import sympy

from tconvex.cones import induced_cone_partition, tangent_cone_hypersurface, tangent_cone_membership
from tconvex.corpus import corpus_candidates
from tconvex.formula import parse_poly
from tconvex.tstrat import candidate

from conftest import S


def _lowest_form_oracle(text: str, p: tuple, names: str):
    # oracle: expand f(p + lam*y) in lam with sympy, keep the lowest nonzero coefficient
    vs = sympy.symbols(names)
    lam = sympy.Symbol("lam")
    f = sympy.sympify(text.replace("^", "**"), locals={str(v): v for v in vs})
    g = sympy.expand(f.subs({v: c + lam * v for v, c in zip(vs, p)}, simultaneous=True))
    poly = sympy.Poly(g, lam)
    k = min(m[0] for m in poly.monoms())
    return sympy.expand(poly.coeff_monomial(lam ** k)), vs


@pytest.mark.parametrize("text,p,names", [
    ("y^2 - x^3", (0, 0), "x y"),
    ("x^2 + y^2 - 1", (1, 0), "x y"),
    ("x^2 + y^2 - z^2", (0, 0, 0), "x y z"),
    ("x + 2*y - 3*z", (0, 0, 0), "x y z"),
    ("x^3 - 3*x*y^2 + y^4 - x*y*z", (0, 0, 0), "x y z"),
])
def test_lowest_form_matches_sympy(text, p, names):
    want, vs = _lowest_form_oracle(text, p, names)
    lf = tangent_cone_hypersurface(text, ",".join(map(str, p)))
    got = sympy.sympify(str(lf).replace("^", "**"), locals={str(v): v for v in vs})
    assert sympy.expand(got - want) == 0


def test_lowest_form_examples():
    assert tangent_cone_hypersurface("y^2 - x^3", "0,0") == parse_poly("y^2", ("x", "y"))
    assert tangent_cone_hypersurface("x^2 + y^2 - 1", "1,0") == parse_poly("2*x", ("x", "y"))


def test_membership_cusp():
    m = tangent_cone_membership("y^2 - x^3", "0,0", "1,0", gamma=3)
    assert m.found
    x, y = m.witness
    # a point of the curve: y^2 = x^3
    assert y * y == x * x * x
    # of the shape (s^2, s^3)
    assert 2 * y.val() == 3 * x.val()
    assert not tangent_cone_membership("y^2 - x^3", "0,0", "0,1", gamma=3).found
    # the real cone is a half-line
    assert not tangent_cone_membership("y^2 - x^3", "0,0", "-1,0", gamma=3).found


def test_membership_zero_direction():
    assert tangent_cone_membership("y^2 - x^3", "0,0", "0,0").found


def test_membership_circle_tangent():
    assert tangent_cone_membership("x^2 + y^2 - 1", "1,0", "0,1").found
    assert not tangent_cone_membership("x^2 + y^2 - 1", "1,0", "1,1").found


def test_induced_partition_cusp():
    ic = induced_cone_partition(corpus_candidates()["cusp"], "0,0")
    lab = lambda *v: ic.label(tuple(S(str(c)) for c in v))
    assert lab(0, 0) == (0,)
    assert lab(1, 0) == (1,) and lab(-3, 0) == (1,)
    assert lab(0, 1) == (2,)


def test_induced_partition_smooth_point():
    circle = candidate(["x", "y"], [None, "x^2 + y^2 - 1 = 0", "x^2 + y^2 - 1 != 0"])
    ic = induced_cone_partition(circle, "1,0")
    lab = lambda *v: ic.label(tuple(S(str(c)) for c in v))
    assert lab(0, 1) == lab(0, -2) == lab(0, 0) == (1,)
    assert lab(1, 0) == (2,)


def test_induced_partition_isolated_point():
    pt = candidate(["x", "y"], ["x = 0 & y = 0", None, "x^2 + y^2 != 0"])
    ic = induced_cone_partition(pt, "0,0")
    assert [str(p) for p in ic.strata[0].pieces] == ["x = 0 & y = 0"]
