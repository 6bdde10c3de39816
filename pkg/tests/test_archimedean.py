from __future__ import annotations

import pytest
import sympy
from gmpy2 import mpq

from tconvex.archimedean import (archimedean_tstrat_check, exponential_demo, star_lift,
                                 theorem_main4_suite, whitney_check, whitney_suite)
from tconvex.corpus import corpus_candidates
from tconvex.errors import DomainError, UnsupportedFormula
from tconvex.formula import membership

from conftest import S

CANDS = corpus_candidates()


def test_star_lift():
    disc = star_lift("x^2 + y^2 <= 1")
    assert membership(disc, (S("1-t"), S("t")))
    assert not membership(disc, (S("1+t"), S("0")))
    assert membership(disc, (S("1/2"), S("0")))
    with pytest.raises(UnsupportedFormula):
        star_lift("x^2 + y^2 <= t")


@pytest.mark.parametrize("name,verdict", [
    ("axis", "necessary-conditions-pass"),
    ("cross-no-origin", "fail"),
    ("trivial", "necessary-conditions-pass"),
])
def test_lifted_tstrat(name, verdict):
    assert archimedean_tstrat_check(CANDS[name]).verdict == verdict


def test_whitney_cone_holds():
    ok, reps = whitney_suite(CANDS["cone"])
    assert ok and reps
    assert all(r.curves_tested > 0 for r in reps)


def test_whitney_half_plane_holds():
    ok, reps = whitney_suite(CANDS["half-plane"])
    assert ok


def _cusp_normal_limit():
    # oracle: unit normal of y^2 = s^2 x^2 + x^3 along (-tau^2, 0, tau), tau -> 0+
    x, y, s, tau = sympy.symbols("x y s tau", real=True)
    F = y ** 2 - s ** 2 * x ** 2 - x ** 3
    arc = {x: -tau ** 2, y: 0, s: tau}
    assert sympy.expand(F.subs(arc)) == 0
    n = [sympy.diff(F, v).subs(arc) for v in (x, y, s)]
    norm = sympy.sqrt(sum(c ** 2 for c in n))
    return [sympy.limit(sympy.simplify(c / norm), tau, 0, "+") for c in n]


def test_whitney_cusp_b_fails():
    nlim = _cusp_normal_limit()
    # frozen from the oracle: the normal tends to -e_x, the secant direction
    assert nlim == [-1, 0, 0]
    wc = CANDS["whitney-cusp"]
    rep = whitney_check(wc.strata[2], wc.strata[1], "0,0,0", pair=(2, 1))
    assert rep.a == "holds" and rep.b == "fails"
    wit = next(w for w in rep.witnesses if w.get("condition") == "b")
    assert wit["point"] == ["-t^2", "0", "t"]
    sec = [sympy.Rational(int(c.numerator), int(c.denominator)) for c in wit["secant_limit"]]
    # the secant is parallel to the limiting normal...
    assert sympy.Matrix([sec]).cross(sympy.Matrix([nlim])) == sympy.zeros(1, 3)
    # ...so it is orthogonal to the limiting tangent plane
    for b in wit["tangent_limit"]["basis"]:
        assert sum(sympy.Rational(int(c.numerator), int(c.denominator)) * m
                   for c, m in zip(b, nlim)) == 0


def test_main4_cone_and_vacuous_case():
    rep = theorem_main4_suite(CANDS["cone"])
    assert rep["tstrat"] == "necessary-conditions-pass"
    assert rep["whitney"] == "holds" and rep["implication"] == "holds"
    rep = theorem_main4_suite(CANDS["cross-no-origin"])
    assert rep["implication"] == "vacuous"


def test_main4_cross():
    rep = theorem_main4_suite(CANDS["cross"])
    assert rep["implication"] == "holds"


def test_exponential_demo():
    rep = exponential_demo(2, 3)
    assert rep.verdict == "pass"
    levels = rep.details["levels"]
    assert [lv["N"] for lv in levels] == [10 ** 3, 10 ** 6]
    assert all(lv["exponential"]["violation_at_every_z"] for lv in levels)
    assert levels[1]["exponential"]["min_violation_margin"] > levels[0]["exponential"]["min_violation_margin"]
    for lv in levels:
        assert lv["controls"]["xy"]["violations"] == 0
        assert lv["controls"]["sqrt"]["violations"] == 0


def test_exponential_demo_rejects_bad_bases():
    with pytest.raises(DomainError):
        exponential_demo(2, 2)
