from __future__ import annotations

import pytest
from gmpy2 import mpq

from tconvex.errors import DomainError
from tconvex.rv import ZERO_RV, parse_rv, res, rv, rv_fiber, rv_mul, rvo, rvo_n, vrv
from tconvex.series import INF, val

from conftest import S


def test_rvo_leading_monomial():
    assert rvo(S("3*t + 5*t^2")) == rv(3, 1)
    assert rvo(S("0")) == ZERO_RV
    a, b = S("1+t"), S("1+t^2")
    assert rvo(a) == rvo(b) == rv(1, 0)
    assert val(a - b) == 1 > 0


def test_rv_mul():
    assert rv_mul(rv(2, 0), rv(1, 1)) == rv(2, 1)
    assert rv_mul(ZERO_RV, rv(7, 3)) == ZERO_RV
    assert rv_mul(rv(-1, mpq(1, 2)), rv(-3, mpq(1, 3))) == rv(3, mpq(5, 6))


def test_vrv_is_val():
    for s in ("t", "1+t", "7*t^3"):
        assert vrv(rvo(S(s))) == val(S(s))


def test_rvo_is_multiplicative():
    xs = [S(s) for s in ("1+t", "-2*t^(1/2)+t", "t^-1 - 4", "3*t^2 + t^3")]
    for x in xs:
        for y in xs:
            assert rvo(x * y) == rv_mul(rvo(x), rvo(y))


def test_rvo_n():
    r = rvo_n((S("t"), S("t^2")))
    assert r.gamma == 1 and r.lead_vec == (1, 0)
    assert rvo_n((S("t+t^3"), S("t^2+t^3"))) == r
    # the difference of the two tuples has valuation 3 > 1
    assert val(S("t+t^3") - S("t")) == val(S("t^2+t^3") - S("t^2")) == 3
    assert rvo_n((S("0"), S("0"))).gamma == INF


def test_res():
    assert res(S("2+t")) == 2
    assert res(S("t")) == 0
    with pytest.raises(DomainError):
        res(S("t^-1"))


def test_rv_fiber():
    b = rv_fiber(rv(1, 1))
    assert b.radius == 1 and not b.closed and b.center == (S("t"),)
    unit = rv_fiber(rv(1, 0))
    assert S("1+t") in unit
    assert S("2") not in unit
    assert S("1 - t^(1/3)") in unit


def test_parse_rv_roundtrip():
    for xi in (rv(3, 1), rv(-1, mpq(1, 2)), ZERO_RV):
        assert parse_rv(str(xi)) == xi
