from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from gmpy2 import mpq

from tconvex.errors import ParseError, TruncationError
from tconvex.series import (INF, Ordering, PuiseuxSeries, add, compare, diff_val_bound, inv, mul,
                            neg, parse_series, truncate, val, working_precision)
from tconvex.rv import val_tuple

from conftest import S, as_fraction_dict


def test_parse_grammar():
    x = S("3*t^(1/2) + 2*t^2")
    assert x.terms == ((mpq(1, 2), mpq(3)), (mpq(2), mpq(2)))
    assert S("0").is_zero()
    assert S("1 - t + t - 1").is_zero()


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse_series("3*t^(1/2 +")


def test_add_mul_trivial():
    assert add(S("1+t"), S("2-t")) == S("3")
    assert mul(S("t^(1/2)"), S("t^(1/2)")) == S("t")
    assert neg(S("t - 1")) == S("1 - t")


def test_inverse_geometric():
    with working_precision(order=4):
        y = inv(S("1+t"))
    assert y.truncate(4).terms == S("1 - t + t^2 - t^3").terms
    prod = mul(y, S("1+t")) - S("1")
    assert prod.val_lower_bound() >= 4


def test_inverse_against_sympy():
    # oracle: sympy's power series of 1/(2 + 3t - t^2)
    t = sympy.symbols("t")
    ref = sympy.series(1 / (2 + 3 * t - t ** 2), t, 0, 6).removeO()
    with working_precision(order=6):
        y = inv(S("2 + 3*t - t^2")).truncate(6)
    got = as_fraction_dict(y)
    want = {Fraction(int(k)): Fraction(str(ref.coeff(t, k))) for k in range(6) if ref.coeff(t, k) != 0}
    assert got == want


def _naive_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def test_mul_matches_naive_product():
    rng = random.Random(5)
    for _ in range(50):
        a = {Fraction(rng.randint(-4, 8), rng.choice([1, 2, 3])): Fraction(rng.randint(-5, 5), rng.randint(1, 4))
             for _ in range(4)}
        b = {Fraction(rng.randint(-4, 8), rng.choice([1, 2, 3])): Fraction(rng.randint(-5, 5), rng.randint(1, 4))
             for _ in range(4)}
        x = PuiseuxSeries.from_terms({mpq(e.numerator, e.denominator): mpq(c.numerator, c.denominator) for e, c in a.items()})
        y = PuiseuxSeries.from_terms({mpq(e.numerator, e.denominator): mpq(c.numerator, c.denominator) for e, c in b.items()})
        a = {e: c for e, c in a.items() if c}
        b = {e: c for e, c in b.items() if c}
        assert as_fraction_dict(mul(x, y)) == _naive_mul(a, b)


def test_val():
    assert val(S("t^(1/2) + 2*t")) == mpq(1, 2)
    assert val(S("0")) == INF
    assert val_tuple((S("3*t^2"), S("t^-1"))) == -1


def test_val_of_truncated_zero_raises():
    z = PuiseuxSeries((), mpq(3))
    with pytest.raises(TruncationError):
        z.val()


def test_compare():
    assert compare(S("t"), S("1/1000")) == Ordering.LESS
    assert compare(S("1+t"), S("1")) == Ordering.GREATER
    x = S("2 - t^(2/3)")
    assert compare(x, x) == Ordering.EQUAL
    assert S("-t^5") < S("0") < S("t^5")


def test_truncate():
    cut = truncate(S("1+t+t^2"), 2)
    assert cut.terms == S("1+t").terms and cut.trunc == 2
    assert truncate(S("0"), 5).is_truncated_zero()
    z = truncate(S("t^3"), 1)
    assert z.terms == () and z.trunc == 1


def test_ring_laws_random():
    rng = random.Random(11)
    pool = [S(s) for s in ("1+t", "t^(1/2)-3", "2*t^-1 + t^(1/3)", "5", "-t^(3/2)+t^2", "t^(-2/3)")]
    for _ in range(60):
        a, b, c = (rng.choice(pool) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert val(a * b) == val(a) + val(b)
        assert val(a + b) >= min(val(a), val(b))


def test_diff_val_bound():
    assert diff_val_bound(S("1 + t + t^3"), S("1 + t + 2*t^3")) == 3
    assert diff_val_bound(S("1 + t"), S("1 + t")) == INF
    cut = PuiseuxSeries.from_terms({0: mpq(1)}, trunc=2)
    assert diff_val_bound(cut, S("1 + t^5")) == 2
