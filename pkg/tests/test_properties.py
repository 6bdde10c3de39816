from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from tconvex.rv import rv_mul, rvo
from tconvex.series import PuiseuxSeries, val, working_precision

exponents = st.builds(Fraction, st.integers(-6, 12), st.sampled_from([1, 2, 3, 4, 6]))
coeffs = st.builds(Fraction, st.integers(-9, 9).filter(bool), st.integers(1, 5))


@st.composite
def series(draw, min_terms=0):
    terms = draw(st.dictionaries(exponents, coeffs, min_size=min_terms, max_size=4))
    return PuiseuxSeries.from_terms({mpq(e.numerator, e.denominator): mpq(c.numerator, c.denominator)
                                     for e, c in terms.items()})


nonzero = series(min_terms=1)


@given(series(), series())
def test_ultrametric(x, y):
    s = x + y
    assert val(s) >= min(val(x), val(y))
    if val(x) != val(y):
        assert val(s) == min(val(x), val(y))


@given(series(), series())
def test_val_multiplicative(x, y):
    assert val(x * y) == val(x) + val(y)


@given(nonzero, nonzero)
def test_rvo_multiplicative(x, y):
    assert rvo(x * y) == rv_mul(rvo(x), rvo(y))


@given(nonzero, series())
def test_rv_equality_criterion(x, y):
    # rvo(x) = rvo(y) iff val(x - y) > val(x)
    assert (rvo(x) == rvo(y)) == (val(x - y) > val(x))


@given(series(), series(), series())
def test_ring_axioms(x, y, z):
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x - x).is_zero()


@settings(max_examples=50)
@given(nonzero)
def test_inverse(x):
    with working_precision(order=6):
        y = x.inv()
    prod = x * y - PuiseuxSeries.const(1)
    # x^-1 is cut at t^6, so x * x^-1 - 1 is known up to t^(6 + val x)
    assert prod.val_lower_bound() >= 6 + val(x)
    assert not prod.terms
