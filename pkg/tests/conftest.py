from __future__ import annotations

from fractions import Fraction

import pytest

from tconvex.series import PuiseuxSeries, parse_series


def S(text: str) -> PuiseuxSeries:
    return parse_series(text)


def as_fraction_dict(x: PuiseuxSeries) -> dict:
    """Independent view of a series: exponent -> Fraction."""
    return {Fraction(int(e.numerator), int(e.denominator)): Fraction(int(c.numerator), int(c.denominator))
            for e, c in x.terms}


@pytest.fixture
def series_of():
    return S


def to_sympy(x: PuiseuxSeries):
    """Exact sympy expression in a positive symbol t (rational coefficients only)."""
    import sympy

    t = sympy.Symbol("t", positive=True)
    return sum((sympy.Rational(int(c.numerator), int(c.denominator)) *
                t ** sympy.Rational(int(e.numerator), int(e.denominator)) for e, c in x.terms),
               sympy.Integer(0))
