from __future__ import annotations

from fractions import Fraction

import mpmath
from hypothesis import given, strategies as st

from qtbeta import scalars
from qtbeta.scalars import GaussianRational, I

rats = st.fractions(min_value=-99, max_value=99, max_denominator=50)
gauss = st.builds(GaussianRational, rats, rats)


@given(gauss, gauss)
def test_field_axioms(a, b):
    assert a + b == b + a
    assert a * b == b * a
    if b != 0:
        assert (a / b) * b == a


@given(gauss)
def test_json_round_trip(a):
    assert scalars.from_json(scalars.to_json(a)) == a


def test_i_squared():
    assert I * I == -1
    assert scalars.simplify(I * I) == Fraction(-1)


def test_parse_scalar():
    assert scalars.parse_scalar("1/2") == Fraction(1, 2)
    assert scalars.parse_scalar("3") == Fraction(3)
    assert scalars.parse_scalar("0.5+1j") == mpmath.mpc(0.5, 1)


def test_exact_sqrt():
    assert scalars.exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert scalars.exact_sqrt(Fraction(-1, 4)) == GaussianRational(0, Fraction(1, 2))


def test_float_json_keeps_precision():
    with mpmath.workprec(128):
        x = mpmath.mpf(1) / 3
        y = scalars.from_json(scalars.to_json(x))
        assert abs(x - y) < mpmath.mpf(2) ** -120
