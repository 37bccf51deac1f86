from fractions import Fraction

import pytest

from postlie import scalars
from postlie.errors import ModeMismatch


def test_modes_are_distinct_strings():
    assert scalars.EXACT != scalars.FLOAT
    scalars.check_mode(scalars.EXACT)
    scalars.check_mode(scalars.FLOAT)
    with pytest.raises(ModeMismatch):
        scalars.check_mode("symbolic")


def test_coerce_exact_accepts_ints_fractions_strings():
    assert scalars.coerce(3, scalars.EXACT) == Fraction(3)
    assert scalars.coerce(Fraction(1, 3), scalars.EXACT) == Fraction(1, 3)
    assert scalars.coerce("-2/7", scalars.EXACT) == Fraction(-2, 7)


def test_coerce_exact_rejects_floats():
    with pytest.raises(ModeMismatch):
        scalars.coerce(0.5, scalars.EXACT)


def test_coerce_float_accepts_ints_floats_strings():
    assert scalars.coerce(0.5, scalars.FLOAT) == 0.5
    assert scalars.coerce(3, scalars.FLOAT) == 3.0
    assert scalars.coerce("1/4", scalars.FLOAT) == 0.25


def test_coerce_float_rejects_raw_fractions():
    # callers convert explicitly; silently mixing the two scalar kinds is
    # how tolerance bugs sneak in
    with pytest.raises(ModeMismatch):
        scalars.coerce(Fraction(1, 2), scalars.FLOAT)


def test_parse_and_format_rational_round_trip():
    for text in ("0", "5", "-3/4", "22/7"):
        assert scalars.format_rational(scalars.parse_rational(text)) == text


def test_is_zero_respects_mode_and_tolerance():
    assert scalars.is_zero(Fraction(0), scalars.EXACT, 1e-10)
    assert not scalars.is_zero(Fraction(1, 10**12), scalars.EXACT, 1e-10)
    assert scalars.is_zero(1e-12, scalars.FLOAT, 1e-10)
    assert not scalars.is_zero(1e-8, scalars.FLOAT, 1e-10)


def test_ratio_is_exact_in_exact_mode():
    assert scalars.ratio(1, 3, scalars.EXACT) == Fraction(1, 3)
    assert scalars.ratio(1, 3, scalars.FLOAT) == pytest.approx(1 / 3)
