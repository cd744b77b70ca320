import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from flatcone.rational import RotationClass, pi_fraction, pi_text

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=60)


def test_normalised_into_zero_two():
    assert RotationClass.of(Fraction(7, 3)).fraction == Fraction(1, 3)
    assert RotationClass.of(Fraction(-1, 2)).fraction == Fraction(3, 2)
    assert RotationClass.of((4, 2)).is_identity()


def test_pm_identity():
    assert RotationClass.of(1).is_pm_identity()
    assert RotationClass.of(0).is_pm_identity()
    assert not RotationClass.of(Fraction(2, 3)).is_pm_identity()


@given(fractions, fractions)
def test_group_law(a, b):
    ra, rb = RotationClass.of(a), RotationClass.of(b)
    assert (ra + rb).fraction == (a + b) % 2
    assert (ra + rb - rb) == ra
    assert (ra + -ra).is_identity()


@given(fractions)
def test_cos_sin_match_float(a):
    c, s = RotationClass.of(a).cos_sin()
    assert math.isclose(c, math.cos(float(a) * math.pi), abs_tol=1e-12)
    assert math.isclose(s, math.sin(float(a) * math.pi), abs_tol=1e-12)


def test_pi_fraction_recognises_rationals():
    assert pi_fraction(3 * math.pi / 4) == Fraction(3, 4)
    assert pi_fraction(math.sqrt(2)) is None


@pytest.mark.parametrize("frac, text", [(Fraction(13, 3), "13pi/3"), (Fraction(1, 3), "pi/3"),
                                        (Fraction(6), "6pi"), (Fraction(1), "pi"), (Fraction(0), "0")])
def test_pi_text(frac, text):
    assert pi_text(frac) == text
