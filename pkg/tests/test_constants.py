from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hahnmeasure.constants import (E, PI, Ordering, RealConstant, approx, arctan, compare, log,
                                   sqrt)

from conftest import constants, small_rationals

mpmath.mp.dps = 50


def as_mpf(c: RealConstant):
    lo, hi = approx(c, 160)
    return (mpmath.mpf(lo.numerator) / lo.denominator + mpmath.mpf(hi.numerator) / hi.denominator) / 2


def test_rational_arithmetic():
    assert RealConstant(Fraction(1, 3)) + RealConstant(Fraction(1, 6)) == RealConstant(Fraction(1, 2))
    assert (PI * 0).is_zero()
    assert (PI - PI).normalize().is_zero()


def test_compare_examples():
    # 22/7 - pi = 0.00126..., far above any refinement width used here
    assert mpmath.mpf(22) / 7 > mpmath.pi
    assert compare(RealConstant(Fraction(22, 7)), PI) is Ordering.GREATER
    assert compare(log(1), 0) is Ordering.EQUAL
    assert compare(2 * arctan(1), PI / 2) is Ordering.EQUAL


def test_approx_pi_encloses_and_is_narrow():
    lo, hi = approx(PI, 20)
    assert mpmath.mpf(lo.numerator) / lo.denominator <= mpmath.pi <= mpmath.mpf(hi.numerator) / hi.denominator
    assert hi - lo <= Fraction(4, 2 ** 19)


def test_approx_exact_values():
    assert approx(RealConstant(0), 7) == (0, 0)
    assert approx(RealConstant(Fraction(1, 2)), 4) == (Fraction(1, 2), Fraction(1, 2))


@given(constants(), st.integers(min_value=8, max_value=60), st.integers(min_value=1, max_value=40))
def test_approx_is_nested(c, bits, extra):
    lo, hi = approx(c, bits)
    lo2, hi2 = approx(c, bits + extra)
    assert lo <= lo2 <= hi2 <= hi


@given(constants())
def test_approx_contains_high_precision_value(c):
    lo, hi = approx(c, 40)
    assert mpmath.mpf(lo.numerator) / lo.denominator <= as_mpf(c) + mpmath.mpf(10) ** -40
    assert as_mpf(c) - mpmath.mpf(10) ** -40 <= mpmath.mpf(hi.numerator) / hi.denominator


@given(constants(), constants())
def test_compare_matches_float(a, b):
    d = float(as_mpf(a) - as_mpf(b))
    order = compare(a, b)
    if abs(d) > 1e-9:
        assert int(order) == (1 if d > 0 else -1)
    assert compare(b, a) == Ordering(-int(order))


@given(constants())
def test_normalize_is_idempotent(c):
    once = c.normalize()
    assert once.normalize() == once
    assert compare(once, c) is Ordering.EQUAL


@given(constants(), constants(), constants())
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    if not a.is_zero():
        assert compare(a * a.inverse(), 1) is Ordering.EQUAL


@given(small_rationals, small_rationals)
def test_rational_compare_is_exact(p, q):
    assert int(compare(RealConstant(p), RealConstant(q))) == (p > q) - (p < q)


@pytest.mark.parametrize("value, expected", [
    (lambda: log(E), 1),
    (lambda: sqrt(4), 2),
    (lambda: arctan(0), 0),
    (lambda: sqrt(2) * sqrt(2), 2),
])
def test_canonical_rewrites(value, expected):
    assert value() == RealConstant(expected)
