import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hahnmeasure import X
from hahnmeasure.constants import E, PI, Ordering
from hahnmeasure.logexp import analytic_eval, extended_log, partial_exp, partial_log
from hahnmeasure.series import Series, t

from conftest import series

positive_rationals = st.fractions(min_value=Fraction(1, 4), max_value=6, max_denominator=5)
orders = st.fractions(min_value=-2, max_value=2, max_denominator=3)


# small coefficients and exponents >= 1/2 keep |h(tau)| <= 0.2 at tau = 1/100, so the
# series truncated at exponent 12 is accurate far below 1e-9 after instantiation
infinitesimals = series(max_terms=2,
                        coefficients=st.fractions(min_value=-1, max_value=1, max_denominator=4),
                        exps=st.fractions(min_value=Fraction(1, 2), max_value=3, max_denominator=3))


@st.composite
def positive_series(draw):
    """c t^q (1 + h) with c > 0 and h infinitesimal."""
    c, q = draw(positive_rationals), draw(orders)
    return c * t(q) * (1 + draw(infinitesimals))


def test_partial_log_examples():
    assert str(partial_log(1 + t(), 4)) == "t - 1/2*t^2 + 1/3*t^3 + O(t^4)"
    assert str(partial_log(Series.constant(2))) == "log(2)"
    assert str(partial_log(Series.constant(E) * (1 + t()), 3)) == "1 + t - 1/2*t^2 + O(t^3)"


def test_partial_exp_examples():
    assert str(partial_exp(t(), 4)) == "1 + t + 1/2*t^2 + 1/6*t^3 + O(t^4)"
    assert partial_exp(Series.zero()) == Series.constant(1)
    assert partial_exp(partial_log(1 + t(), 6), 6).equal_up_to(1 + t())


def test_extended_log_examples():
    assert extended_log(t(-1)) == X
    assert extended_log(t(Fraction(1, 2))) == X * Fraction(-1, 2)
    assert extended_log(Series.constant(1)).is_zero()


def test_analytic_eval_examples():
    assert str(analytic_eval("arctan", t(-1), 5)) == "pi/2 - t + 1/3*t^3 + O(t^5)"
    assert analytic_eval("arctan", Series.zero()).is_zero()
    assert str(analytic_eval("sqrt", 4 + t(), 3)) == "2 + 1/4*t - 1/64*t^2 + O(t^3)"


def test_arctan_at_infinity_matches_reflection():
    # arctan(x) + arctan(1/x) = pi/2 for x > 0
    total = analytic_eval("arctan", t(-1), 6) + analytic_eval("arctan", t(), 6)
    assert total.equal_up_to(Series.constant(PI / 2), prec=6)


@given(positive_series(), positive_series())
def test_extended_log_is_a_homomorphism(f, g):
    lhs = extended_log(f * g)
    rhs = extended_log(f) + extended_log(g)
    assert lhs.equal_up_to(rhs)


@given(infinitesimals)
def test_exp_log_round_trips(h):
    assert partial_log(partial_exp(h, 6), 6).equal_up_to(h, prec=6)
    assert partial_exp(partial_log(1 + h, 6), 6).equal_up_to(1 + h, prec=6)


@given(positive_series(), positive_series())
def test_extended_log_is_increasing(f, g):
    order = f.compare(g)
    assume(order is not Ordering.EQUAL)
    assert extended_log(f).compare(extended_log(g)) is order


@pytest.mark.parametrize("tau", [Fraction(1, 100), Fraction(1, 1000)])
@given(f=positive_series())
def test_log_instantiates_to_float_log(tau, f):
    value = extended_log(f, 12)
    expected = math.log(f.instantiate(tau))
    assert value.instantiate(float(tau)) == pytest.approx(expected, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("tau", [Fraction(1, 100), Fraction(1, 1000)])
@given(h=infinitesimals)
def test_exp_and_arctan_instantiate(tau, h):
    x = h.instantiate(tau)
    assert partial_exp(h, 12).instantiate(float(tau)) == pytest.approx(math.exp(x), rel=1e-9)
    assert analytic_eval("arctan", h, 12).instantiate(float(tau)) == pytest.approx(
        math.atan(x), rel=1e-9, abs=1e-12)
