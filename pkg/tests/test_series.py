from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hahnmeasure.constants import Ordering, RealConstant
from hahnmeasure.series import INFINITE, Series, Sign, t

from conftest import bounded_series, nonzero_series, series


def test_arithmetic_examples():
    assert (1 + t()) * (1 - t()) == 1 - t(2)
    assert t(Fraction(1, 2)) * t(Fraction(1, 3)) == t(Fraction(5, 6))
    assert (t(-1) + 1) + (-t(-1)) == Series.constant(1)


def test_inverse_examples():
    assert str((1 - t()).inv(4)) == "1 + t + t^2 + t^3 + O(t^4)"
    assert t(-1).inv() == t() and t(-1).inv().is_exact
    assert Series.constant(2).inv() == Series.constant(Fraction(1, 2))


def test_root_examples():
    assert t(2).sqrt() == t()
    assert str((1 + t()).sqrt(3)) == "1 + 1/2*t - 1/8*t^2 + O(t^3)"
    assert (8 * t(-3)).nth_root(3) == 2 * t(-1)


def test_sign_examples():
    assert (t(-1) - 10 ** 6).sign() is Sign.POSITIVE
    assert (t() - t(Fraction(1, 2))).sign() is Sign.NEGATIVE
    for n in (1, 10, 10 ** 9):
        assert t().compare(0) is Ordering.GREATER
        assert t().compare(Series.constant(Fraction(1, n))) is Ordering.LESS


def test_standard_part_examples():
    assert (3 + t()).standard_part() == RealConstant(3)
    assert t(-1).standard_part() is INFINITE
    assert t(Fraction(1, 2)).standard_part() == RealConstant(0)


@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f + g == g + f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == Series.zero()


@given(series(max_terms=1).filter(lambda s: not s.is_zero()))
def test_monomial_inverse_is_exact(f):
    assert f * f.inv() == Series.constant(1)


@given(nonzero_series)
def test_inverse_up_to_precision(f):
    assert (f * f.inv(f.ord() + 6)).equal_up_to(Series.constant(1))


@given(nonzero_series, nonzero_series)
def test_order_of_product(f, g):
    assert (f * g).ord() == f.ord() + g.ord()


@given(nonzero_series, nonzero_series)
def test_order_of_sum(f, g):
    s = f + g
    assume(not s.is_zero())
    assert s.ord() >= min(f.ord(), g.ord())


@given(series(), series(), series())
def test_order_compatible_with_addition(f, g, h):
    assert f.compare(g) == (f + h).compare(g + h)


@given(nonzero_series, nonzero_series)
def test_positive_cone_closed(f, g):
    f, g = abs(f), abs(g)
    assert (f * g).sign() is Sign.POSITIVE
    assert (f + g).sign() is Sign.POSITIVE
    if f.compare(g) is not Ordering.GREATER:
        assert f.ord() >= g.ord()


@given(series(), series())
def test_total_order_is_antisymmetric(f, g):
    assert int(f.compare(g)) == -int(g.compare(f))
    assert (f.compare(g) is Ordering.EQUAL) == (f == g)


@given(bounded_series(), bounded_series())
def test_standard_part_is_a_ring_homomorphism(f, g):
    st_ = Series.standard_part
    assert st_(f + g) == st_(f) + st_(g)
    assert st_(f * g) == st_(f) * st_(g)


@pytest.mark.parametrize("tau", [Fraction(1, 100), Fraction(1, 1000)])
@given(f=series(), g=series())
def test_instantiation_is_a_homomorphism(tau, f, g):
    # rational exponents: float(tau) ** q is an independent evaluation path
    def direct(s):
        return sum(float(c.as_fraction()) * float(tau) ** float(e.as_fraction()) for e, c in s.terms)
    for value in (f, f * g, f + g):
        expected = direct(value)
        got = value.instantiate(tau)
        assert got == pytest.approx(expected, rel=1e-9, abs=1e-9 * max(1.0, abs(expected)))
    assert (f * g).instantiate(tau) == pytest.approx(f.instantiate(tau) * g.instantiate(tau),
                                                     rel=1e-9, abs=1e-6)


@given(series(), st.fractions(min_value=-2, max_value=4, max_denominator=3))
def test_truncation_is_known_below(f, q):
    cut = f.truncate(q)
    assert cut.equal_up_to(f, prec=q)
    assert all(e < q for e, _ in cut.terms)


def test_json_round_trip_shape():
    data = (2 * t(Fraction(1, 2)) - 3 + t(-1)).to_json()
    assert data["precision"] is None
    assert [term["exp"] for term in data["terms"]] == [["-1"], ["0"], ["1/2"]]
