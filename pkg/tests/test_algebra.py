import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hahnmeasure.algebra import AlgebraElement, X, compare_algebra, reduce
from hahnmeasure.constants import Ordering
from hahnmeasure.series import Series, t

from conftest import algebra_elements, series

# Coefficients in {-1, 0, 1}, integer exponents in [-2, 2], X-degree <= 3.  For such
# elements and their differences the dominant term outweighs the rest by a wide margin
# already at t = 1/1000, so the numeric sign is an independent check of the verdict.
unit_coefficients = st.sampled_from([-1, 0, 1])


@st.composite
def oracle_elements(draw):
    out = AlgebraElement.lift(0)
    for k in range(draw(st.integers(0, 3)) + 1):
        for e in range(-2, 3):
            out = out + X ** k * t(e) * draw(unit_coefficients)
    return out


def test_ring_examples():
    assert (X + 1) * (X - 1) == X * X - 1
    assert t() * X + t() * X == X * t() * 2
    assert ((X * X + 3) * 0).is_zero()


def test_order_examples():
    assert compare_algebra(X, 10 ** 6) is Ordering.GREATER
    assert compare_algebra(X, t(Fraction(-1, 100))) is Ordering.LESS
    assert compare_algebra(X * X, t(-1)) is Ordering.LESS
    # independent check of the last verdict: log(1/tau)^2 < 1/tau for tau <= 1/100
    assert all(math.log(1 / tau) ** 2 < 1 / tau for tau in (1e-2, 1e-3, 1e-6, 1e-9))


def test_degree_examples():
    assert (X * X + t()).degree() == 2
    assert AlgebraElement.lift(5).degree() == 0
    assert (X * t(-1)).degree() == 1


def test_reduce_examples():
    assert str(reduce(X + 3 + t())) == "X"
    assert str(reduce(AlgebraElement.lift(t(-1) + 7))) == "t^(-1)"
    assert str(reduce(AlgebraElement.lift(5))) == "0"


@given(algebra_elements(), algebra_elements(), algebra_elements())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@given(algebra_elements(), algebra_elements(), algebra_elements())
def test_order_is_compatible(p, q, r):
    order = compare_algebra(p, q)
    assert compare_algebra(q, p) == Ordering(-int(order))
    assert compare_algebra(p + r, q + r) == order
    if r.sign() > 0:
        assert compare_algebra(p * r, q * r) == order


@given(st.integers(min_value=0, max_value=10 ** 12),
       st.fractions(min_value=Fraction(1, 1000), max_value=5, max_denominator=1000),
       st.integers(min_value=0, max_value=8))
def test_sandwich(n, eps, k):
    assert compare_algebra(n, X) is Ordering.LESS
    assert compare_algebra(X ** k, t(-eps)) is Ordering.LESS


@pytest.mark.parametrize("tau", [1e-3, 1e-6])
@given(p=oracle_elements(), q=oracle_elements())
def test_order_matches_instantiation(tau, p, q):
    order = compare_algebra(p, q)
    d = p - q
    value = d.instantiate(tau)
    if order is Ordering.EQUAL:
        assert d.is_zero()
        return
    # floats resolve the sign only when it stands clear of rounding in the largest term
    scale = max(abs(c.instantiate(tau)) * math.log(1 / tau) ** k for k, c in enumerate(d.coeffs))
    assume(abs(value) > 1e-6 * scale)
    assert math.copysign(1, value) == int(order)


@given(algebra_elements())
def test_degree_is_additive(p):
    assume(not p.is_zero())
    assert (p * X).degree() == p.degree() + 1


@given(algebra_elements(), series(exps=st.fractions(min_value=0, max_value=3, max_denominator=4)))
def test_reduce_ignores_bounded_constant_term(p, bounded):
    assert reduce(p + bounded).equal_up_to(reduce(p))
