from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hahnmeasure.constants import Ordering, RealConstant, compare, sqrt
from hahnmeasure.errors import DomainError
from hahnmeasure.exponents import QQ, ExponentGroup, compare_exponents, embed

from conftest import exponents, small_rationals

RANK2 = ExponentGroup([1, sqrt(2)])
rank2 = st.builds(lambda a, b: RANK2(a, b), small_rationals, small_rationals)


def test_embed_examples():
    assert embed(QQ(Fraction(-1, 2))) == RealConstant(Fraction(-1, 2))
    value = embed(RANK2(1, -1))
    assert value == 1 - sqrt(2)
    assert compare(value, 0) is Ordering.LESS
    assert embed(RANK2.zero).is_zero()


def test_compare_examples():
    assert compare_exponents(QQ(Fraction(1, 2)), QQ(Fraction(1, 3))) is Ordering.GREATER
    assert compare_exponents(RANK2(0, 1), RANK2(1, 0)) is Ordering.GREATER
    assert compare_exponents(RANK2(3, 5), RANK2(3, 5)) is Ordering.EQUAL


@given(rank2, rank2, rank2)
def test_group_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + RANK2.zero == a
    assert (a - a).is_zero()


@given(rank2, rank2)
def test_embed_is_a_homomorphism(a, b):
    assert embed(a + b) == embed(a) + embed(b)
    assert embed(-a) == -embed(a)


@given(rank2, rank2, rank2)
def test_order_is_compatible_with_addition(a, b, c):
    assert compare_exponents(a, b) == compare_exponents(a + c, b + c)
    assert compare_exponents(a, b) == compare(embed(a), embed(b))


@given(exponents)
def test_coordinates_inverts_embed(q):
    assert QQ.coordinates(embed(QQ(q))) == QQ(q)


@given(rank2)
def test_coordinates_inverts_embed_rank2(a):
    assert RANK2.coordinates(embed(a)) == a


def test_coordinates_outside_group():
    with pytest.raises(DomainError):
        RANK2.coordinates(sqrt(3))


def test_dependent_generators_are_rejected():
    with pytest.raises(ValueError):
        ExponentGroup([1, 2])
    with pytest.raises(ValueError):
        ExponentGroup([sqrt(2), sqrt(8)])
