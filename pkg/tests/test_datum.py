from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hahnmeasure.algebra import X, compare_algebra, reduce
from hahnmeasure.calculus import measure_1d, measure_region
from hahnmeasure.config import working_precision
from hahnmeasure.constants import Ordering, sqrt
from hahnmeasure.datum import (DegenerateUnit, Section, Transport, build_isomorphism_Q,
                               hyperbola, reduced_invariance_check, verify_nonisomorphism_rank2)
from hahnmeasure.exponents import QQ, ExponentGroup
from hahnmeasure.logexp import partial_log
from hahnmeasure.parser import parse_domain
from hahnmeasure.series import Series, t

from conftest import algebra_elements

STANDARD = Section.standard()


def section(unit: Series, generator=-1) -> Section:
    return Section([(QQ(generator), unit * t(generator))])


@st.composite
def units(draw):
    """Positive units c (1 + h) with h infinitesimal."""
    c = draw(st.fractions(min_value=Fraction(1, 4), max_value=5, max_denominator=4))
    tail = draw(st.lists(st.tuples(st.fractions(min_value=Fraction(1, 2), max_value=3, max_denominator=2),
                                   st.fractions(min_value=-2, max_value=2, max_denominator=3)),
                         max_size=2))
    return c * (1 + Series(tail))


def test_identity_section():
    phi = build_isomorphism_Q(STANDARD, STANDARD)
    assert str(phi) == "X -> X"
    assert phi.shift.is_zero()


def test_constant_rescaling():
    assert str(build_isomorphism_Q(STANDARD, section(Series.constant(2)))) == "X -> X + log(2)"


def test_unit_rescaling():
    phi = build_isomorphism_Q(STANDARD, section(1 + t()))
    assert phi.shift.equal_up_to(partial_log(1 + t()))


def test_positive_generator_gives_the_same_map():
    a = build_isomorphism_Q(STANDARD, section(1 + t()))
    b = build_isomorphism_Q(Section([(QQ(1), t())]), section((1 + t()).inv(), generator=1))
    assert a.x_image.equal_up_to(b.x_image)


@given(units(), algebra_elements(), algebra_elements())
def test_isomorphism_preserves_order(u, p, q):
    phi = build_isomorphism_Q(STANDARD, section(u))
    order = compare_algebra(p, q)
    if order is Ordering.EQUAL:
        # images of equal elements agree only up to the working precision
        assert phi(p).equal_up_to(phi(q))
    else:
        assert compare_algebra(phi(p), phi(q)) is order


@settings(max_examples=15)
@given(units(), units(), units())
def test_composition(u1, u2, u3):
    s1, s2, s3 = section(u1), section(u2), section(u3)
    direct = build_isomorphism_Q(s1, s3)
    composed = build_isomorphism_Q(s1, s2).then(build_isomorphism_Q(s2, s3))
    assert composed.x_image.equal_up_to(direct.x_image)
    g = QQ(-1)
    assert composed.transport(s1(g)).equal_up_to(direct.transport(s1(g)))


@given(units(), st.fractions(min_value=-3, max_value=3, max_denominator=3))
def test_isomorphism_commutes_with_interval_measures(u, shift):
    # Phi(lambda_alpha(A)) = lambda_beta(K(A)) for A = [a, b]
    K = Transport(STANDARD, section(u))
    phi = build_isomorphism_Q(STANDARD, section(u))
    a, b = Series.constant(shift), t(-2) + shift
    A = parse_domain(f"[{a}, {b}]")
    assert phi(measure_1d(A).algebra()).equal_up_to(measure_1d(K.set(A)).algebra())


@given(units())
def test_isomorphism_on_hyperbola(u):
    c = 3 * t(-2) + t(-1) + 5
    phi = build_isomorphism_Q(STANDARD, section(u))
    K = phi.transport
    alpha = measure_region(hyperbola(c)).algebra()
    beta = measure_region(K.set(hyperbola(c))).algebra()
    assert phi(alpha).equal_up_to(beta)


def test_rank2_witness():
    report = verify_nonisomorphism_rank2(sqrt(2), 1 + t())
    assert report.verdict == "NonIsomorphic"
    group = report.g.group
    log_unit = Series([(group(e.as_fraction(), 0), c) for e, c in partial_log(1 + t()).terms],
                      group(working_precision(), 0), group)
    assert report.g.equal_up_to(log_unit)
    assert not report.residual.known_zero()


def test_rank2_witness_with_irrational_exponent_unit():
    group = ExponentGroup([1, sqrt(2)])
    unit = 1 + Series.monomial(1, group(0, 1), group)
    assert verify_nonisomorphism_rank2(sqrt(2), unit).verdict == "NonIsomorphic"


def test_rank2_degenerate_unit():
    with pytest.raises(DegenerateUnit):
        verify_nonisomorphism_rank2(sqrt(2), Series.constant(1))


GALLERY_SETS = [
    "[0, t^(-1) + 3]",
    "[1, t^(-1)]",
    "[t, 2*t] u [1, t^(-1/2)]",
    "region x in [1, 3*t^(-2) + t^(-1) + 5]; y in [0, 1/x]",
    "region x in [1, t^(-1)]; y in [0, 1/x]",
    "region x in [0, t^(-1)]; y in [0, 2 + t]",
    "region x in [-t, t]; y in [-1/t, 1/t]",
    "[0, inf[",
]


@given(units())
def test_reduced_measures_do_not_depend_on_the_section(u):
    entries = reduced_invariance_check(STANDARD, section(u), [parse_domain(s) for s in GALLERY_SETS])
    assert all(e.agree for e in entries)


def test_hyperbola_bounded_parts_differ():
    entry, = reduced_invariance_check(STANDARD, section(Series.constant(2)),
                                      [parse_domain(GALLERY_SETS[4])])
    assert entry.value.algebra() != entry.other.algebra()
    assert str(entry.reduced) == str(entry.other_reduced) == "X"


def test_rank2_witness_needs_an_irrational_ratio():
    with pytest.raises(ValueError):
        verify_nonisomorphism_rank2(2, 1 + t())
