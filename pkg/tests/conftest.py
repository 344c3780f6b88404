from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hahnmeasure import PI, Series, X, AlgebraElement
from hahnmeasure.constants import RealConstant, sqrt

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
nonzero_rationals = small_rationals.filter(bool)
exponents = st.fractions(min_value=-3, max_value=3, max_denominator=4)
positive_exponents = st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=4)


@st.composite
def constants(draw):
    """Rationals mixed with pi and sqrt(2), the irrationals used across the tests."""
    a, b, c = draw(small_rationals), draw(small_rationals), draw(small_rationals)
    return RealConstant(a) + PI * b + sqrt(2) * c


@st.composite
def series(draw, max_terms=3, coefficients=small_rationals, exps=exponents):
    terms = draw(st.lists(st.tuples(exps, coefficients), max_size=max_terms))
    return Series(terms)


nonzero_series = series().filter(lambda s: not s.is_zero())


@st.composite
def bounded_series(draw):
    """Series with nonnegative exponents: finite, standard part defined."""
    return draw(series(exps=st.fractions(min_value=0, max_value=3, max_denominator=4)))


@st.composite
def algebra_elements(draw, max_degree=2):
    coeffs = draw(st.lists(series(max_terms=2), min_size=1, max_size=max_degree + 1))
    out = AlgebraElement.lift(0)
    for k, c in enumerate(coeffs):
        out = out + X ** k * c
    return out
