import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hahnmeasure.constructible import (convolve, differentiate, extract_coefficients,
                                       limit_at_infinity, limit_at_point, simple_description)
from hahnmeasure.parser import parse_expr
from hahnmeasure.semialg import Interval, eval_expr
from hahnmeasure.series import Series, t

P = parse_expr
TENT = "piecewise(s < -1: 0, s < 0: s + 1, s < 1: 1 - s, 0)"


def test_simple_description_examples():
    assert str(simple_description(P("(x + 1)/x"))) == "(1) + (1)*x^(-1)"
    assert str(simple_description(P("log(x)"))) == "(1)*log(x)^1"
    arctan = simple_description(P("arctan(x)"))
    assert str(arctan.terms[0]) == "(pi/2)" and arctan.dominant == (0, 0)
    assert [str(s) for s in arctan.terms[1:3]] == ["(-1)*x^(-1)", "(1/3)*x^(-3)"]


def test_limit_examples():
    assert str(limit_at_infinity(P("log(x)/x"))) == "0"
    assert str(limit_at_infinity(P("2/pi*arctan(s)"))) == "1"
    assert str(limit_at_infinity(P("log(s)"))) == "no-limit"
    assert str(limit_at_infinity(P("log(s)"), mode="S")) == "+inf"


def test_limit_at_point_examples():
    assert str(limit_at_point(P("(x^2 - 1)/(x - 1)"), 1)) == "2"
    assert str(limit_at_point(P("log(x)"), 1)) == "0"
    assert str(limit_at_point(P("1/x"), 0, "+")) == "+inf"
    assert str(limit_at_point(P("1/x"), 0, "-")) == "-inf"


def test_limit_at_minus_infinity():
    assert str(limit_at_infinity(P("arctan(x)"), direction=-1)) == "-pi/2"
    assert str(limit_at_infinity(P("x^3"), direction=-1)) == "-inf"


def test_derivative_examples():
    assert str(differentiate(P("log(x)"))) == "x^(-1)"
    assert str(differentiate(P("x*X"))) == "X"
    assert str(differentiate(P("arctan(x)"))) == "1/(x^2 + 1)"


def test_coefficient_examples():
    K = Interval(1, 2)
    assert [str(h) for h in extract_coefficients(P("x + x^2*X"), K)] == ["x", "x^2"]
    assert [str(h) for h in extract_coefficients(P("log(1 + x^2)"), K)] == ["log(x^2 + 1)"]


def test_coefficients_of_a_log_near_zero():
    # on [t, 2t] log x = -X + log(x/t)
    h0, h1 = extract_coefficients(P("log(x)"), Interval(t(), 2 * t()))
    assert str(h0) == "log(abs(t^(-1)*x))" and str(h1) == "-1"


def test_convolution_of_zero():
    assert convolve(P("piecewise(s < -1: 0, s < 1: 0, 0)"), t()).equals(P("0"))


def test_dirac_tail_vanishes():
    # (1/h) integral over |s| > r of Phi(s/h) ds = (pi - 2 arctan(r/h)) / pi, as h -> 0+
    tail = P("(pi - 2*arctan(r/h))/pi").substitute({"r": P("1").single()})
    assert str(limit_at_point(tail, 0, "+", variable="h")) == "0"


# --- limit invariance under factors tending to 1 ------------------------------------------

FACTORS_TO_ONE = ["(1 + 1/x)", "(x^2 + 1)/x^2", "(1 + t/x)", "(x + log(x))/x", "2*x/(2*x + 3)"]


@st.composite
def monomial_sums(draw):
    terms = []
    for _ in range(draw(st.integers(1, 3))):
        c = draw(st.sampled_from(["1", "-2", "1/3", "t", "X", "(1 - t)"]))
        q = draw(st.sampled_from(["-2", "-1", "-1/2", "0", "1/2", "1"]))
        n = draw(st.integers(-1, 2))
        terms.append(f"{c}*x^({q})*log(x)^({n})")
    return terms


@given(monomial_sums(), st.data())
def test_limit_ignores_factors_tending_to_one(terms, data):
    i = data.draw(st.integers(0, len(terms) - 1))
    factor = data.draw(st.sampled_from(FACTORS_TO_ONE))
    changed = list(terms)
    changed[i] = f"{factor}*{terms[i]}"
    for mode in ("P", "S"):
        before = limit_at_infinity(P(" + ".join(terms)), "x", mode)
        after = limit_at_infinity(P(" + ".join(changed)), "x", mode)
        assert before.kind == after.kind
        if before.is_finite:
            assert before.value.equals(after.value)


# --- agreement with real evaluation far out ---------------------------------------------

FINITE_LIMITS = ["2/pi*arctan(x)", "(x + 1)/x", "log(x)/x", "x/(x + 1)",
                 "(3*x^2 + X)/(x^2 + 1)", "x*(sqrt(x^2 + 1) - x)", "x*log(1 + 1/x)",
                 "t*x/(x + t)", "(1 + t)*arctan(x)/(x*arctan(1/x))"]


@pytest.mark.parametrize("text", FINITE_LIMITS)
def test_finite_limits_match_evaluation(text):
    lim = limit_at_infinity(P(text), "x")
    assert lim.is_finite
    tau = 1e-3
    expected = lim.value.to_float({}, tau)
    far = P(text).single().to_float({"x": 1e6}, tau)
    assert far == pytest.approx(expected, rel=1e-3, abs=1e-3)


# --- smoothing by convolution -------------------------------------------------------------


def test_smoothing_tent_is_infinitesimally_close():
    g = P(TENT)
    points = [Fraction(-1, 2), 0, Fraction(1, 2), 1 + t()]
    h0 = extract_coefficients(convolve(g, t()), Interval(-1, 2), "x", points=points)[0]
    for p in points:
        x = p if isinstance(p, Series) else Series.constant(p)
        gap = eval_expr(g, {"s": x}) - eval_expr(h0, {"x": x})
        assert gap.is_infinitesimal(), (p, gap)


def test_smoothing_matches_numeric_convolution():
    from scipy import integrate
    g = P(TENT)
    S = convolve(g, t())
    tau = 1e-3

    def tent(s):
        return max(0.0, 1 - abs(s))

    for x in (-0.5, 0.0, 0.25, 1.5):
        kernel = lambda s: tau / (math.pi * (tau ** 2 + (s - x) ** 2))
        numeric = sum(integrate.quad(lambda s: tent(s) * kernel(s), a, b, points=[x] if a < x < b else None,
                                     limit=400, epsabs=1e-13)[0] for a, b in ((-1, 0), (0, 1)))
        assert S.single().to_float({"x": x}, tau) == pytest.approx(numeric, rel=1e-6, abs=1e-10)
