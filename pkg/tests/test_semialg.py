from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hahnmeasure.calculus import measure_1d
from hahnmeasure.constants import compare
from hahnmeasure.parser import parse_expr, parse_set
from hahnmeasure.semialg import Interval, SetOneD, box, eval_expr, normalize, translate
from hahnmeasure.series import Series, t

from conftest import bounded_series, series

lengths = series(max_terms=2, coefficients=st.fractions(min_value=0, max_value=4, max_denominator=3))


@st.composite
def sets(draw):
    comps = []
    for _ in range(draw(st.integers(0, 4))):
        a = draw(series(max_terms=2))
        comps.append(Interval(a, a + draw(lengths)))
    return SetOneD(tuple(comps))


@st.composite
def disjoint_sets(draw):
    """Intervals laid out left to right with strictly positive gaps."""
    comps = []
    cursor = draw(series(max_terms=2))
    for _ in range(draw(st.integers(1, 4))):
        lo = cursor + Fraction(1, 2) + draw(lengths)
        cursor = lo + draw(lengths)
        comps.append(Interval(lo, cursor))
    return SetOneD(tuple(comps))


def render(s: SetOneD) -> str:
    return str(s)


def test_normalize_examples():
    assert render(normalize(parse_set("[0,2] u [1,3]"))) == "[0, 3]"
    assert render(normalize(parse_set("[0,1] u {2}"))) == "[0, 1] u {2}"
    assert render(normalize(parse_set("[t, 2*t] u [3*t, 1]"))) == "[t, 2*t] u [3*t, 1]"


def test_eval_examples():
    assert eval_expr(parse_expr("1/x"), {"x": t(-1)}) == t()
    assert eval_expr(parse_expr("sqrt(1-x^2)"), {"x": Series.zero()}) == Series.constant(1)
    assert eval_expr(parse_expr("abs(x)"), {"x": -t()}) == t()


def test_translate_and_box_examples():
    assert render(translate(parse_set("[0,1]"), t(-1))) == "[t^(-1), t^(-1) + 1]"
    assert translate(SetOneD(()), t(-1)).is_empty()
    region = box(parse_set("[0,1]"), parse_set("[0,2]"))
    assert region.is_box() and region.dimension == 2


@given(sets())
def test_normalize_is_idempotent(s):
    once = normalize(s)
    assert normalize(once) == once


def union_length(s: SetOneD, tau: float) -> float:
    """Length of a union of real intervals by a left-to-right sweep."""
    spans = sorted((c.lo.to_float({}, tau), c.hi.to_float({}, tau)) for c in s.components)
    total, reach = 0.0, float("-inf")
    for lo, hi in spans:
        if hi > reach:
            total += hi - max(lo, reach)
            reach = hi
    return total


@given(sets())
def test_normalize_preserves_measure(s):
    tau = 1e-6
    value = measure_1d(normalize(s)).value.instantiate(tau)
    scale = max([1.0] + [abs(c.hi.to_float({}, tau)) for c in s.components])
    assert value == pytest.approx(union_length(s, tau), abs=1e-9 * scale)


@given(disjoint_sets())
def test_normalize_keeps_disjoint_sets(s):
    assert normalize(s) == s
    total = sum((c.hi - c.lo for c in s.components), start=parse_expr("0").single())
    assert measure_1d(normalize(s)).sym().equals(total)


EXPRESSIONS = ["x^2 + 1", "1/(1 + x^2)", "sqrt(1 + x^2)", "abs(x) - 3*x", "arctan(x)",
               "piecewise(x < 0: -x, x^3)"]


@pytest.mark.parametrize("text", EXPRESSIONS)
@given(x=bounded_series())
def test_eval_commutes_with_standard_part(text, x):
    e = parse_expr(text)
    near = eval_expr(e, {"x": x}).standard_part()
    at_real = eval_expr(e, {"x": Series.constant(x.standard_part())}).standard_part()
    assert int(compare(near, at_real)) == 0
