"""Smoothing a tent function with the Cauchy kernel of infinitesimal width t.

The convolution is computed in closed form, then split into a part without X
and multiples of X.  The X-free part is infinitely close to the tent.

Run: python3 demos/smoothing.py
"""
from fractions import Fraction

from hahnmeasure.constructible import convolve, extract_coefficients
from hahnmeasure.parser import parse_expr
from hahnmeasure.semialg import Interval, eval_expr
from hahnmeasure.series import Series, t

tent = parse_expr("piecewise(s < -1: 0, s < 0: s + 1, s < 1: 1 - s, 0)")
smoothed = convolve(tent, t())
points = [Fraction(-1, 2), Fraction(0), Fraction(1, 2), 1 + t(), Fraction(3)]
h0 = extract_coefficients(smoothed, Interval(-1, 4), "x", points=points)[0]

for p in points:
    x = p if isinstance(p, Series) else Series.constant(p)
    g, h = eval_expr(tent, {"s": x}), eval_expr(h0, {"x": x})
    print(f"x = {x}:  g = {g},  h0 = {h}")
    print(f"    gap {g - h} is infinitesimal: {(g - h).is_infinitesimal()}")
