"""Logarithm, exponential and restricted analytic functions on series.

Functions are evaluated by Taylor expansion at the standard part of the
argument, applied to the infinitesimal remainder.  The number of terms is
chosen so that every omitted exponent lies at or above the target.
"""
from __future__ import annotations

import math
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import constants as K
from .algebra import AlgebraElement
from .constants import RealConstant
from .errors import DomainError
from .series import INFINITE, Series, _binomial, _power_sum

__all__ = [
    "log_series_coefficient", "partial_log", "partial_exp", "extended_log",
    "analytic_eval", "PowerSeriesFunction", "taylor_coefficients", "section_offset",
]

# log of the unit part s(g) / t^g of the active section, as a function of g;
# None means the standard section g -> t^g
section_offset: ContextVar = ContextVar("section_offset", default=None)


def log_series_coefficient(j: int) -> Fraction:
    """Coefficient of x^j in L(x) = log(1 + x)."""
    if j == 0:
        return Fraction(0)
    return Fraction((-1) ** (j + 1), j)


def _target(f: Series, target):
    return f.default_target() if target is None else f.group.coerce(target)


def _split_unit(f: Series):
    """f = a * t^g * (1 + h) with h infinitesimal."""
    g, a = f.lead()
    h = f.shift(-g).scale(a.inverse()) - 1
    return a, g, h


def partial_log(f: Series, target=None) -> Series:
    """log of a positive unit of the valuation ring."""
    target = _target(f, target)
    a, g, h = _split_unit(f)
    if not g.is_zero():
        raise DomainError(f"partial logarithm needs order 0, got {g}")
    if a.sign() <= 0:
        raise DomainError("partial logarithm needs a positive leading coefficient")
    return Series.constant(K.log(a), f.group) + _power_sum(
        h, lambda k: RealConstant(log_series_coefficient(k)), target)


def partial_exp(g: Series, target=None) -> Series:
    """exp of a bounded series."""
    target = _target(g, target)
    if g.terms and g.ord() < g.group.zero:
        raise DomainError("partial exponential needs a bounded argument")
    c = g.standard_part()
    h = g - c
    return _power_sum(h, lambda k: RealConstant(Fraction(1, math.factorial(k))), target).scale(K.exp(c))


def extended_log(f: Series, target=None) -> AlgebraElement:
    """-embed(ord f) X + log(a) + L(h) for f = a t^ord(f) (1 + h) > 0."""
    target = _target(f, target)
    if f.sign() <= 0:
        raise DomainError(f"logarithm of non-positive {f}")
    a, g, h = _split_unit(f)
    c0 = Series.constant(K.log(a), f.group) + _power_sum(
        h, lambda k: RealConstant(log_series_coefficient(k)), target)
    offset = section_offset.get()
    if offset is not None and not g.is_zero():
        c0 = c0 - offset(g)
    c1 = Series.constant(-g.embed(), f.group)
    return AlgebraElement((c0, c1), f.group)


@dataclass(frozen=True)
class PowerSeriesFunction:
    """A user power series sum c_k x^k with rational coefficients.

    ``degree`` bounds a polynomial; otherwise evaluation is only allowed at
    infinitesimal arguments, where the series converges in the t-adic sense.
    """

    name: str
    coefficient: Callable[[int], Fraction]
    radius: Fraction | None = None
    degree: int | None = None


class _Coefficients:
    """Lazily computed Taylor coefficients at a series point."""

    def __init__(self, first, step):
        self.values = list(first)
        self.step = step

    def __call__(self, k: int):
        while len(self.values) <= k:
            self.values.append(self.step(len(self.values), self.values))
        return self.values[k]


def taylor_coefficients(fn: str, c0: Series, target=None, alpha: Fraction | None = None) -> Callable[[int], Series]:
    """Coefficients a_k with fn(c0 + h) = sum a_k h^k."""
    group = c0.group
    target = _target(c0, target)

    def const(x):
        return Series.constant(x, group)

    if fn == "exp":
        e0 = analytic_eval("exp", c0, target)
        return _Coefficients([e0], lambda k, v: v[k - 1].scale(Fraction(1, k)))
    if fn == "log":
        inv = c0.inv(target)
        l0 = analytic_eval("log", c0, target)
        if not l0.is_series():
            raise DomainError("Taylor expansion of log needs an order-zero point")
        return _Coefficients([l0.as_series(), inv], lambda k, v: v[k - 1] * inv * Fraction(-(k - 1), k))
    if fn == "pow":
        p0 = _real_power(c0, alpha, target)
        inv = c0.inv(target)
        return _Coefficients([p0], lambda k, v: v[k - 1] * inv * ((alpha - (k - 1)) / k))
    if fn == "arctan":
        q0 = c0 * c0 + 1
        q1 = c0.scale(2)
        inv_q0 = q0.inv(target)
        b = _Coefficients([inv_q0], lambda k, v: -(q1 * v[k - 1] + (v[k - 2] if k >= 2 else const(0))) * inv_q0)
        a0 = analytic_eval("arctan", c0, target)
        return _Coefficients([a0], lambda k, v: b(k - 1).scale(Fraction(1, k)))
    if fn == "arcsin":
        p0 = 1 - c0 * c0
        p = [p0, c0.scale(-2), const(-1)]
        inv_p0 = p0.inv(target)
        half = Fraction(-1, 2)

        def step(k, v):
            acc = const(0)
            for j in (1, 2):
                if j <= k:
                    acc = acc + p[j] * v[k - j] * ((half + 1) * j - k)
            return acc * inv_p0 * Fraction(1, k)

        root = p0.nth_root(2, target).inv(target)
        F = _Coefficients([root], step)
        a0 = analytic_eval("arcsin", c0, target)
        return _Coefficients([a0], lambda k, v: F(k - 1).scale(Fraction(1, k)))
    raise DomainError(f"no Taylor expansion for {fn}")


def _real_power(c0: Series, alpha: Fraction, target) -> Series:
    return c0 ** alpha if Fraction(alpha).denominator <= 64 else c0.pow_real(alpha, target)


def analytic_eval(fn, x: Series, target=None):
    """Evaluate a restricted analytic function at a series point.

    ``fn`` is one of "arctan", "arcsin", "exp", "log", "sqrt", ("pow", q) or a
    :class:`PowerSeriesFunction`.  log returns an AlgebraElement; everything
    else returns a Series.
    """
    target = _target(x, target)
    group = x.group
    if isinstance(fn, PowerSeriesFunction):
        return _eval_user_series(fn, x, target)
    if isinstance(fn, tuple) and fn[0] == "pow":
        q = Fraction(fn[1])
        if x.is_zero():
            if q <= 0:
                raise DomainError("non-positive power of zero")
            return x
        return x ** q if x.is_exact or q.denominator == 1 else _inexact_power(x, q, target)
    if fn == "log":
        return extended_log(x, target)
    if fn == "sqrt":
        if x.is_zero():
            return x
        return x.nth_root(2, target)
    if fn == "exp":
        return partial_exp(x, target)
    if x.is_zero():
        return x
    st = x.standard_part()
    if fn == "arctan":
        if st is INFINITE:
            half_pi = Series.constant(K.PI / 2, group)
            inner = analytic_eval("arctan", x.inv(target + 2 * max(-x.ord(), group.zero)), target)
            return (half_pi if x.sign() > 0 else -half_pi) - inner
        h = x - st
        if h.is_zero():
            return Series.constant(K.arctan(st), group)
        coeffs = taylor_coefficients("arctan", Series.constant(st, group), target)
        return _power_sum(h, coeffs, target)
    if fn == "arcsin":
        if st is INFINITE or abs(st) > 1:
            raise DomainError(f"arcsin argument {x} outside [-1, 1]")
        h = x - st
        if h.is_zero():
            return Series.constant(K.arcsin(st), group)
        if abs(st) == 1:
            s = 1 if st > 0 else -1
            if (x.scale(s) - 1).sign() > 0:
                raise DomainError(f"arcsin argument {x} outside [-1, 1]")
            # arcsin(x) = s (pi/2 - 2 arcsin(sqrt((1 - s x) / 2)))
            small = ((1 - x.scale(s)).scale(Fraction(1, 2))).nth_root(2, 2 * target)
            inner = analytic_eval("arcsin", small, target)
            return (Series.constant(K.PI / 2, group) - inner.scale(2)).scale(s)
        coeffs = taylor_coefficients("arcsin", Series.constant(st, group), target)
        return _power_sum(h, coeffs, target)
    raise DomainError(f"unknown analytic function {fn!r}")


def _inexact_power(x: Series, q: Fraction, target) -> Series:
    r = x.nth_root(q.denominator, target)
    return r ** q.numerator


def _eval_user_series(fn: PowerSeriesFunction, x: Series, target) -> Series:
    if fn.degree is not None:
        total = Series.zero(x.group)
        power = Series.constant(1, x.group)
        for k in range(fn.degree + 1):
            c = Fraction(fn.coefficient(k))
            if c:
                total = total + power.scale(c)
            power = power * x
        return total
    if x.terms and x.ord() <= x.group.zero:
        raise DomainError(f"{fn.name} is only evaluated at infinitesimal arguments")
    return _power_sum(x, lambda k: RealConstant(Fraction(fn.coefficient(k))), target)


def binomial(alpha: Fraction, k: int) -> RealConstant:
    return _binomial(Fraction(alpha), k)
