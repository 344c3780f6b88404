"""Measures and integrals on the fragment.

Every integral is evaluated as G(b) - G(a) for a closed-form antiderivative G,
after splitting the interval at singular points and at the breakpoints of
piecewise integrands.  Values at singular or infinite endpoints come from the
limit engine, never from arithmetic with infinity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key

from .algebra import AlgebraElement
from .asymptotic import limit_at_infinity, limit_at_minus_infinity, limit_at_point
from .constants import RealConstant
from .errors import (DegreeBoundViolation, DivergentIntegral, DomainError, NotMonotone,
                     NotRBounded, UnsupportedIntegrand)
from .integrate import antiderivative, real_roots
from .semialg import (Expr, Infinity, Interval, NEG_INF, POS_INF, Region, SetOneD, _sign_of,
                      as_sym, compare_points, normalize)
from .series import INFINITE, Series
from .symbolic import Sym

__all__ = [
    "MeasureValue", "integrate_interval", "integrate_set", "integrate_region", "measure_1d",
    "measure_region", "antiderivative_of", "check_transformation", "TransformationReport",
    "differentiate_under_integral", "DifferentiationReport", "standard_part_measure",
    "StandardPartReport", "x_degree",
]


def x_degree(value) -> int:
    """Degree in X, -1 for zero."""
    if isinstance(value, Sym):
        if value.free_vars():
            return value.lebesgue_degree()
        value = value.evaluate({})
    if value.is_zero():
        return -1
    return value.degree()


@dataclass(frozen=True)
class MeasureValue:
    """A finite value (AlgebraElement, or Sym when parameters remain) or infinity."""

    value: object = None
    infinite: bool = False

    @property
    def is_finite(self) -> bool:
        return not self.infinite

    def algebra(self) -> AlgebraElement:
        if self.infinite:
            raise ValueError("infinite measure")
        if isinstance(self.value, AlgebraElement):
            return self.value
        return self.value.evaluate({})

    def sym(self) -> Sym:
        if isinstance(self.value, Sym):
            return self.value
        return Sym.constant(self.value, self.value.group)

    def degree(self) -> int:
        return x_degree(self.value)

    def __str__(self):
        return "infinite" if self.infinite else str(self.value)

    def to_json(self):
        if self.infinite:
            return "infinite"
        if isinstance(self.value, AlgebraElement):
            return self.value.to_json()
        return str(self.value)


INFINITE_MEASURE = MeasureValue(None, True)


def _finish(total: Sym) -> MeasureValue:
    if total.free_vars():
        return MeasureValue(total)
    return MeasureValue(total.evaluate({}))


def _pick_variable(e: Expr, variable):
    if variable:
        return variable
    names = sorted(e.free_vars())
    if len(names) == 1:
        return names[0]
    return "x"


def _is_constant_point(p) -> bool:
    return isinstance(p, Infinity) or not p.free_vars()


def _midpoint(lo, hi, group) -> Sym:
    if isinstance(lo, Infinity) and isinstance(hi, Infinity):
        return Sym.zero(group)
    if isinstance(lo, Infinity):
        return hi - 1
    if isinstance(hi, Infinity):
        return lo + 1
    return (lo + hi) / 2


def _breakpoints(e: Expr, v: str) -> list:
    out = []
    for conds, value in e.pieces:
        out.extend(real_roots(value, v))
        for g in conds:
            out.extend(real_roots(g.expr, v, numerator=True))
    return [p for p in out if not p.free_vars()]


def _singular_points(f: Sym, v: str) -> list:
    out = []
    for p, _ in f.den:
        out.extend(real_roots(Sym(p), v, numerator=True))
    return [p for p in out if not p.free_vars()]


def _choose_piece(e: Expr, v: str, lo, hi) -> Sym:
    if e.is_single():
        return e.single()
    mid = _midpoint(lo, hi, e.group)
    return e.select(lambda g: _sign_of(g.substitute({v: mid})))


def _endpoint_value(F: Sym, v: str, p, side: str, singular: list) -> Sym:
    """F at p, approached from ``side``; '-' marks an upper endpoint."""
    if isinstance(p, Infinity):
        # logarithms may diverge here, so the limit is taken with log x unbounded
        lim = limit_at_infinity(F, v, "S") if p.sign > 0 else limit_at_minus_infinity(F, v, "S")
    else:
        if not any(compare_points(p, s) == 0 for s in singular) or p.free_vars():
            try:
                return F.substitute({v: p})
            except (DomainError, ZeroDivisionError):
                if p.free_vars():
                    raise
        lim = limit_at_point(F, v, p, side, "S")
    if not lim.is_finite:
        exc = DivergentIntegral(f"antiderivative {F} tends to {lim.kind} at {p}")
        upward = {"+inf": 1, "-inf": -1}.get(lim.kind, 0)
        exc.direction = upward if side == "-" else -upward
        raise exc
    return lim.value


def integrate_interval(e, a, b, variable: str | None = None) -> MeasureValue:
    """Integral of e over the interval with endpoints a <= b (infinite endpoints allowed)."""
    e = Expr.of(e)
    v = _pick_variable(e, variable)
    a = a if isinstance(a, Infinity) else as_sym(a, e.group)
    b = b if isinstance(b, Infinity) else as_sym(b, e.group)
    sign = 1
    if _is_constant_point(a) and _is_constant_point(b):
        c = compare_points(a, b)
        if c == 0:
            return MeasureValue(AlgebraElement((), e.group))
        if c > 0:
            a, b, sign = b, a, -1
        cuts = [p for p in _breakpoints(e, v)
                if compare_points(a, p) < 0 and compare_points(p, b) < 0]
        cuts = _sorted_unique(cuts)
    else:
        if not e.is_single() and any(g.expr.depends_on(v) for g in e.guards()):
            raise UnsupportedIntegrand("piecewise integrand between symbolic endpoints")
        cuts = []
    points = [a] + cuts + [b]
    total = Sym.zero(e.group)
    for lo, hi in zip(points, points[1:]):
        piece = _choose_piece(e, v, lo, hi)
        if piece.is_zero():
            continue
        F = antiderivative(piece, v)
        singular = _singular_points(piece, v)
        upper = _endpoint_value(F, v, hi, "-", singular)
        lower = _endpoint_value(F, v, lo, "+", singular)
        total = total + upper - lower
    return _finish(total * sign)


def _sorted_unique(points: list) -> list:
    points = sorted(points, key=cmp_to_key(compare_points))
    out = []
    for p in points:
        if not out or compare_points(out[-1], p) != 0:
            out.append(p)
    return out


def antiderivative_of(e, variable: str | None = None) -> Expr:
    """Antiderivative of each piece of e."""
    e = Expr.of(e)
    v = _pick_variable(e, variable)
    return e.map(lambda piece: antiderivative(piece, v))


def integrate_set(e, s: SetOneD, variable: str | None = None, *, allow_infinite=False) -> MeasureValue:
    """Sum of the integrals over the components of a one-dimensional set."""
    e = Expr.of(e)
    total = Sym.zero(e.group)
    for comp in normalize(s).components:
        if comp.is_point():
            continue
        try:
            part = integrate_interval(e, comp.lo, comp.hi, variable)
        except DivergentIntegral as exc:
            if allow_infinite and getattr(exc, "direction", 0) > 0:
                return INFINITE_MEASURE
            raise
        total = total + part.sym()
    return _finish(total)


def measure_1d(s: SetOneD) -> MeasureValue:
    """Length of a one-dimensional set."""
    total = Sym.zero()
    for comp in normalize(s).components:
        if not comp.is_bounded():
            return INFINITE_MEASURE
        total = total + (comp.hi - comp.lo)
    return _finish(total)


def _check_degree(result: MeasureValue, n: int, strict: bool) -> MeasureValue:
    if result.infinite:
        return result
    d = result.degree()
    if d > n or (strict and d >= n):
        bound = f"< {n}" if strict else f"<= {n}"
        raise DegreeBoundViolation(f"value {result} has degree {d}, expected {bound}")
    return result


def _integrate_layer(f: Expr, v: str, lo, hi, layer: int) -> Expr:
    groups: dict = {}
    for conds, value in f.pieces:
        outer = tuple(g for g in conds if not g.expr.depends_on(v))
        inner = tuple(g for g in conds if g.expr.depends_on(v))
        groups.setdefault(outer, []).append((inner, value))
    pieces = []
    for outer, inner_pieces in groups.items():
        try:
            part = integrate_interval(Expr(inner_pieces, f.group), lo, hi, v)
        except UnsupportedIntegrand as exc:
            raise UnsupportedIntegrand(f"layer {layer} ({v}): {exc}") from exc
        pieces.append((outer, part.sym()))
    return Expr(pieces, f.group)


def integrate_region(e, region: Region, *, measure: bool = False) -> MeasureValue:
    """Iterated integral over a cylindrical region, innermost variable first."""
    f = Expr.of(e)
    n = region.dimension
    for k in range(n - 1, 0, -1):
        lo, hi = region.bounds[k - 1]
        f = _integrate_layer(f, region.variables[k], lo, hi, k)
    try:
        result = integrate_set(f, region.base, region.variables[0], allow_infinite=measure)
    except UnsupportedIntegrand as exc:
        raise UnsupportedIntegrand(f"layer 0 ({region.variables[0]}): {exc}") from exc
    return _check_degree(result, n, strict=measure)


def measure_region(region: Region) -> MeasureValue:
    if region.dimension == 1:
        return _check_degree(measure_1d(region.base), 1, strict=True)
    return integrate_region(1, region, measure=True)


# --- checkers ------------------------------------------------------------------------


@dataclass(frozen=True)
class TransformationReport:
    image: SetOneD
    direct: MeasureValue
    transformed: MeasureValue
    agree: bool


def _image_point(phi: Sym, u: str, p, side: str):
    if isinstance(p, Infinity):
        lim = limit_at_infinity(phi, u) if p.sign > 0 else limit_at_minus_infinity(phi, u)
    else:
        try:
            return phi.substitute({u: p})
        except (DomainError, ZeroDivisionError):
            lim = limit_at_point(phi, u, p, side)
    if lim.is_finite:
        return lim.value
    if lim.kind in ("+inf", "-inf"):
        return POS_INF if lim.kind == "+inf" else NEG_INF
    raise NotMonotone(f"{phi} has no limit at {p}")


def _monotone_sign(dphi: Sym, u: str, comp: Interval) -> int:
    for r in real_roots(dphi, u, numerator=True):
        if r.free_vars():
            continue
        if compare_points(comp.lo, r) < 0 and compare_points(r, comp.hi) < 0:
            raise NotMonotone(f"derivative vanishes at {r} inside {comp}")
    s = _sign_of(dphi.substitute({u: _midpoint(comp.lo, comp.hi, dphi.group)}))
    if s == 0:
        raise NotMonotone("derivative vanishes at the sample point")
    return s


def check_transformation(phi, f, U: SetOneD, u: str = "u", x: str = "x") -> TransformationReport:
    """Compare the integral of f over phi(U) with that of f(phi) |phi'| over U."""
    phi = as_sym(phi)
    f = Expr.of(f)
    dphi = phi.derivative(u)
    image = []
    transformed = Sym.zero(phi.group)
    for comp in normalize(U).components:
        if comp.is_point():
            continue
        s = _monotone_sign(dphi, u, comp)
        lo = _image_point(phi, u, comp.lo, "+")
        hi = _image_point(phi, u, comp.hi, "-")
        if s < 0:
            lo, hi = hi, lo
        image.append(Interval(lo, hi, True, True))
        pulled = f.substitute({x: phi}) * (dphi * s)
        transformed = transformed + integrate_interval(pulled, comp.lo, comp.hi, u).sym()
    V = SetOneD(tuple(image))
    direct = integrate_set(f, V, x)
    transformed_value = _finish(transformed)
    agree = direct.sym().equal_up_to_precision(transformed_value.sym())
    return TransformationReport(V, direct, transformed_value, agree)


@dataclass(frozen=True)
class DifferentiationReport:
    derivative_of_integral: Sym
    integral_of_derivative: Sym
    agree: bool
    samples: tuple = field(default_factory=tuple)


def differentiate_under_integral(e, s: str, x: str, a, b, samples=()) -> DifferentiationReport:
    """Compare d/ds of the x-integral of e with the x-integral of de/ds."""
    e = Expr.of(e)
    integral = integrate_interval(e, a, b, x).sym()
    lhs = integral.derivative(s)
    rhs = integrate_interval(e.derivative(s), a, b, x).sym()
    agree = lhs.equals(rhs)
    checked = []
    for point in samples:
        env = {s: point if isinstance(point, Series) else Series.constant(point)}
        left, right = lhs.evaluate(env), rhs.evaluate(env)
        checked.append((point, left, right, left.equal_up_to(right)))
        agree = agree and checked[-1][3]
    return DifferentiationReport(lhs, rhs, agree, tuple(checked))


# --- standard part --------------------------------------------------------------------


@dataclass(frozen=True)
class StandardPartReport:
    standard_part_of_measure: object
    measure_of_standard_part: object
    r_bounded: bool
    agree: bool


def _st(p):
    """Standard part of an endpoint: a RealConstant or +-INFINITE as a signed marker."""
    if isinstance(p, Infinity):
        return p
    value = p.evaluate({}).as_series()
    st = value.standard_part()
    if st is INFINITE:
        return POS_INF if value.sign() > 0 else NEG_INF
    return st


def _sides(A) -> list:
    if isinstance(A, SetOneD):
        comps = [c for c in normalize(A).components]
        return [comps]
    if not isinstance(A, Region) or not A.is_box():
        raise UnsupportedIntegrand("standard parts are computed for interval unions and boxes")
    sides = [[c for c in normalize(A.base).components]]
    for lo, hi in A.bounds:
        sides.append([Interval(lo, hi)])
    return sides


def standard_part_measure(A, strict: bool = False) -> StandardPartReport:
    """st of the measure of A next to the real measure of the standard part of A."""
    sides = _sides(A)
    bounded = all(
        all(not isinstance(p, Infinity) and p.evaluate({}).as_series().is_bounded()
            for c in comps for p in (c.lo, c.hi))
        for comps in sides)
    if strict and not bounded:
        raise NotRBounded(f"{A} is not contained in a box with real bounds")
    measure = measure_1d(A) if isinstance(A, SetOneD) else measure_region(A)
    if measure.infinite:
        st_measure = INFINITE
    else:
        value = measure.algebra()
        st_measure = value.standard_part() if x_degree(value) <= 0 else INFINITE
    # real measure of the image: product over sides of the length of the union of st-intervals
    real = RealConstant(1)
    for comps in sides:
        pieces = sorted(((_st(c.lo), _st(c.hi)) for c in comps), key=lambda lh: _order_key(lh[0]))
        length = _union_length(pieces)
        if length is INFINITE:
            real = INFINITE if real is INFINITE or real != 0 else real
            continue
        if length == 0:
            real = RealConstant(0)
            break
        real = INFINITE if real is INFINITE else real * length
    agree = (st_measure is INFINITE and real is INFINITE) or (
        st_measure is not INFINITE and real is not INFINITE and st_measure == real)
    return StandardPartReport(st_measure, real, bounded, agree)


def _order_key(p):
    if isinstance(p, Infinity):
        return float(p.sign) * float("inf")
    return float(p)


def _union_length(pieces):
    total = RealConstant(0)
    cur = None
    for lo, hi in pieces:
        if isinstance(lo, Infinity) or isinstance(hi, Infinity):
            if not (isinstance(lo, Infinity) and isinstance(hi, Infinity) and lo.sign == hi.sign):
                return INFINITE
            continue
        if cur is None:
            cur = [lo, hi]
        elif lo <= cur[1]:
            if hi > cur[1]:
                cur[1] = hi
        else:
            total = total + (cur[1] - cur[0])
            cur = [lo, hi]
    if cur is not None:
        total = total + (cur[1] - cur[0])
    return total

