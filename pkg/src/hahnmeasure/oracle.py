"""Independent numerical check of symbolic results.

A result is instantiated at t = tau (so X = log(1/tau)) and compared with
adaptive quadrature of the real problem obtained by the same substitution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy import integrate as _quad

from .algebra import AlgebraElement
from .calculus import MeasureValue
from .errors import OracleUnavailable
from .integrate import real_roots
from .semialg import Expr, Infinity, Region, SetOneD, as_sym
from .series import Series
from .symbolic import Sym

__all__ = ["OracleReport", "instantiate", "quad_interval", "quad_set", "quad_region",
           "check_integral", "DEFAULT_TAU"]

DEFAULT_TAU = Fraction(1, 1000)


@dataclass(frozen=True)
class OracleReport:
    tau: Fraction
    symbolic: float
    numeric: float

    @property
    def abs_error(self) -> float:
        return abs(self.symbolic - self.numeric)

    @property
    def rel_error(self) -> float:
        scale = max(abs(self.symbolic), abs(self.numeric))
        return self.abs_error / scale if scale else self.abs_error

    def within(self, tol: float) -> bool:
        return self.rel_error < tol

    def to_json(self) -> dict:
        return {"tau": str(self.tau), "symbolic": self.symbolic, "numeric": self.numeric,
                "rel_error": self.rel_error}

    def __str__(self):
        return (f"tau={self.tau} symbolic={self.symbolic:.12g} numeric={self.numeric:.12g} "
                f"rel_error={self.rel_error:.3e}")


def instantiate(value, tau=DEFAULT_TAU, env: dict | None = None) -> float:
    tau = float(tau)
    if isinstance(value, MeasureValue):
        if value.infinite:
            return math.inf
        value = value.value
    if isinstance(value, (Series, AlgebraElement)):
        return value.instantiate(tau)
    if isinstance(value, Sym):
        return value.to_float(env or {}, tau)
    return float(value)


def _point(p, tau: float, env: dict) -> float:
    if isinstance(p, Infinity):
        return math.inf * p.sign
    return p.to_float(env, tau)


def _function(e: Expr, v: str, tau: float, env: dict):
    if e.is_single():
        f = e.single()
        return lambda x: f.to_float({**env, v: x}, tau)

    def value(x):
        point = {**env, v: x}
        for conds, piece in e.pieces:
            if all(g.decide(_float_sign(g.expr.to_float(point, tau))) for g in conds):
                return piece.to_float(point, tau)
        raise OracleUnavailable(f"no branch applies at {v} = {x}")
    return value


def _adaptive(f, lo: float, hi: float, epsrel: float, limit: int) -> float:
    """scipy quad, on a log scale when [lo, hi] is positive and spans a decade or more."""
    if 0 < lo < hi < math.inf and hi > 10 * lo:
        a, b = math.log(lo), math.log(hi)
        return _quad.quad(lambda u: f(math.exp(u)) * math.exp(u), a, b,
                          limit=limit, epsabs=0.0, epsrel=epsrel)[0]
    return _quad.quad(f, lo, hi, limit=limit, epsabs=0.0, epsrel=epsrel)[0]


def _float_sign(x: float) -> int:
    return (x > 0) - (x < 0)


def _cuts(e: Expr, v: str, tau: float, env: dict) -> list:
    out = set()
    for conds, piece in e.pieces:
        roots = list(real_roots(piece, v))
        for g in conds:
            roots.extend(real_roots(g.expr, v, numerator=True))
        for r in roots:
            if r.free_vars() - set(env):
                continue
            try:
                out.add(r.to_float(env, tau))
            except (ValueError, ZeroDivisionError):
                continue
    return sorted(out)


def quad_interval(e, a, b, variable: str = "x", tau=DEFAULT_TAU, env: dict | None = None) -> float:
    """Adaptive quadrature of the instantiated integrand over [a, b]."""
    e = Expr.of(e)
    tau_f = float(tau)
    env = env or {}
    lo = _point(a if isinstance(a, Infinity) else as_sym(a, e.group), tau_f, env)
    hi = _point(b if isinstance(b, Infinity) else as_sym(b, e.group), tau_f, env)
    if lo == hi:
        return 0.0
    f = _function(e, variable, tau_f, env)
    points = [lo] + [c for c in _cuts(e, variable, tau_f, env) if lo < c < hi] + [hi]
    total = 0.0
    for p, q in zip(points, points[1:]):
        total += _adaptive(f, p, q, 1e-12, 500)
    return total


def quad_set(e, s: SetOneD, variable: str = "x", tau=DEFAULT_TAU) -> float:
    return sum(quad_interval(e, c.lo, c.hi, variable, tau) for c in s.components)


def quad_region(e, region: Region, tau=DEFAULT_TAU) -> float:
    """Iterated quadrature, outermost variable first."""
    e = Expr.of(e)
    names = region.variables

    def layer(k: int, env: dict) -> float:
        if k == len(names) - 1:
            if k == 0:
                return quad_set(e, region.base, names[0], tau)
            lo, hi = region.bounds[k - 1]
            return quad_interval(e, lo, hi, names[k], tau, env)
        def g(x):
            return layer(k + 1, {**env, names[k]: x})
        if k == 0:
            return sum(_adaptive(g, _point(c.lo, float(tau), env), _point(c.hi, float(tau), env), 1e-10, 200)
                       for c in region.base.components)
        lo, hi = region.bounds[k - 1]
        return _adaptive(g, _point(lo, float(tau), env), _point(hi, float(tau), env), 1e-10, 200)

    return layer(0, {})


def check_integral(e, domain, value, tau=DEFAULT_TAU, variable: str | None = None) -> OracleReport:
    """Compare a symbolic integral of e over domain (SetOneD or Region) with quadrature."""
    symbolic = instantiate(value, tau)
    if not math.isfinite(symbolic):
        raise OracleUnavailable("the symbolic value is infinite")
    if isinstance(domain, Region):
        numeric = quad_region(e, domain, tau)
    elif isinstance(domain, SetOneD):
        e = Expr.of(e)
        names = sorted(e.free_vars())
        numeric = quad_set(e, domain, variable or (names[0] if names else "x"), tau)
    else:
        raise OracleUnavailable(f"no real instantiation for {domain!r}")
    return OracleReport(Fraction(tau), symbolic, numeric)
