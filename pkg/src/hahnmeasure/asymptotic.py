"""Expansions at infinity and the limit engine.

An expansion is a finite sum of terms c * x^q * (log x)^n with coefficients
in the Lebesgue algebra, plus a floor: every term with exponent q above the
floor is present, nothing is claimed below it.  Limits are read off the
dominant exponent pair (q, n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import constants as K
from .algebra import AlgebraElement
from .errors import DomainError, PrecisionExhausted, UnsupportedIntegrand
from .integrate import sym_sign
from .logexp import binomial, log_series_coefficient
from .symbolic import (LEBESGUE, Arcsin, Arctan, LogAbs, Poly, Root, Sym, Var, sym_arcsin,
                       sym_arctan, sym_log, sym_root)

__all__ = ["Expansion", "Limit", "expand", "limit_at_infinity", "limit_at_point",
           "limit_at_minus_infinity", "verdict", "simple_terms", "coefficient_sign"]

_DEPTHS = (6, 12, 24)


def _lift(c, group) -> Sym:
    return c if isinstance(c, Sym) else Sym.constant(c, group)


def coefficient_sign(c: Sym) -> int:
    """Sign of an x-free coefficient; parameters need declared signs."""
    if c.is_zero():
        return 0
    if not c.free_vars():
        return int(c.evaluate({}).sign())
    s = sym_sign(c)
    if s == 0:
        raise UnsupportedIntegrand(f"sign of {c} is unknown; declare parameter signs")
    return s


class Expansion:
    """sum c_(q,n) x^q (log x)^n, known for every q > floor (floor None: exact).

    Coefficients are symbolic expressions free of x; other variables act as
    parameters.
    """

    __slots__ = ("terms", "floor", "group")

    def __init__(self, terms: dict, floor, group):
        clean = {}
        for k, c in terms.items():
            if floor is not None and k[0] <= floor:
                continue
            c = _lift(c, group)
            if c.is_zero():
                continue
            clean[k] = c
        self.terms = clean
        self.floor = None if floor is None else Fraction(floor)
        self.group = group

    @classmethod
    def constant(cls, c, group) -> "Expansion":
        return cls({(Fraction(0), 0): c}, None, group)

    @classmethod
    def monomial(cls, q, n, c, group) -> "Expansion":
        return cls({(Fraction(q), n): c}, None, group)

    def is_exact_zero(self) -> bool:
        return not self.terms and self.floor is None

    def top(self):
        """Largest exponent q that may carry a term."""
        if self.terms:
            return max(k[0] for k in self.terms)
        return self.floor

    def truncate(self, cut) -> "Expansion":
        cut = Fraction(cut)
        floor = cut if self.floor is None else max(self.floor, cut)
        return Expansion(self.terms, floor, self.group)

    def __add__(self, other):
        if not isinstance(other, Expansion):
            other = Expansion.constant(other, self.group)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        floors = [f for f in (self.floor, other.floor) if f is not None]
        return Expansion(terms, max(floors) if floors else None, self.group)

    __radd__ = __add__

    def __neg__(self):
        return Expansion({k: -c for k, c in self.terms.items()}, self.floor, self.group)

    def __sub__(self, other):
        if not isinstance(other, Expansion):
            other = Expansion.constant(other, self.group)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Expansion):
            c = _lift(other, self.group)
            return Expansion({k: v * c for k, v in self.terms.items()}, self.floor, self.group)
        if self.is_exact_zero() or other.is_exact_zero():
            return Expansion({}, None, self.group)
        terms: dict = {}
        for (q1, n1), c1 in self.terms.items():
            for (q2, n2), c2 in other.terms.items():
                k = (q1 + q2, n1 + n2)
                terms[k] = terms[k] + c1 * c2 if k in terms else c1 * c2
        floors = []
        if self.floor is not None:
            floors.append(self.floor + other.top())
        if other.floor is not None:
            floors.append(other.floor + self.top())
        return Expansion(terms, max(floors) if floors else None, self.group)

    __rmul__ = __mul__

    def shift(self, dq, dn) -> "Expansion":
        return Expansion({(q + dq, n + dn): c for (q, n), c in self.terms.items()},
                         None if self.floor is None else self.floor + dq, self.group)

    def lead(self):
        """(q, n, coefficient) of the dominant term."""
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            if coefficient_sign(c) != 0:
                return k[0], k[1], c
        if self.floor is None:
            raise ZeroDivisionError("the expansion is identically zero")
        raise PrecisionExhausted("all known terms of the expansion cancel")

    def __str__(self):
        parts = []
        for (q, n), c in sorted(self.terms.items(), reverse=True):
            mono = "" if q == 0 else f"*x^({q})"
            mono += "" if n == 0 else f"*log(x)^{n}"
            parts.append(f"({c}){mono}")
        if self.floor is not None:
            parts.append(f"O(x^({self.floor}))")
        return " + ".join(parts) if parts else "0"


# --- composition with power series --------------------------------------------------------


def _compose(coeff, eps: Expansion, cut: Fraction) -> Expansion:
    """sum_k coeff(k) eps^k for an eps with every exponent q < 0."""
    group = eps.group
    result = Expansion.constant(coeff(0), group)
    if eps.is_exact_zero():
        return result
    top = eps.top()
    if top is None or top >= 0:
        raise UnsupportedIntegrand("logarithmically small corrections are outside the expansion engine")
    power = Expansion.constant(1, group)
    k = 0
    while True:
        k += 1
        if k * top <= cut:
            break
        power = (power * eps).truncate(cut)
        a = coeff(k)
        if not _lift(a, group).is_zero():
            result = result + power * a
    return result.truncate(cut)


def _unit_part(E: Expansion, q, n, c: Sym) -> Expansion:
    """E / (c x^q (log x)^n) - 1."""
    return E.shift(-q, -n) * c.inverse() - 1


def inverse(E: Expansion, depth) -> Expansion:
    q, n, c = E.lead()
    eps = _unit_part(E, q, n, c)
    series = _compose(lambda k: (-1) ** k, eps, Fraction(-depth))
    return series.shift(-q, -n) * c.inverse()


def power(E: Expansion, alpha: Fraction, depth) -> Expansion:
    alpha = Fraction(alpha)
    group = E.group
    if alpha.denominator == 1 and alpha >= 0:
        out = Expansion.constant(1, group)
        for _ in range(int(alpha)):
            out = out * E
        return out
    if E.is_exact_zero():
        if alpha > 0:
            return E
        raise DomainError("non-positive power of zero")
    if alpha.denominator == 1:
        return power(inverse(E, depth), -alpha, depth)
    q, n, c = E.lead()
    if (n * alpha).denominator != 1:
        raise UnsupportedIntegrand("fractional power of log x")
    if coefficient_sign(c) < 0:
        if alpha.denominator % 2 == 0:
            raise DomainError("even root of an ultimately negative function")
        flip = -1 if alpha.numerator % 2 else 1
        return power(-E, alpha, depth) * flip
    eps = _unit_part(E, q, n, c)
    head = sym_root(c, alpha.denominator) ** alpha.numerator
    series = _compose(lambda k: binomial(alpha, k), eps, Fraction(-depth))
    return series.shift(q * alpha, int(n * alpha)) * head


def log_abs(E: Expansion, depth) -> Expansion:
    group = E.group
    q, n, c = E.lead()
    if n != 0:
        raise UnsupportedIntegrand("log of a function with a log x factor")
    if coefficient_sign(c) < 0:
        return log_abs(-E, depth)
    eps = _unit_part(E, q, n, c)
    out = Expansion.constant(sym_log(c), group)
    if q:
        out = out + Expansion.monomial(0, 1, q, group)
    return out + _compose(lambda k: log_series_coefficient(k), eps, Fraction(-depth))


def _arctan_at_zero(k):
    return Fraction((-1) ** ((k - 1) // 2), k) if k % 2 else Fraction(0)


def _arcsin_at_zero(k):
    # c_(2m+1) = binom(2m, m) / (4^m (2m+1))
    if k % 2 == 0:
        return Fraction(0)
    m = (k - 1) // 2
    return Fraction(math.comb(2 * m, m), 4 ** m * (2 * m + 1))


class _Lazy:
    def __init__(self, first, step):
        self.values = list(first)
        self.step = step

    def __call__(self, k):
        while len(self.values) <= k:
            self.values.append(self.step(len(self.values), self.values))
        return self.values[k]


def _taylor(kind: str, c0: Sym):
    """Taylor coefficients of arctan or arcsin at a symbolic point."""
    group = c0.group
    zero = Sym.zero(group)
    if kind == "arctan":
        q0 = c0 * c0 + 1
        q1 = c0 * 2
        inv = q0.inverse()
        # 1 / (1 + (c0 + h)^2) = sum b_k h^k
        b = _Lazy([inv], lambda k, v: -(q1 * v[k - 1] + (v[k - 2] if k >= 2 else zero)) * inv)
        return _Lazy([sym_arctan(c0)], lambda k, v: b(k - 1) / k)
    p0 = 1 - c0 * c0
    p = [p0, c0 * -2, Sym.constant(-1, group)]
    inv = p0.inverse()

    def step(k, v):
        # (1 - (c0 + h)^2)^(-1/2) via the power recurrence for P^(-1/2)
        acc = zero
        for j in (1, 2):
            if j <= k:
                acc = acc + p[j] * v[k - j] * (Fraction(1, 2) * j - k)
        return acc * inv / k

    F = _Lazy([sym_root(p0, 2).inverse()], step)
    return _Lazy([sym_arcsin(c0)], lambda k, v: F(k - 1) / k)


def arc(kind: str, E: Expansion, depth) -> Expansion:
    group = E.group
    if E.is_exact_zero():
        return E
    q, n, c = E.lead()
    if (q, n) < (0, 0):
        return _compose(_arctan_at_zero if kind == "arctan" else _arcsin_at_zero, E, Fraction(-depth))
    if (q, n) > (0, 0):
        if kind == "arcsin":
            raise DomainError("arcsin of an unbounded function")
        half_pi = Sym.constant(K.PI / 2, group)
        head = half_pi if coefficient_sign(c) > 0 else -half_pi
        return _compose(_arctan_at_zero, inverse(E, depth), Fraction(-depth)) * -1 + head
    eps = E - Expansion.constant(c, group)
    if not eps.is_exact_zero() and eps.top() is not None and eps.top() >= 0:
        raise UnsupportedIntegrand("logarithmically small corrections are outside the expansion engine")
    if kind == "arcsin":
        if (c - 1).is_zero() or (c + 1).is_zero():
            if eps.is_exact_zero():
                return Expansion.constant(sym_arcsin(c), group)
            # arcsin(c (1 - u)) = c (pi/2 - 2 arcsin(sqrt(u/2))) for c = +-1 and small u >= 0
            u = eps * (-c)
            if coefficient_sign(u.lead()[2]) < 0:
                raise DomainError("arcsin argument leaves [-1, 1]")
            inner = arc("arcsin", power(u * Fraction(1, 2), Fraction(1, 2), depth), depth)
            return (Expansion.constant(Sym.constant(K.PI / 2, group), group) - inner * 2) * c
    return _compose(_taylor(kind, c), eps, Fraction(-depth))


# --- expanding symbolic expressions ----------------------------------------------------


class _Expander:
    def __init__(self, variable: str, group, depth):
        self.variable = variable
        self.group = group
        self.depth = depth
        self.cache: dict = {}

    def symbol(self, s):
        key = s.key
        if key in self.cache:
            return self.cache[key]
        g, d = self.group, self.depth
        if isinstance(s, Var):
            if s.name == self.variable:
                out = Expansion.monomial(1, 0, 1, g)
            else:
                out = Expansion.constant(Sym.of_symbol(s, g), g)
        elif s == LEBESGUE:
            out = Expansion.constant(Sym.of_symbol(LEBESGUE, g), g)
        elif isinstance(s, Root):
            out = power(self.poly(s.base), Fraction(1, s.index), d)
        elif isinstance(s, LogAbs):
            out = log_abs(self.poly(s.arg), d)
        elif isinstance(s, Arctan):
            out = arc("arctan", self.sym(s.arg), d)
        elif isinstance(s, Arcsin):
            out = arc("arcsin", self.sym(s.arg), d)
        else:
            raise UnsupportedIntegrand(f"no expansion rule for {s}")
        self.cache[key] = out
        return out

    def poly(self, p: Poly) -> Expansion:
        total = Expansion({}, None, self.group)
        for mono, c in p.terms.items():
            term = Expansion.constant(Sym.constant(c, self.group), self.group)
            for s, e in mono:
                base = self.symbol(s)
                if e >= 0:
                    for _ in range(e):
                        term = term * base
                else:
                    inv = inverse(base, self.depth)
                    for _ in range(-e):
                        term = term * inv
            total = total + term
        return total

    def sym(self, f: Sym) -> Expansion:
        out = self.poly(f.num)
        for p, m in f.den:
            inv = inverse(self.poly(p), self.depth)
            for _ in range(m):
                out = out * inv
        return out


def expand(f: Sym, variable: str, depth: int = _DEPTHS[0]) -> Expansion:
    return _Expander(variable, f.group, depth).sym(f)


# --- verdicts -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Limit:
    """Outcome of a limit: 'finite' (with value), '+inf', '-inf' or 'no-limit'."""

    kind: str
    value: Sym | None = None

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def algebra(self) -> AlgebraElement:
        """The finite value as an element of the Lebesgue algebra (parameter-free only)."""
        if not self.is_finite:
            raise ValueError(f"limit is {self.kind}")
        return self.value.evaluate({})

    def __str__(self):
        if self.kind != "finite":
            return self.kind
        return str(self.algebra()) if not self.value.free_vars() else str(self.value)


def verdict(E: Expansion, mode: str = "P") -> Limit:
    """Limit read off an expansion.

    Mode "P" reports limits inside the Lebesgue algebra: x^q (log x)^n has a
    limit there exactly when q < 0 or q = n = 0.  Mode "S" reports the limit
    in the ambient logarithmic-exponential field, where log x tends to infinity.
    """
    group = E.group
    zero = Limit("finite", Sym.zero(group))
    if E.is_exact_zero():
        return zero
    q, n, c = E.lead()
    infinite = Limit("+inf" if coefficient_sign(c) > 0 else "-inf")
    if q > 0:
        return infinite
    if q < 0:
        return zero
    if mode == "S":
        if n > 0:
            return infinite
        if n < 0:
            return zero
        return Limit("finite", c)
    if n != 0:
        return Limit("no-limit")
    if any(k[0] == 0 and k[1] < 0 for k in E.terms):
        return Limit("no-limit")
    return Limit("finite", c)


def limit_at_infinity(f: Sym, variable: str, mode: str = "P") -> Limit:
    last = None
    for depth in _DEPTHS:
        try:
            return verdict(expand(f, variable, depth), mode)
        except PrecisionExhausted as exc:
            last = exc
    raise last


def limit_at_point(f: Sym, variable: str, point, side: str = "+", mode: str = "P") -> Limit:
    """One-sided limit as the variable tends to ``point`` from ``side`` ('+' or '-')."""
    group = f.group
    y = "_y"
    point = point if isinstance(point, Sym) else Sym.constant(point, group)
    step = Sym.of_symbol(Var(y), group).inverse()
    image = point + step if side == "+" else point - step
    return limit_at_infinity(f.substitute({variable: image}), y, mode)


def limit_at_minus_infinity(f: Sym, variable: str, mode: str = "P") -> Limit:
    y = "_y"
    image = -Sym.of_symbol(Var(y), f.group)
    return limit_at_infinity(f.substitute({variable: image}), y, mode)


def simple_terms(f: Sym, variable: str, depth: int = _DEPTHS[0]):
    """Terms (q, n, j, A) of f ~ sum A x^q (log x)^n X^j, dominant first, and the floor.

    Coefficients must be free of parameters.
    """
    E = expand(f, variable, depth)
    out = []
    for (q, n), c in sorted(E.terms.items(), reverse=True):
        value = c.evaluate({})
        for j in range(len(value.coeffs) - 1, -1, -1):
            a = value.coeffs[j]
            if not a.is_zero():
                out.append((q, n, j, a))
    return out, E.floor
