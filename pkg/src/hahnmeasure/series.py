"""Generalized power series with finitely many known terms.

A series stores its known terms in increasing exponent order together with
a precision: ``None`` for an exact (finite) series, or an exponent ``w``
meaning every term below ``w`` is present and nothing is known above it.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from typing import Callable, Iterable

from .config import working_precision
from .constants import Ordering, RealConstant, as_constant
from .errors import DivisionByZero, DomainError, NegativeRadicand, PrecisionExhausted
from .exponents import QQ, Exponent, ExponentGroup

__all__ = ["Series", "t", "INFINITE", "Sign"]


class _Infinite:
    def __repr__(self):
        return "Infinite"

    __str__ = __repr__


INFINITE = _Infinite()


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    def __str__(self):
        return self.name.capitalize()


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a if a <= b else b


class Series:
    __slots__ = ("group", "terms", "prec", "_hash")

    def __init__(self, terms: Iterable = (), prec=None, group: ExponentGroup = QQ):
        merged: dict[Exponent, RealConstant] = {}
        for e, c in (terms.items() if isinstance(terms, dict) else terms):
            e = group.coerce(e)
            c = as_constant(c)
            merged[e] = merged.get(e, RealConstant(0)) + c
        prec = None if prec is None else group.coerce(prec)
        items = [(e, c) for e, c in merged.items() if not c.is_zero() and (prec is None or e < prec)]
        items.sort(key=lambda ec: group.sort_key()(ec[0]))
        self.group = group
        self.terms = tuple(items)
        self.prec = prec
        self._hash = None

    @classmethod
    def _make(cls, group, terms: tuple, prec) -> "Series":
        self = object.__new__(cls)
        self.group, self.terms, self.prec, self._hash = group, terms, prec, None
        return self

    @classmethod
    def _from_dict(cls, group, merged: dict, prec) -> "Series":
        key = group.sort_key()
        items = [(e, c) for e, c in merged.items() if not c.is_zero() and (prec is None or e < prec)]
        items.sort(key=lambda ec: key(ec[0]))
        return cls._make(group, tuple(items), prec)

    @classmethod
    def constant(cls, c, group: ExponentGroup = QQ) -> "Series":
        c = as_constant(c)
        return cls._make(group, () if c.is_zero() else ((group.zero, c),), None)

    @classmethod
    def monomial(cls, c, e, group: ExponentGroup = QQ) -> "Series":
        c = as_constant(c)
        return cls._make(group, () if c.is_zero() else ((group.coerce(e), c),), None)

    @classmethod
    def zero(cls, group: ExponentGroup = QQ, prec=None) -> "Series":
        return cls._make(group, (), None if prec is None else group.coerce(prec))

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            if other.group is not self.group and other.group != self.group:
                raise ValueError("series over different exponent groups")
            return other
        if isinstance(other, (int, Fraction, RealConstant)):
            return Series.constant(other, self.group)
        return NotImplemented

    def default_target(self) -> Exponent:
        return self.group.coerce(working_precision())

    # --- inspection ---------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """Exactly zero (no terms, exact)."""
        return not self.terms and self.prec is None

    def known_zero(self) -> bool:
        return not self.terms

    def ord(self) -> Exponent:
        if self.terms:
            return self.terms[0][0]
        if self.prec is None:
            raise DomainError("the zero series has no order")
        raise PrecisionExhausted(f"series is zero up to t^{self.prec}")

    valuation = ord

    def lead(self) -> tuple[Exponent, RealConstant]:
        self.ord()
        return self.terms[0]

    @property
    def lead_coeff(self) -> RealConstant:
        return self.lead()[1]

    def max_exponent(self) -> Exponent:
        if not self.terms:
            raise DomainError("no terms")
        return self.terms[-1][0]

    def coefficient(self, e) -> RealConstant:
        e = self.group.coerce(e)
        for ee, c in self.terms:
            if ee == e:
                return c
        if self.prec is not None and e >= self.prec:
            raise PrecisionExhausted(f"coefficient of t^{e} is beyond the precision")
        return RealConstant(0)

    def is_monomial(self) -> bool:
        return self.prec is None and len(self.terms) == 1

    def is_constant(self) -> bool:
        """Exactly a real constant."""
        return self.prec is None and (not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero()))

    def constant_value(self) -> RealConstant:
        if not self.is_constant():
            raise DomainError(f"{self} is not a real constant")
        return self.terms[0][1] if self.terms else RealConstant(0)

    def truncate(self, bound) -> "Series":
        """Forget every term at or above ``bound``."""
        bound = self.group.coerce(bound)
        if self.prec is not None and self.prec <= bound:
            return self
        terms = tuple(ec for ec in self.terms if ec[0] < bound)
        return Series._make(self.group, terms, bound)

    def with_precision(self, prec) -> "Series":
        if prec is None:
            return self
        return self.truncate(prec)

    def bounded_part(self) -> "Series":
        """Terms with exponent >= 0 (the part in the valuation ring)."""
        zero = self.group.zero
        return Series._make(self.group, tuple(ec for ec in self.terms if ec[0] >= zero), self.prec)

    def principal_part(self) -> "Series":
        """Terms with negative exponent; raises when they are not all known."""
        zero = self.group.zero
        if self.prec is not None and self.prec < zero:
            raise PrecisionExhausted("negative-exponent part is not fully known")
        return Series._make(self.group, tuple(ec for ec in self.terms if ec[0] < zero), None)

    # --- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms and other.prec is None:
            return self
        if not self.terms and self.prec is None:
            return other
        merged = dict(self.terms)
        zero = RealConstant(0)
        for e, c in other.terms:
            merged[e] = merged.get(e, zero) + c
        return Series._from_dict(self.group, merged, _min_prec(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return Series._make(self.group, tuple((e, -c) for e, c in self.terms), self.prec)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "Series":
        c = as_constant(c)
        if c.is_zero():
            return Series.zero(self.group)
        return Series._make(self.group, tuple((e, a * c) for e, a in self.terms), self.prec)

    def shift(self, e) -> "Series":
        """Multiply by t^e."""
        e = self.group.coerce(e)
        prec = None if self.prec is None else self.prec + e
        return Series._make(self.group, tuple((x + e, c) for x, c in self.terms), prec)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_constant():
            return self.scale(other.constant_value())
        if self.is_constant():
            return other.scale(self.constant_value())
        prec = None
        if self.prec is not None or other.prec is not None:
            cands = []
            of = self.terms[0][0] if self.terms else None
            og = other.terms[0][0] if other.terms else None
            if self.prec is not None and og is not None:
                cands.append(self.prec + og)
            if other.prec is not None and of is not None:
                cands.append(other.prec + of)
            if self.prec is not None and other.prec is not None:
                cands.append(self.prec + other.prec)
            for c in cands:
                prec = _min_prec(prec, c)
        merged: dict = {}
        zero = RealConstant(0)
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if prec is not None and e >= prec:
                    continue
                merged[e] = merged.get(e, zero) + c1 * c2
        return Series._from_dict(self.group, merged, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_monomial():
            (e, c), = other.terms
            return self.scale(c.inverse()).shift(-e)
        if self.is_exact and other.is_exact:
            q = self.exact_div(other)
            if q is not None:
                return q
        target = self.default_target()
        return self * other.inv(target - (self.ord() if self.terms else self.group.zero))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def exact_div(self, other: "Series") -> "Series | None":
        """Quotient when it is itself a finite series, else None."""
        if other.is_zero():
            raise DivisionByZero("division by the zero series")
        if self.is_zero():
            return self
        if not (self.is_exact and other.is_exact):
            return None
        e0, c0 = other.terms[0]
        limit = self.max_exponent() - e0
        rem = self
        quotient: dict = {}
        while rem.terms:
            e, c = rem.terms[0]
            qe = e - e0
            if qe > limit:
                return None
            qc = c / c0
            quotient[qe] = qc
            rem = rem - other.scale(qc).shift(qe)
        return Series._from_dict(self.group, quotient, None)

    def inv(self, target=None) -> "Series":
        """Multiplicative inverse known below ``target`` (absolute exponent)."""
        if self.is_zero():
            raise DivisionByZero("inverse of the zero series")
        target = self.default_target() if target is None else self.group.coerce(target)
        gamma, a = self.lead()
        if a.sign() == 0:
            raise DivisionByZero("leading coefficient is zero")
        if self.is_monomial():
            return Series.monomial(a.inverse(), -gamma, self.group)
        h = self.shift(-gamma).scale(a.inverse()) - 1
        neg_h = -h
        unit = _power_sum(neg_h, lambda k: RealConstant(1), target + gamma)
        return unit.scale(a.inverse()).shift(-gamma)

    def nth_root(self, n: int, target=None) -> "Series":
        if n < 1:
            raise ValueError("root index must be positive")
        if n == 1 or self.is_zero():
            return self
        target = self.default_target() if target is None else self.group.coerce(target)
        gamma, a = self.lead()
        s = a.sign()
        if s < 0:
            if n % 2 == 0:
                raise NegativeRadicand(f"even root of negative series {self}")
            return -((-self).nth_root(n, target))
        from .constants import root as const_root
        ra = const_root(a, n)
        h = self.shift(-gamma).scale(a.inverse()) - 1
        alpha = Fraction(1, n)

        def coeff(k):
            if k == 0:
                return RealConstant(1)
            return _binomial(alpha, k)

        if self.is_exact and h.terms:
            # exact perfect powers come back exact
            top = (self.max_exponent() - gamma) / n
            candidate = _power_sum(h, coeff, top + h.ord()).truncate(top + h.ord())
            exact = Series._make(self.group, tuple(ec for ec in candidate.terms if ec[0] <= top), None)
            if _int_power(exact, n) == h + 1:
                return exact.scale(ra).shift(gamma / n)
        unit = _power_sum(h, coeff, target - gamma / n)
        return unit.scale(ra).shift(gamma / n)

    def sqrt(self, target=None) -> "Series":
        return self.nth_root(2, target)

    def __pow__(self, q):
        if isinstance(q, Series):
            q = q.constant_value().as_fraction()
        q = Fraction(q)
        if q.denominator == 1:
            n = int(q)
            if n >= 0:
                return _int_power(self, n)
            return _int_power(self, -n).inv()
        r = self.nth_root(q.denominator)
        return r ** q.numerator

    def pow_real(self, alpha, target=None) -> "Series":
        """self**alpha for a positive series and a real constant exponent."""
        alpha = as_constant(alpha)
        if alpha.is_rational:
            return self ** alpha.as_fraction()
        target = self.default_target() if target is None else self.group.coerce(target)
        gamma, a = self.lead()
        if a.sign() <= 0:
            raise DomainError("irrational power of a non-positive series")
        from .constants import exp as cexp, log as clog
        h = self.shift(-gamma).scale(a.inverse()) - 1
        shift = self._real_multiple(gamma, alpha)
        unit = _power_sum(h, lambda k: _binomial_real(alpha, k), target - shift)
        return unit.scale(cexp(alpha * clog(a))).shift(shift)

    def _real_multiple(self, gamma: Exponent, alpha: RealConstant) -> Exponent:
        return self.group.coordinates(gamma.embed() * alpha)

    # --- order --------------------------------------------------------------

    def sign(self) -> Sign:
        if self.terms:
            return Sign(self.terms[0][1].sign())
        if self.prec is None:
            return Sign.ZERO
        raise PrecisionExhausted(f"series is zero up to t^{self.prec}")

    def compare(self, other) -> Ordering:
        return Ordering(int(self._sub_sign(other)))

    def _sub_sign(self, other) -> Sign:
        other = self._coerce(other)
        return (self - other).sign()

    def __lt__(self, other):
        return self._sub_sign(other) < 0

    def __le__(self, other):
        return self._sub_sign(other) <= 0

    def __gt__(self, other):
        return self._sub_sign(other) > 0

    def __ge__(self, other):
        return self._sub_sign(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def is_bounded(self) -> bool:
        if self.terms:
            return self.terms[0][0] >= self.group.zero
        if self.prec is None or self.prec > self.group.zero:
            return True
        raise PrecisionExhausted("boundedness undecided at this precision")

    def is_infinitesimal(self) -> bool:
        if self.terms:
            return self.terms[0][0] > self.group.zero
        if self.prec is None or self.prec > self.group.zero:
            return True
        raise PrecisionExhausted("infinitesimality undecided at this precision")

    def standard_part(self):
        """Real constant, or INFINITE for a series of negative order."""
        zero = self.group.zero
        if self.terms and self.terms[0][0] < zero:
            return INFINITE
        if self.prec is not None and self.prec <= zero:
            raise PrecisionExhausted("standard part needs precision above exponent 0")
        for e, c in self.terms:
            if e.is_zero():
                return c
        return RealConstant(0)

    # --- equality -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RealConstant)):
            other = Series.constant(other, self.group)
        if not isinstance(other, Series):
            return NotImplemented
        return self.terms == other.terms and self.prec == other.prec and self.group == other.group

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.terms, self.prec))
        return self._hash

    def equal_up_to(self, other, prec=None) -> bool:
        """Equality of all terms below the common precision (or ``prec``)."""
        other = self._coerce(other)
        bound = _min_prec(self.prec, other.prec)
        if prec is not None:
            bound = _min_prec(bound, self.group.coerce(prec))
        a = self if bound is None else self.truncate(bound)
        b = other if bound is None else other.truncate(bound)
        return a.terms == b.terms

    def precision_of_difference(self, other) -> Exponent | None:
        return _min_prec(self.prec, self._coerce(other).prec)

    # --- substitution and instantiation -------------------------------------

    def map_coefficients(self, fn: Callable[[RealConstant], RealConstant]) -> "Series":
        return Series._from_dict(self.group, {e: fn(c) for e, c in self.terms}, self.prec)

    def instantiate(self, tau) -> float:
        """Numerical value at t = tau for a real tau in (0, 1)."""
        import math
        total = 0.0
        log_tau = math.log(tau)
        for e, c in self.terms:
            total += float(c) * math.exp(float(e.embed()) * log_tau)
        return total

    def to_json(self) -> dict:
        return {
            "terms": [{"exp": [str(x) for x in e.coords], "coeff": str(c)} for e, c in self.terms],
            "precision": None if self.prec is None else [str(x) for x in self.prec.coords],
        }

    # --- rendering ----------------------------------------------------------

    def __str__(self):
        parts = []
        for e, c in self.terms:
            neg = c.sign() < 0 if c.is_rational or c.is_monomial() else c.leading_coefficient() < 0
            mag = -c if neg else c
            body = _render_monomial(mag, e)
            if not parts:
                parts.append("-" + body if neg else body)
            else:
                parts.append((" - " if neg else " + ") + body)
        if self.prec is not None:
            parts.append((" + " if parts else "") + f"O({_render_power(self.prec)})")
        return "".join(parts) if parts else "0"

    def __repr__(self):
        return f"Series({str(self)!r})"


def _render_power(e: Exponent) -> str:
    if e.is_zero():
        return "1"
    value = e.embed()
    if value.is_rational:
        q = value.as_fraction()
        if q.denominator == 1 and q > 0:
            return "t" if q == 1 else f"t^{q}"
        return f"t^({q})"
    return f"t^({value})"


def _render_monomial(c: RealConstant, e: Exponent) -> str:
    if e.is_zero():
        text = str(c)
        return f"({text})" if not c.is_monomial() else text
    power = _render_power(e)
    if c == 1:
        return power
    text = str(c)
    if not c.is_monomial():
        text = f"({text})"
    return f"{text}*{power}"


def t(e=1, group: ExponentGroup = QQ) -> Series:
    """The monomial t**e."""
    return Series.monomial(1, e, group)


def _int_power(f: Series, n: int) -> Series:
    result = Series.constant(1, f.group)
    base = f
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def _binomial(alpha: Fraction, k: int) -> RealConstant:
    num = Fraction(1)
    for j in range(k):
        num *= alpha - j
        num /= j + 1
    return RealConstant(num)


def _binomial_real(alpha: RealConstant, k: int) -> RealConstant:
    num = RealConstant(1)
    for j in range(k):
        num = num * (alpha - j) * Fraction(1, j + 1)
    return num


def _power_sum(h: Series, coeff: Callable[[int], object], bound) -> Series:
    """Sum of coeff(k) * h**k for k >= 0, known below the exponent ``bound``.

    ``h`` must be infinitesimal.  ``coeff`` returns a RealConstant, a Series,
    or None once all further coefficients vanish (then an exact ``h`` gives an
    exact result).
    """
    group = h.group
    bound = group.coerce(bound)

    def as_series(c):
        return c if isinstance(c, Series) else Series.constant(c, group)

    result = as_series(coeff(0))
    if h.is_zero():
        return result
    if not h.terms:
        return result.truncate(_min_prec(bound, h.prec))
    v = h.ord()
    if v <= group.zero:
        raise DomainError("power series argument must be infinitesimal")
    power = Series.constant(1, group)
    k = 1
    while True:
        ck = coeff(k)
        if ck is None:
            return result if h.is_exact else result.truncate(_min_prec(bound, h.prec))
        if v * k >= bound:
            return result.truncate(bound)
        power = (power * h).truncate(bound)
        ck = as_series(ck)
        if not ck.is_zero():
            result = result + power * ck
        k += 1
