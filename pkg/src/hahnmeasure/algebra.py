"""The Lebesgue algebra: polynomials in X = log(1/t) over series."""
from __future__ import annotations

import math
from fractions import Fraction

from .constants import Ordering, RealConstant
from .errors import PrecisionExhausted, ZeroPolynomial
from .exponents import QQ, ExponentGroup
from .series import Series, Sign

__all__ = ["AlgebraElement", "ReducedElement", "X", "compare_algebra", "reduce"]


class AlgebraElement:
    """c_0 + c_1 X + ... + c_d X^d with series coefficients."""

    __slots__ = ("coeffs", "group")

    def __init__(self, coeffs=(), group: ExponentGroup | None = None):
        cs = []
        for c in coeffs:
            if not isinstance(c, Series):
                c = Series.constant(c, group or QQ)
            cs.append(c)
        if group is None:
            group = cs[0].group if cs else QQ
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.group = group

    @classmethod
    def lift(cls, value, group: ExponentGroup = QQ) -> "AlgebraElement":
        if isinstance(value, AlgebraElement):
            return value
        if isinstance(value, Series):
            return cls((value,), value.group)
        return cls((Series.constant(value, group),), group)

    @classmethod
    def x_power(cls, k: int, group: ExponentGroup = QQ) -> "AlgebraElement":
        zero = Series.zero(group)
        return cls((zero,) * k + (Series.constant(1, group),), group)

    def coeff(self, i: int) -> Series:
        return self.coeffs[i] if i < len(self.coeffs) else Series.zero(self.group)

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            return other
        if isinstance(other, (Series, int, Fraction, RealConstant)):
            return AlgebraElement.lift(other, self.group)
        return NotImplemented

    # --- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return AlgebraElement([self.coeff(i) + other.coeff(i) for i in range(n)], self.group)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement([-c for c in self.coeffs], self.group)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return AlgebraElement((), self.group)
        out = [Series.zero(self.group)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return AlgebraElement(out, self.group)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.degree() == 0:
                return AlgebraElement.lift(self.coeffs[0] ** n, self.group)
            raise ValueError("negative powers of X are not in the algebra")
        result = AlgebraElement.lift(1, self.group)
        for _ in range(n):
            result = result * self
        return result

    def __truediv__(self, other):
        """Division by a degree-zero element only."""
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.degree() != 0:
            raise ValueError("division by a polynomial in X leaves the algebra")
        d = other.coeffs[0]
        return AlgebraElement([c / d for c in self.coeffs], self.group)

    def scale(self, s) -> "AlgebraElement":
        return AlgebraElement([c * s for c in self.coeffs], self.group)

    # --- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i].terms:
                return i
        if not self.coeffs:
            raise ZeroPolynomial("degree of the zero element")
        raise PrecisionExhausted("every coefficient is zero up to precision")

    def is_series(self) -> bool:
        return all(c.known_zero() and c.is_exact for c in self.coeffs[1:])

    def as_series(self) -> Series:
        if not self.is_series():
            raise ValueError(f"{self} involves X")
        return self.coeff(0)

    def sign(self) -> Sign:
        """Sign under the ordering R < X < t^(-eps)."""
        best = None
        for i, c in enumerate(self.coeffs):
            if c.terms:
                e = c.terms[0][0]
                if best is None or e < best[0] or (e == best[0] and i > best[1]):
                    best = (e, i)
        for i, c in enumerate(self.coeffs):
            if c.terms or c.is_exact:
                continue
            # a coefficient known only up to t^w could still dominate
            if best is None or c.prec < best[0] or (c.prec == best[0] and i > best[1]):
                raise PrecisionExhausted("cancellation beyond the working precision")
        if best is None:
            return Sign.ZERO
        return Sign(self.coeffs[best[1]].terms[0][1].sign())

    def compare(self, other) -> Ordering:
        return compare_algebra(self, other)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def equal_up_to(self, other, prec=None) -> bool:
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(i).equal_up_to(other.coeff(i), prec) for i in range(n))

    def precision(self):
        """Smallest precision bound among the coefficients (None when exact)."""
        out = None
        for c in self.coeffs:
            if c.prec is not None and (out is None or c.prec < out):
                out = c.prec
        return out

    def map_coefficients(self, fn) -> "AlgebraElement":
        return AlgebraElement([fn(c) for c in self.coeffs], self.group)

    def standard_part(self):
        if self.degree() > 0:
            raise ValueError("standard part of an element involving X")
        return self.coeff(0).standard_part()

    def instantiate(self, tau: float) -> float:
        """Numerical value at t = tau, X = log(1/tau)."""
        x = math.log(1 / tau)
        return sum(c.instantiate(tau) * x ** i for i, c in enumerate(self.coeffs))

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    def __str__(self):
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            text = str(c)
            if i:
                xs = "X" if i == 1 else f"X^{i}"
                if text in ("1", "-1"):
                    text = xs if text == "1" else "-" + xs
                elif len(c.terms) == 1 and c.is_exact and not text.startswith("("):
                    text = f"{text}*{xs}"
                else:
                    text = f"({text})*{xs}"
            if parts:
                parts.append(" - " + text[1:] if text.startswith("-") else " + " + text)
            else:
                parts.append(text)
        return "".join(parts) if parts else "0"

    def __repr__(self):
        return f"AlgebraElement({str(self)!r})"


X = AlgebraElement.x_power(1)


def compare_algebra(p, q) -> Ordering:
    p = AlgebraElement.lift(p) if not isinstance(p, AlgebraElement) else p
    return Ordering(int((p - q).sign()))


class ReducedElement:
    """Class of an element modulo bounded series; stored by canonical representative."""

    __slots__ = ("representative",)

    def __init__(self, representative: AlgebraElement):
        self.representative = representative

    def __eq__(self, other):
        return isinstance(other, ReducedElement) and self.representative == other.representative

    def __hash__(self):
        return hash(self.representative)

    def __add__(self, other):
        return reduce(self.representative + other.representative)

    def __neg__(self):
        return reduce(-self.representative)

    def __sub__(self, other):
        return reduce(self.representative - other.representative)

    def equal_up_to(self, other, prec=None) -> bool:
        return self.representative.equal_up_to(other.representative, prec)

    def __str__(self):
        return str(self.representative)

    def __repr__(self):
        return f"ReducedElement({str(self)!r})"


def reduce(p) -> ReducedElement:
    """Strip the bounded part of the X^0 coefficient."""
    p = AlgebraElement.lift(p) if not isinstance(p, AlgebraElement) else p
    if not p.coeffs:
        return ReducedElement(p)
    head = p.coeffs[0].principal_part()
    return ReducedElement(AlgebraElement((head,) + p.coeffs[1:], p.group))
