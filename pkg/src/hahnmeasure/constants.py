"""Exact real constants.

A :class:`RealConstant` is kept in a canonical form: a finite sum of rational
multiples of monomials in *atoms*.  Atoms are pi, powers of e, fractional
powers of primes, logarithms of primes, arctan/arcsin of rationals in (0, 1),
and opaque applications of log/arctan/arcsin/exp or a fractional power to a
constant that did not simplify.  Distinct atoms are treated as algebraically
independent, so equality of canonical forms decides equality; everything else
is decided by certified interval enclosures.
"""
from __future__ import annotations

import enum
import math
import threading
from fractions import Fraction
from functools import lru_cache

from . import _intervals as iv
from .config import const_bits
from .errors import DivisionByZero, DomainError, NegativeRadicand, PrecisionExhausted

__all__ = [
    "RealConstant", "Ordering", "PI", "E", "ZERO", "ONE",
    "log", "exp", "arctan", "arcsin", "sqrt", "root", "power", "compare", "approx",
]


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def __str__(self):
        return self.name.capitalize()


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    from sympy import factorint
    return tuple(sorted(factorint(n).items()))


class Atom:
    """An indivisible symbol of the canonical form."""

    __slots__ = ("kind", "arg", "key", "_hash")

    # kinds with a known positive value, used to validate fractional powers
    POSITIVE = frozenset({"pi", "e", "root", "log", "atan", "asin", "fexp"})

    def __init__(self, kind: str, arg=None):
        self.kind = kind
        self.arg = arg
        self.key = (kind, _arg_key(arg))
        self._hash = hash(self.key)

    def __eq__(self, other):
        return isinstance(other, Atom) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Atom({self.kind}, {self.arg!r})"

    def render(self) -> str:
        k, a = self.kind, self.arg
        if k == "pi":
            return "pi"
        if k == "e":
            return "exp(1)"
        if k == "log":
            return f"log({a})"
        if k == "root":
            return str(a)
        if k in ("atan", "fatan"):
            return f"arctan({a})"
        if k in ("asin", "fasin"):
            return f"arcsin({a})"
        if k == "flog":
            return f"log({a})"
        if k == "fexp":
            return f"exp({a})"
        if k == "pow":
            return f"({a})"
        raise AssertionError(k)


def _arg_key(arg) -> str:
    if arg is None:
        return ""
    if isinstance(arg, int):
        return f"{arg:012d}"
    return str(arg)


# A monomial is a tuple of (Atom, Fraction exponent) sorted by atom key.
# A form is a dict monomial -> nonzero Fraction coefficient.

def _mono_key(m):
    return tuple((a.key, e) for a, e in m)


def _mono_mul(m1, m2) -> dict:
    """Product of two monomials as a form (usually a single term)."""
    exps: dict[Atom, Fraction] = {}
    for a, e in m1:
        exps[a] = e
    for a, e in m2:
        exps[a] = exps.get(a, Fraction(0)) + e
    coeff = Fraction(1)
    expand = []
    atoms = []
    for a, e in exps.items():
        if e == 0:
            continue
        if a.kind == "root":
            k = math.floor(e)
            coeff *= Fraction(a.arg) ** k
            e -= k
            if e == 0:
                continue
        elif a.kind == "pow" and e >= 1:
            k = math.floor(e)
            expand.append((a.arg, k))
            e -= k
            if e == 0:
                continue
        atoms.append((a, e))
    atoms.sort(key=lambda ae: ae[0].key)
    form = {tuple(atoms): coeff}
    for base, k in expand:
        form = _form_mul(form, _form_pow_int(base._form_dict(), k))
    return form


def _form_add(f: dict, g: dict, sign: int = 1) -> dict:
    out = dict(f)
    for m, c in g.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _form_scale(f: dict, q: Fraction) -> dict:
    if q == 0:
        return {}
    return {m: c * q for m, c in f.items()}


def _form_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            for m, c in _mono_mul(m1, m2).items():
                v = out.get(m, 0) + c * c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
    return out


def _form_pow_int(f: dict, n: int) -> dict:
    result = {(): Fraction(1)}
    base = f
    while n:
        if n & 1:
            result = _form_mul(result, base)
        n >>= 1
        if n:
            base = _form_mul(base, base)
    return result


def _sorted_monos(form: dict):
    return sorted(form, key=lambda m: (len(m), _mono_key(m)))


class RealConstant:
    """An exactly represented computable real number."""

    __slots__ = ("_q", "_form", "_enc", "_hash", "_lock")

    def __init__(self, value=0):
        if isinstance(value, RealConstant):
            self._q, self._form = value._q, value._form
        elif isinstance(value, (int, Fraction)):
            self._q, self._form = Fraction(value), None
        elif isinstance(value, str):
            self._q, self._form = Fraction(value.replace(" ", "")), None
        else:
            raise TypeError(f"cannot build a RealConstant from {type(value).__name__}")
        self._enc = None
        self._hash = None
        self._lock = threading.Lock()

    @classmethod
    def _from_form(cls, form: dict) -> "RealConstant":
        self = object.__new__(cls)
        if not form:
            self._q, self._form = Fraction(0), None
        elif len(form) == 1 and () in form:
            self._q, self._form = form[()], None
        else:
            self._q, self._form = None, form
        self._enc = None
        self._hash = None
        self._lock = threading.Lock()
        return self

    @classmethod
    def _atom(cls, atom: Atom, exponent=Fraction(1), coeff=Fraction(1)) -> "RealConstant":
        return cls._from_form(_form_scale(_mono_mul((), ((atom, Fraction(exponent)),)), Fraction(coeff)))

    def _form_dict(self) -> dict:
        if self._form is not None:
            return self._form
        return {(): self._q} if self._q else {}

    # --- inspection ---------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self._q is not None

    def as_fraction(self) -> Fraction:
        if self._q is None:
            raise ValueError(f"{self} is not rational")
        return self._q

    def is_zero(self) -> bool:
        return self._q == 0

    def terms(self):
        """(coefficient, monomial) pairs in canonical order."""
        form = self._form_dict()
        return [(form[m], m) for m in _sorted_monos(form)]

    def is_monomial(self) -> bool:
        return len(self._form_dict()) <= 1

    def leading_coefficient(self) -> Fraction:
        form = self._form_dict()
        if not form:
            return Fraction(0)
        return form[_sorted_monos(form)[0]]

    def normalize(self) -> "RealConstant":
        """Canonical form; idempotent and a no-op on stored values."""
        return RealConstant._from_form(dict(self._form_dict()))

    def atoms(self) -> set:
        out = set()
        for m in self._form_dict():
            out.update(a for a, _ in m)
        return out

    # --- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._q is not None and other._q is not None:
            return RealConstant(self._q + other._q)
        return RealConstant._from_form(_form_add(self._form_dict(), other._form_dict()))

    __radd__ = __add__

    def __neg__(self):
        if self._q is not None:
            return RealConstant(-self._q)
        return RealConstant._from_form(_form_scale(self._form, Fraction(-1)))

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._q is not None and other._q is not None:
            return RealConstant(self._q - other._q)
        return RealConstant._from_form(_form_add(self._form_dict(), other._form_dict(), -1))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._q is not None and other._q is not None:
            return RealConstant(self._q * other._q)
        if self._q is not None:
            return RealConstant._from_form(_form_scale(other._form, self._q))
        if other._q is not None:
            return RealConstant._from_form(_form_scale(self._form, other._q))
        return RealConstant._from_form(_cancel_reciprocals(_form_mul(self._form, other._form)))

    __rmul__ = __mul__

    def inverse(self) -> "RealConstant":
        if self._q is not None:
            if self._q == 0:
                raise DivisionByZero("division by exact zero")
            return RealConstant(1 / self._q)
        form = self._form
        if len(form) == 1:
            (m, c), = form.items()
            inv_form = {(): 1 / c}
            for a, e in m:
                inv_form = _form_mul(inv_form, _mono_mul((), ((a, -e),)))
            return RealConstant._from_form(inv_form)
        if self.sign() == 0:
            raise DivisionByZero("division by zero")
        conj = _rationalizing_conjugate(form)
        if conj is not None:
            # (a + b sqrt(p)) (a - b sqrt(p)) no longer mentions sqrt(p)
            conj = RealConstant._from_form(conj)
            return conj * (self * conj).inverse()
        lead = abs(self.leading_coefficient())
        base = RealConstant._from_form(_form_scale(form, 1 / lead))
        return RealConstant._atom(Atom("pow", base), -1, 1 / lead)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other._q is not None:
            if other._q == 0:
                raise DivisionByZero("division by exact zero")
            return self * (1 / other._q)
        if self.is_zero():
            return self
        if not other.is_monomial():
            # exact quotient by a monomial multiple
            sm, om = _sorted_monos(self._form_dict())[0], _sorted_monos(other._form)[0]
            ratio = RealConstant._from_form({sm: self._form_dict()[sm]}) * \
                RealConstant._from_form({om: other._form[om]}).inverse()
            if ratio * other == self:
                return ratio
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, q):
        return power(self, q)

    # --- comparison ---------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._q is not None or other._q is not None:
            return self._q == other._q
        return self._form == other._form

    def __hash__(self):
        if self._hash is None:
            if self._q is not None:
                self._hash = hash(self._q)
            else:
                self._hash = hash(frozenset(self._form.items()))
        return self._hash

    def sign(self, budget: int | None = None) -> int:
        if self._q is not None:
            return (self._q > 0) - (self._q < 0)
        budget = const_bits() if budget is None else budget
        bits = 32
        while True:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if bits >= budget:
                raise PrecisionExhausted(f"cannot separate {self} from zero within {budget} bits")
            bits = min(2 * bits, budget)

    def __lt__(self, other):
        return compare(self, other) is Ordering.LESS

    def __le__(self, other):
        return compare(self, other) is not Ordering.GREATER

    def __gt__(self, other):
        return compare(self, other) is Ordering.GREATER

    def __ge__(self, other):
        return compare(self, other) is not Ordering.LESS

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        if self._q is not None:
            return float(self._q)
        lo, hi = approx(self, 60)
        return float((lo + hi) / 2)

    def __bool__(self):
        return not self.is_zero()

    # --- enclosures ---------------------------------------------------------

    def enclosure(self, bits: int) -> iv.Interval:
        """Dyadic interval containing the value, of width about 2**-bits times its scale."""
        if self._q is not None:
            return iv.outward(iv.point(self._q), bits + 2)
        cached = self._enc
        if cached is not None and cached[0] >= bits:
            return cached[1]
        fresh = _enclose_form(self._form, bits)
        with self._lock:
            cached = self._enc
            if cached is not None:
                fresh = iv.intersect(fresh, cached[1])
                bits = max(bits, cached[0])
            self._enc = (bits, fresh)
        return fresh

    # --- rendering ----------------------------------------------------------

    def __str__(self):
        if self._q is not None:
            return _render_fraction(self._q)
        parts = []
        for c, m in self.terms():
            text = _render_term(abs(c), m)
            if not parts:
                parts.append(text if c > 0 else "-" + text)
            else:
                parts.append((" + " if c > 0 else " - ") + text)
        return "".join(parts)

    def __repr__(self):
        return f"RealConstant({str(self)!r})"


def _cancel_reciprocals(form: dict) -> dict:
    """Rewrite B**-1 * (k * B) as k when the cofactor k is a single monomial."""
    seen = set()
    for m in form:
        for a, e in m:
            if a.kind != "pow" or e != -1 or a in seen:
                continue
            seen.add(a)
            inside = {tuple(x for x in mm if x != (a, e)): c for mm, c in form.items() if (a, e) in mm}
            base = a.arg._form_dict()
            if len(inside) != len(base):
                continue
            im, bm = _sorted_monos(inside)[0], _sorted_monos(base)[0]
            ratio = _form_scale(_mono_mul(im, tuple((x, -y) for x, y in bm)), inside[im] / base[bm])
            if _form_mul(ratio, base) != inside:
                continue
            rest = {mm: c for mm, c in form.items() if (a, e) not in mm}
            return _cancel_reciprocals(_form_add(rest, ratio))
    return form


def _rationalizing_conjugate(form: dict) -> dict | None:
    """Flip the sign of one square-root atom, if the form is linear in it."""
    for m in form:
        for a, e in m:
            if a.kind == "root" and e == _HALF:
                return {mm: (-c if (a, _HALF) in mm else c) for mm, c in form.items()}
    return None


def _render_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _render_exp(e: Fraction) -> str:
    if e.denominator == 1:
        return f"^{e.numerator}" if e >= 0 else f"^({e.numerator})"
    return f"^({e.numerator}/{e.denominator})"


def _render_atom_power(a: Atom, e: Fraction) -> str:
    if a.kind == "e":
        return f"exp({_render_fraction(e)})"
    if a.kind == "root":
        if e == Fraction(1, 2):
            return f"sqrt({a.arg})"
        return f"{a.arg}{_render_exp(e)}"
    if a.kind == "pow" and e == Fraction(1, 2):
        return f"sqrt({a.arg})"
    text = a.render()
    return text if e == 1 else text + _render_exp(e)


def _render_term(c: Fraction, m) -> str:
    num = [] if c.numerator == 1 and m else [str(c.numerator)]
    den = [] if c.denominator == 1 else [str(c.denominator)]
    for a, e in m:
        if e > 0 or a.kind == "e":
            num.append(_render_atom_power(a, e))
        else:
            den.append(_render_atom_power(a, -e))
    text = "*".join(num) if num else "1"
    if den:
        text += "/" + (den[0] if len(den) == 1 else "(" + "*".join(den) + ")")
    return text


def _coerce(x):
    if isinstance(x, RealConstant):
        return x
    if isinstance(x, (int, Fraction)):
        return RealConstant(x)
    return NotImplemented


def as_constant(x) -> RealConstant:
    c = _coerce(x)
    if c is NotImplemented:
        raise TypeError(f"expected a real constant, got {type(x).__name__}")
    return c


# --- enclosure evaluation ----------------------------------------------------

def _atom_power_enclosure(a: Atom, e: Fraction, bits: int) -> iv.Interval:
    k = a.kind
    if k == "e":
        return iv.exp(iv.point(e), bits)
    if k == "root":
        return iv.pow_frac(iv.point(a.arg), e, bits)
    if k == "pi":
        base = iv.pi(bits + 8)
    elif k == "log":
        base = iv.log(iv.point(a.arg), bits + 8)
    elif k == "atan":
        base = iv.atan(iv.point(a.arg), bits + 8)
    elif k == "asin":
        base = iv.asin(iv.point(a.arg), bits + 8)
    else:
        inner = a.arg.enclosure(bits + 16)
        if k == "flog":
            base = iv.log(inner, bits + 8)
        elif k == "fatan":
            base = iv.atan(inner, bits + 8)
        elif k == "fasin":
            base = iv.asin((max(inner[0], Fraction(-1)), min(inner[1], Fraction(1))), bits + 8)
        elif k == "fexp":
            base = iv.exp(inner, bits + 8)
        elif k == "pow":
            base = inner
        else:
            raise AssertionError(k)
    return iv.pow_frac(iv.outward(base, bits + 8), e, bits + 8)


def _enclose_form(form: dict, bits: int) -> iv.Interval:
    work = bits + 16
    total = iv.point(0)
    for m, c in form.items():
        acc = iv.point(c)
        for a, e in m:
            acc = iv.mul(acc, _atom_power_enclosure(a, e, work))
        total = iv.add(total, iv.outward(acc, work))
    return iv.outward(total, bits + 4)


def approx(a, bits: int) -> iv.Interval:
    """Dyadic enclosure of width at most 2**(1-bits) * max(1, |a|)."""
    a = as_constant(a)
    if bits < 1:
        raise ValueError("bits must be at least 1")
    if a.is_rational:
        q = a.as_fraction()
        if q.denominator & (q.denominator - 1) == 0:
            return q, q
    work = bits + 4
    while True:
        enc = iv.outward(a.enclosure(work), work)
        mag = Fraction(0) if iv.contains_zero(enc) else min(abs(enc[0]), abs(enc[1]))
        if iv.width(enc) <= Fraction(2) ** (1 - bits) * max(Fraction(1), mag):
            return enc
        work += bits


def compare(a, b, budget: int | None = None) -> Ordering:
    """Certified three-way comparison; raises PrecisionExhausted when undecided."""
    d = as_constant(a) - as_constant(b)
    if d.is_zero():
        return Ordering.EQUAL
    return Ordering(d.sign(budget))


# --- constructors and elementary functions -----------------------------------

ZERO = RealConstant(0)
ONE = RealConstant(1)
PI = RealConstant._atom(Atom("pi"))
E = RealConstant._atom(Atom("e"))


def _rational_power(q: Fraction, e: Fraction) -> RealConstant:
    """q ** e for a positive rational q."""
    out = {(): Fraction(1)}
    for n, sign in ((q.numerator, 1), (q.denominator, -1)):
        for p, k in _factor(n):
            out = _form_mul(out, _mono_mul((), ((Atom("root", p), sign * k * e),)))
    return RealConstant._from_form(out)


def power(c, q) -> RealConstant:
    """Real power c**q for rational q (odd roots of negatives allowed)."""
    c = as_constant(c)
    q = Fraction(q)
    if q == 0:
        return ONE
    if c.is_zero():
        if q < 0:
            raise DivisionByZero("negative power of zero")
        return ZERO
    if q.denominator == 1:
        n = int(q)
        if c.is_rational:
            return RealConstant(c.as_fraction() ** n)
        if n < 0:
            return power(c.inverse(), -n)
        return RealConstant._from_form(_form_pow_int(c._form_dict(), n))
    s = c.sign()
    if s < 0:
        if q.denominator % 2 == 0:
            raise NegativeRadicand(f"even root of negative constant {c}")
        mag = power(-c, q)
        return -mag if q.numerator % 2 else mag
    if c.is_rational:
        return _rational_power(c.as_fraction(), q)
    form = c._form_dict()
    if len(form) == 1 and next(iter(form.values())) > 0 and _positive_atoms(next(iter(form))):
        (m, coeff), = form.items()
        out = _rational_power(coeff, q)._form_dict()
        rest = tuple((a, e * q) for a, e in m)
        return RealConstant._from_form(_form_mul(out, _mono_mul((), rest)))
    lead = abs(c.leading_coefficient())
    base = RealConstant._from_form(_form_scale(form, 1 / lead))
    return _rational_power(lead, q) * RealConstant._atom(Atom("pow", base), q)


def _positive_atoms(m) -> bool:
    return all(a.kind in Atom.POSITIVE or (a.kind == "pow" and e.denominator != 1) for a, e in m)


def sqrt(c) -> RealConstant:
    return power(c, Fraction(1, 2))


def root(c, n: int) -> RealConstant:
    return power(c, Fraction(1, n))


def _log_rational(q: Fraction) -> RealConstant:
    if q <= 0:
        raise DomainError(f"log of non-positive {q}")
    out: dict = {}
    for n, sign in ((q.numerator, 1), (q.denominator, -1)):
        for p, k in _factor(n):
            out = _form_add(out, {((Atom("log", p), Fraction(1)),): Fraction(sign * k)})
    return RealConstant._from_form(out)


def _log_atom_power(a: Atom, e: Fraction) -> RealConstant:
    if a.kind == "e":
        return RealConstant(e)
    if a.kind == "root":
        return e * _log_rational(Fraction(a.arg))
    if a.kind == "fexp":
        return e * a.arg
    if a.kind == "pow":
        return e * RealConstant._atom(Atom("flog", a.arg))
    return e * RealConstant._atom(Atom("flog", RealConstant._atom(a)))


def log(c) -> RealConstant:
    c = as_constant(c)
    if c.is_rational:
        return _log_rational(c.as_fraction())
    if c.sign() <= 0:
        raise DomainError(f"log of non-positive constant {c}")
    form = c._form
    if len(form) == 1:
        (m, coeff), = form.items()
        if coeff > 0 and _positive_atoms(m):
            out = _log_rational(coeff)
            for a, e in m:
                out = out + _log_atom_power(a, e)
            return out
    lead = abs(c.leading_coefficient())
    base = RealConstant._from_form(_form_scale(form, 1 / lead))
    return _log_rational(lead) + RealConstant._atom(Atom("flog", base))


def exp(c) -> RealConstant:
    c = as_constant(c)
    if c.is_rational:
        q = c.as_fraction()
        return ONE if q == 0 else RealConstant._atom(Atom("e"), q)
    out = ONE
    rest: dict = {}
    for m, coeff in c._form.items():
        if not m:
            out = out * RealConstant._atom(Atom("e"), coeff)
        elif len(m) == 1 and m[0][1] == 1 and m[0][0].kind == "log":
            out = out * _rational_power(Fraction(m[0][0].arg), coeff)
        elif len(m) == 1 and m[0][1] == 1 and m[0][0].kind == "flog":
            out = out * power(m[0][0].arg, coeff)
        else:
            rest[m] = coeff
    if rest:
        out = out * RealConstant._atom(Atom("fexp", RealConstant._from_form(rest)))
    return out


_HALF = Fraction(1, 2)


def arctan(c) -> RealConstant:
    c = as_constant(c)
    if c.is_rational:
        q = c.as_fraction()
        if q == 0:
            return ZERO
        if q < 0:
            return -arctan(-q)
        if q == 1:
            return PI / 4
        if q > 1:
            return PI / 2 - arctan(1 / q)
        return RealConstant._atom(Atom("atan", q))
    if c.leading_coefficient() < 0:
        return -arctan(-c)
    s3 = sqrt(3)
    if c == s3:
        return PI / 3
    if c == s3 / 3:
        return PI / 6
    return RealConstant._atom(Atom("fatan", c))


def arcsin(c) -> RealConstant:
    c = as_constant(c)
    if c.is_rational:
        q = c.as_fraction()
        if abs(q) > 1:
            raise DomainError(f"arcsin argument {q} outside [-1, 1]")
        if q == 0:
            return ZERO
        if q < 0:
            return -arcsin(-q)
        if q == 1:
            return PI / 2
        if q == _HALF:
            return PI / 6
        return RealConstant._atom(Atom("asin", q))
    if c.leading_coefficient() < 0:
        return -arcsin(-c)
    if c == sqrt(2) / 2:
        return PI / 4
    if c == sqrt(3) / 2:
        return PI / 3
    if compare(c, 1) is Ordering.GREATER or compare(c, -1) is Ordering.LESS:
        raise DomainError(f"arcsin argument {c} outside [-1, 1]")
    return RealConstant._atom(Atom("fasin", c))
