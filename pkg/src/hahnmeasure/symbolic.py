"""Symbolic functions over the series field.

A :class:`Sym` is a quotient ``num / prod(den_i ** m_i)`` of polynomials with
series coefficients.  Polynomial indeterminates are variables, the Lebesgue
symbol ``X`` and atoms: radicals ``B^(1/k)`` of polynomials, ``log|A|``,
``arctan(A)`` and ``arcsin(A)``.  Radicals are reduced with ``p^k = B``, so the
polynomial part is a canonical form and equality is decided by
cross-multiplication.  Variables may carry negative exponents.
"""
from __future__ import annotations

import contextvars
import math
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterable

from . import constants as K
from .algebra import AlgebraElement
from .constants import RealConstant
from .errors import DivisionByZero, DomainError, UnsupportedIntegrand
from .exponents import QQ, ExponentGroup
from .series import Series

__all__ = [
    "Symbol", "Var", "LEBESGUE", "Root", "LogAbs", "Arctan", "Arcsin",
    "Poly", "Sym", "var", "const", "assume_sign", "known_sign",
    "sym_root", "sym_log", "sym_arctan", "sym_arcsin",
]

_signs: contextvars.ContextVar[dict] = contextvars.ContextVar("hm_var_signs", default={})


@contextmanager
def assume_sign(**signs):
    """Declare variables positive (+1) or negative (-1) inside the block."""
    merged = dict(_signs.get())
    merged.update(signs)
    token = _signs.set(merged)
    try:
        yield
    finally:
        _signs.reset(token)


# --- symbols ------------------------------------------------------------------


class Symbol:
    __slots__ = ("key", "_hash")
    kind = "symbol"

    def __init__(self, key: str):
        self.key = key
        self._hash = hash(key)

    def __eq__(self, other):
        return isinstance(other, Symbol) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"{type(self).__name__}({self.render()})"

    def free_vars(self) -> frozenset:
        return frozenset()

    def depends_on(self, name: str) -> bool:
        return name in self.free_vars()


class Var(Symbol):
    __slots__ = ("name",)
    kind = "var"

    def __init__(self, name: str):
        super().__init__("a:" + name)
        self.name = name

    def render(self):
        return self.name

    def free_vars(self):
        return frozenset((self.name,))


class _Lebesgue(Symbol):
    __slots__ = ()
    kind = "lebesgue"

    def __init__(self):
        super().__init__("b:X")

    def render(self):
        return "X"


LEBESGUE = _Lebesgue()


class _Atom(Symbol):
    __slots__ = ("_free",)

    def __init__(self, key, args):
        super().__init__(key)
        free = frozenset()
        for a in args:
            free |= a.free_vars()
        self._free = free

    def free_vars(self):
        return self._free


class Root(_Atom):
    """Real principal k-th root of a polynomial (odd roots of negatives allowed)."""

    __slots__ = ("base", "index")
    kind = "root"

    def __init__(self, base: "Poly", index: int):
        super().__init__(f"c:{index}:{base}", (base,))
        self.base, self.index = base, index

    def render(self):
        if self.index == 2:
            return f"sqrt({self.base})"
        return f"({self.base})^(1/{self.index})"


class LogAbs(_Atom):
    __slots__ = ("arg",)
    kind = "log"

    def __init__(self, arg: "Poly"):
        super().__init__(f"d:{arg}", (arg,))
        self.arg = arg

    def render(self):
        if self.arg.is_known_positive():
            return f"log({self.arg})"
        return f"log(abs({self.arg}))"


class Arctan(_Atom):
    __slots__ = ("arg",)
    kind = "arctan"

    def __init__(self, arg: "Sym"):
        super().__init__(f"e:{arg}", (arg,))
        self.arg = arg

    def render(self):
        return f"arctan({self.arg})"


class Arcsin(_Atom):
    __slots__ = ("arg",)
    kind = "arcsin"

    def __init__(self, arg: "Sym"):
        super().__init__(f"f:{arg}", (arg,))
        self.arg = arg

    def render(self):
        return f"arcsin({self.arg})"


# --- polynomials ----------------------------------------------------------------


def _mono(items: dict) -> tuple:
    return tuple(sorted(((s, e) for s, e in items.items() if e), key=lambda se: se[0].key))


def _mono_text(m: tuple) -> str:
    parts = []
    for s, e in m:
        text = s.render()
        if e != 1:
            if not isinstance(s, (Var, _Lebesgue)) and isinstance(s, Root) and s.index != 2:
                text = f"({text})"
            text = f"{text}^{e}" if e > 0 else f"{text}^({e})"
        parts.append(text)
    return "*".join(parts)


def _degree(m: tuple) -> int:
    return sum(e for _, e in m)


class Poly:
    """Polynomial with Series coefficients in symbols; immutable."""

    __slots__ = ("terms", "group", "_hash", "_str")

    def __init__(self, terms: dict | None = None, group: ExponentGroup = QQ):
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}
        self.group = group
        self._hash = None
        self._str = None

    # construction
    @classmethod
    def constant(cls, c, group: ExponentGroup = QQ) -> "Poly":
        if not isinstance(c, Series):
            c = Series.constant(c, group)
        return cls({(): c}, c.group)

    @classmethod
    def of_symbol(cls, s: Symbol, exponent: int = 1, group: ExponentGroup = QQ) -> "Poly":
        return cls({((s, exponent),): Series.constant(1, group)}, group)

    def _one(self):
        return Series.constant(1, self.group)

    # inspection
    def is_zero(self) -> bool:
        return not self.terms

    def known_zero(self) -> bool:
        return all(c.known_zero() for c in self.terms.values())

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> Series:
        if not self.is_constant():
            raise DomainError(f"{self} is not constant")
        return self.terms.get((), Series.zero(self.group))

    def symbols(self) -> set:
        out = set()
        for m in self.terms:
            out.update(s for s, _ in m)
        return out

    def free_vars(self) -> frozenset:
        out = frozenset()
        for s in self.symbols():
            out |= s.free_vars()
        return out

    def depends_on(self, name: str) -> bool:
        return name in self.free_vars()

    def degree_in(self, s: Symbol) -> int:
        return max((dict(m).get(s, 0) for m in self.terms), default=0)

    def min_degree_in(self, s: Symbol) -> int:
        return min((dict(m).get(s, 0) for m in self.terms), default=0)

    def coefficients_in(self, s: Symbol) -> dict:
        """Map exponent -> coefficient polynomial (free of ``s``)."""
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.pop(s, 0)
            out.setdefault(e, {})[_mono(d)] = c
        return {e: Poly(ts, self.group) for e, ts in out.items()}

    def is_known_positive(self) -> bool:
        """Sufficient syntactic test: positive constant, or a sum of positive
        coefficients times monomials that are even powers of variables."""
        if not self.terms:
            return False
        signs = _signs.get()
        for m, c in self.terms.items():
            if not c.terms or c.sign() <= 0:
                return False
            for s, e in m:
                if isinstance(s, Var) and (e % 2 == 0 or signs.get(s.name) == 1):
                    continue
                if isinstance(s, _Lebesgue):
                    continue
                if isinstance(s, Root) and s.index % 2 == 0:
                    continue
                return False
        return True

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other, self.group)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly(out, self.group)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()}, self.group)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other, self.group)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.constant(other, self.group) - self

    def scale(self, c) -> "Poly":
        if not isinstance(c, Series):
            c = Series.constant(c, self.group)
        if c.is_zero():
            return Poly({}, self.group)
        return Poly({m: v * c for m, v in self.terms.items()}, self.group)

    def divide_scalar(self, c: Series) -> "Poly":
        return Poly({m: v / c for m, v in self.terms.items()}, self.group)

    def _mul_raw(self, other: "Poly") -> "Poly":
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                d = dict(m1)
                for s, e in m2:
                    d[s] = d.get(s, 0) + e
                m = _mono(d)
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return Poly(out, self.group)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        return self._mul_raw(other)._reduce_roots()

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(1, self.group)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _reduce_roots(self) -> "Poly":
        if not any(isinstance(s, Root) and e >= s.index for m in self.terms for s, e in m):
            return self
        out = Poly({}, self.group)
        plain = {}
        for m, c in self.terms.items():
            d = dict(m)
            extra = None
            for s, e in m:
                if isinstance(s, Root) and e >= s.index:
                    q, r = divmod(e, s.index)
                    d[s] = r
                    piece = s.base ** q
                    extra = piece if extra is None else extra * piece
            if extra is None:
                plain[m] = c
            else:
                out = out + (Poly({_mono(d): c}, self.group) * extra)
        return out + Poly(plain, self.group)

    def monomial_content(self) -> dict:
        """Largest variable monomial dividing every term (exponents may be negative)."""
        if not self.terms:
            return {}
        names = {s for m in self.terms for s, _ in m if isinstance(s, Var)}
        return {s: min(dict(m).get(s, 0) for m in self.terms) for s in names}

    def shift(self, mono: dict) -> "Poly":
        """Multiply by a variable monomial given as {Var: exponent}."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            for s, e in mono.items():
                d[s] = d.get(s, 0) + e
            out[_mono(d)] = c
        return Poly(out, self.group)

    def leading(self, order: list):
        """Leading (monomial, coeff) in lex order on ``order``."""
        best = None
        for m, c in self.terms.items():
            d = dict(m)
            v = tuple(d.get(s, 0) for s in order)
            if best is None or v > best[0]:
                best = (v, m, c)
        return best[1], best[2]

    def exact_div(self, other: "Poly") -> "Poly | None":
        """Quotient in the free polynomial ring when the division is exact."""
        if other.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        if self.is_zero():
            return self
        if any(not c.is_exact for c in self.terms.values()) or any(not c.is_exact for c in other.terms.values()):
            return None
        if len(other.terms) == 1:
            (m0, c0), = other.terms.items()
            if all(isinstance(s, Var) for s, _ in m0) and c0.is_monomial():
                inv = {s: -e for s, e in m0}
                return self.shift(inv).divide_scalar(c0)
        shift_num = {s: -e for s, e in self.monomial_content().items() if e < 0}
        shift_den = {s: -e for s, e in other.monomial_content().items() if e < 0}
        num = self.shift(shift_num) if shift_num else self
        den = other.shift(shift_den) if shift_den else other
        order = sorted(num.symbols() | den.symbols(), key=lambda s: s.key)
        lm, lc = den.leading(order)
        lmd = dict(lm)
        quotient = {}
        rem = num
        budget = 4 * (len(num.terms) + 2) * (len(den.terms) + 2) + 64
        while rem.terms:
            budget -= 1
            if budget < 0:
                return None
            m, c = rem.leading(order)
            d = dict(m)
            qd = {}
            for s in set(d) | set(lmd):
                e = d.get(s, 0) - lmd.get(s, 0)
                if e < 0:
                    return None
                if e:
                    qd[s] = e
            qc = c / lc if lc.is_monomial() else c.exact_div(lc)
            if qc is None or not qc.is_exact:
                return None
            qm = _mono(qd)
            quotient[qm] = quotient[qm] + qc if qm in quotient else qc
            rem = rem - Poly({qm: qc}, self.group)._mul_raw(den)
        q = Poly(quotient, self.group)
        back = {}
        for s, e in shift_num.items():
            back[s] = back.get(s, 0) - e
        for s, e in shift_den.items():
            back[s] = back.get(s, 0) + e
        return q.shift(back) if back else q

    # equality
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RealConstant, Series)):
            other = Poly.constant(other, self.group)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # calculus and substitution
    def derivative(self, name: str) -> "Sym":
        total = Sym.zero(self.group)
        for m, c in self.terms.items():
            for i, (s, e) in enumerate(m):
                if not s.depends_on(name):
                    continue
                ds = _symbol_derivative(s, name, self.group)
                if ds.is_zero():
                    continue
                d = dict(m)
                d[s] = e - 1
                rest = Sym(Poly({_mono(d): c * e}, self.group))
                total = total + rest * ds
        return total

    def substitute(self, mapping: dict, cache: dict | None = None) -> "Sym":
        cache = {} if cache is None else cache
        total = Sym.zero(self.group)
        for m, c in self.terms.items():
            term = Sym(Poly({(): c}, self.group))
            for s, e in m:
                image = _substitute_symbol(s, mapping, cache, self.group)
                term = term * (image ** e)
            total = total + term
        return total

    def evaluate(self, env: dict, cache: dict | None = None) -> AlgebraElement:
        cache = {} if cache is None else cache
        total = AlgebraElement((), self.group)
        for m, c in self.terms.items():
            term = AlgebraElement.lift(c, self.group)
            for s, e in m:
                term = term * _power_value(_evaluate_symbol(s, env, cache, self.group), e)
            total = total + term
        return total

    def to_float(self, env: dict, tau: float, cache: dict | None = None) -> float:
        cache = {} if cache is None else cache
        total = 0.0
        for m, c in self.terms.items():
            key = ("coef", c)
            if key not in cache:
                cache[key] = c.instantiate(tau)
            term = cache[key]
            for s, e in m:
                term *= _float_symbol(s, env, tau, cache) ** e
            total += term
        return total

    # rendering
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (-_degree(mc[0]), _mono_text(mc[0])))

    def __str__(self):
        if self._str is None:
            parts = []
            for m, c in self.sorted_terms():
                text = _term_text(c, m)
                if parts:
                    parts.append(" - " + text[1:] if text.startswith("-") else " + " + text)
                else:
                    parts.append(text)
            self._str = "".join(parts) if parts else "0"
        return self._str

    def __repr__(self):
        return f"Poly({str(self)!r})"


def _term_text(c: Series, m: tuple) -> str:
    if not m:
        return str(c)
    mono = _mono_text(m)
    if c.is_exact and len(c.terms) == 1:
        ctext = str(c)
        if ctext == "1":
            return mono
        if ctext == "-1":
            return "-" + mono
        if ctext.startswith("(") or " " not in ctext:
            return f"{ctext}*{mono}"
        return f"({ctext})*{mono}"
    return f"({c})*{mono}"


# --- the quotient field -----------------------------------------------------------


def _factor_key(p: Poly) -> str:
    return str(p)


class Sym:
    """num / prod(factor ** multiplicity)."""

    __slots__ = ("num", "den", "group", "_str", "_hash")

    def __init__(self, num: Poly, den: Iterable = (), group: ExponentGroup | None = None, *, normalized=False):
        group = group or num.group
        if normalized:
            self.num, self.den = num, tuple(den)
        else:
            self.num, self.den = _normalize(num, list(den), group)
        self.group = group
        self._str = None
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, group: ExponentGroup = QQ) -> "Sym":
        return cls(Poly({}, group), normalized=True)

    @classmethod
    def constant(cls, c, group: ExponentGroup = QQ) -> "Sym":
        if isinstance(c, AlgebraElement):
            return cls.from_algebra(c)
        return cls(Poly.constant(c, group), normalized=True)

    @classmethod
    def from_algebra(cls, a: AlgebraElement) -> "Sym":
        total = Poly({}, a.group)
        for i, c in enumerate(a.coeffs):
            if not c.is_zero():
                total = total + Poly({_mono({LEBESGUE: i}): c}, a.group)
        return cls(total, normalized=True)

    @classmethod
    def of_symbol(cls, s: Symbol, group: ExponentGroup = QQ) -> "Sym":
        return cls(Poly.of_symbol(s, 1, group), normalized=True)

    def _coerce(self, other) -> "Sym":
        if isinstance(other, Sym):
            return other
        if isinstance(other, Poly):
            return Sym(other)
        if isinstance(other, (int, Fraction, RealConstant, Series, AlgebraElement)):
            return Sym.constant(other, self.group)
        return NotImplemented

    # inspection
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def known_zero(self) -> bool:
        return self.num.known_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def is_constant(self) -> bool:
        return self.num.is_constant() and all(p.is_constant() for p, _ in self.den)

    def constant_value(self) -> Series:
        if not self.is_constant():
            raise DomainError(f"{self} is not constant")
        value = self.num.constant_value()
        for p, m in self.den:
            value = value / (p.constant_value() ** m)
        return value

    def free_vars(self) -> frozenset:
        out = self.num.free_vars()
        for p, _ in self.den:
            out |= p.free_vars()
        return out

    def depends_on(self, name: str) -> bool:
        return name in self.free_vars()

    def symbols(self) -> set:
        out = set(self.num.symbols())
        for p, _ in self.den:
            out |= p.symbols()
        return out

    def atoms(self) -> set:
        """All non-variable symbols, including those nested in atom arguments."""
        out = set()
        stack = list(self.symbols())
        while stack:
            s = stack.pop()
            if isinstance(s, Var) or s in out:
                continue
            out.add(s)
            if isinstance(s, Root):
                stack.extend(s.base.symbols())
            elif isinstance(s, LogAbs):
                stack.extend(s.arg.symbols())
            elif isinstance(s, (Arctan, Arcsin)):
                stack.extend(s.arg.symbols())
        return out

    def denominator(self) -> Poly:
        out = Poly.constant(1, self.group)
        for p, m in self.den:
            out = out * (p ** m)
        return out

    def lebesgue_degree(self) -> int:
        """Degree in X (the denominator never contains X)."""
        return self.num.degree_in(LEBESGUE)

    def lebesgue_coefficients(self) -> list:
        parts = self.num.coefficients_in(LEBESGUE)
        top = max(parts, default=0)
        return [Sym(parts.get(i, Poly({}, self.group)), self.den, self.group) for i in range(top + 1)]

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if not self.den and not other.den:
            return Sym(self.num + other.num, normalized=True)
        mine = {_factor_key(p): (p, m) for p, m in self.den}
        theirs = {_factor_key(p): (p, m) for p, m in other.den}
        a, b = self.num, other.num
        den = []
        for key in set(mine) | set(theirs):
            p, m1 = mine.get(key, (None, 0))
            q, m2 = theirs.get(key, (None, 0))
            poly = p if p is not None else q
            m = max(m1, m2)
            if m > m1:
                a = a * (poly ** (m - m1))
            if m > m2:
                b = b * (poly ** (m - m2))
            den.append((poly, m))
        return Sym(a + b, den, self.group)

    __radd__ = __add__

    def __neg__(self):
        return Sym(-self.num, self.den, self.group, normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return Sym.zero(self.group)
        if not other.den and other.num.is_constant():
            return Sym(self.num.scale(other.num.constant_value()), self.den, self.group, normalized=True)
        return Sym(self.num * other.num, self.den + other.den, self.group)

    __rmul__ = __mul__

    def inverse(self) -> "Sym":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return Sym(self.denominator(), [(self.num, 1)], self.group)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise DivisionByZero("division by zero")
        if not other.den and other.num.is_constant() and other.num.constant_value().is_monomial():
            c = other.num.constant_value()
            return Sym(self.num.divide_scalar(c), self.den, self.group, normalized=True)
        return Sym(self.num * other.denominator(), list(self.den) + [(other.num, 1)], self.group)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, q):
        q = Fraction(q)
        if q.denominator == 1:
            n = q.numerator
            if n >= 0:
                if n == 1:
                    return self
                return Sym(self.num ** n, [(p, m * n) for p, m in self.den], self.group)
            return (self ** (-n)).inverse()
        root = sym_root(self, q.denominator)
        return root ** q.numerator

    # equality
    def equals(self, other) -> bool:
        return (self - self._coerce(other)).num.is_zero()

    def equal_up_to_precision(self, other) -> bool:
        return (self - self._coerce(other)).num.known_zero()

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, Sym) else other
        if other is NotImplemented:
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(str(self))
        return self._hash

    # calculus
    def derivative(self, name: str) -> "Sym":
        if not self.depends_on(name):
            return Sym.zero(self.group)
        num_d = self.num.derivative(name)
        inv_den = Sym(Poly.constant(1, self.group), self.den, self.group)
        result = num_d * inv_den
        log_d = Sym.zero(self.group)
        for p, m in self.den:
            if p.depends_on(name):
                log_d = log_d + p.derivative(name) * Sym(Poly.constant(m, self.group), [(p, 1)], self.group)
        if not log_d.is_zero():
            result = result - Sym(self.num, self.den, self.group, normalized=True) * log_d
        return result

    def substitute(self, mapping: dict) -> "Sym":
        """Replace variables by Sym values; ``mapping`` is {name: Sym}."""
        if not any(self.depends_on(n) for n in mapping):
            return self
        cache: dict = {}
        mapping = {n: (v if isinstance(v, Sym) else Sym.constant(v, self.group)) for n, v in mapping.items()}
        result = self.num.substitute(mapping, cache)
        for p, m in self.den:
            result = result / (p.substitute(mapping, cache) ** m)
        return result

    def evaluate(self, env: dict) -> AlgebraElement:
        """Value at series points; ``env`` maps variable names to Series."""
        cache: dict = {}
        value = self.num.evaluate(env, cache)
        for p, m in self.den:
            d = p.evaluate(env, cache)
            if not d.is_series():
                raise UnsupportedIntegrand("denominator involves X")
            ds = d.as_series()
            if ds.is_zero():
                raise DivisionByZero(f"denominator {p} vanishes")
            if not ds.terms:
                raise DivisionByZero(f"denominator {p} vanishes up to the working precision")
            value = value / (ds ** m if m > 1 else ds)
        return value

    def to_float(self, env: dict, tau: float) -> float:
        cache: dict = {}
        value = self.num.to_float(env, tau, cache)
        for p, m in self.den:
            value /= p.to_float(env, tau, cache) ** m
        return value

    # rendering
    def __str__(self):
        if self._str is None:
            if not self.den:
                self._str = str(self.num)
            else:
                num = str(self.num)
                if len(self.num.terms) > 1 or (self.num.terms and not next(iter(self.num.terms.values())).is_monomial()):
                    num = f"({num})"
                dens = []
                for p, m in sorted(self.den, key=lambda pm: str(pm[0])):
                    text = str(p)
                    if len(p.terms) > 1 or not _simple_text(text):
                        text = f"({text})"
                    dens.append(text if m == 1 else f"{text}^{m}")
                den = "*".join(dens)
                if len(dens) > 1:
                    den = f"({den})"
                self._str = f"{num}/{den}"
        return self._str

    def __repr__(self):
        return f"Sym({str(self)!r})"


def _simple_text(text: str) -> bool:
    return all(ch.isalnum() or ch in "_" for ch in text)


def var(name: str, group: ExponentGroup = QQ) -> Sym:
    return Sym.of_symbol(Var(name), group)


def const(c, group: ExponentGroup = QQ) -> Sym:
    return Sym.constant(c, group)


# --- normalization of quotients -----------------------------------------------------


def _normalize(num: Poly, den: list, group) -> tuple:
    if num.is_zero():
        return Poly({}, group), ()
    work = list(den)
    out: dict[str, list] = {}
    guard = 0
    while work:
        guard += 1
        if guard > 500:
            raise UnsupportedIntegrand("denominator normalization did not settle")
        p, m = work.pop()
        if m == 0:
            continue
        if p.is_zero():
            raise DivisionByZero("denominator factor is zero")
        if p.is_constant():
            c = p.constant_value()
            if c.is_monomial():
                num = num.divide_scalar(c ** m if m > 1 else c)
                continue
            if c.sign() < 0:
                c, p = -c, -p
                if m % 2:
                    num = -num
            divided = _exact_scalar_division(num, c)
            while m and divided is not None:
                num, m = divided, m - 1
                divided = _exact_scalar_division(num, c) if m else None
            if m:
                key = _factor_key(p)
                if key in out:
                    out[key][1] += m
                else:
                    out[key] = [p, m]
            continue
        content = p.monomial_content()
        if any(content.values()):
            num = num.shift({s: -e * m for s, e in content.items()})
            p = p.shift({s: -e for s, e in content.items()})
            if p.is_constant():
                work.append((p, m))
                continue
        if len(p.terms) == 1:
            (mono, c), = p.terms.items()
            roots = [(s, e) for s, e in mono if isinstance(s, Root)]
            if roots:
                s, e = roots[0]
                # 1/p^e = p^(k-e) / base  (for e < k after reduction)
                num = num * (Poly.of_symbol(s, (s.index - e) * m, group))
                rest = dict(mono)
                del rest[s]
                work.append((s.base, m))
                work.append((Poly({_mono(rest): c}, group), m))
                continue
        lm, lc = p.leading(sorted(p.symbols(), key=lambda s: s.key))
        if lc.is_monomial() and lc != 1:
            p = p.divide_scalar(lc)
            num = num.divide_scalar(lc ** m if m > 1 else lc)
        sq = next((s for s in sorted(p.symbols(), key=lambda s: s.key)
                   if isinstance(s, Root) and s.index == 2), None)
        if sq is not None:
            parts = p.coefficients_in(sq)
            a = parts.get(0, Poly({}, group))
            b = parts.get(1, Poly({}, group))
            conj = a - b * Poly.of_symbol(sq, 1, group)
            num = num * (conj ** m)
            work.append((p * conj, m))
            continue
        # cancel common factors
        while m > 0:
            q = num.exact_div(p)
            if q is None:
                break
            num = q
            m -= 1
        if m == 0:
            continue
        key = _factor_key(p)
        if key in out:
            out[key][1] += m
        else:
            out[key] = [p, m]
    den_t = tuple(sorted(((p, m) for p, m in out.values()), key=lambda pm: str(pm[0])))
    return num, den_t


# --- atom constructors --------------------------------------------------------------


def _exact_scalar_division(p: Poly, c: Series) -> Poly | None:
    out = {}
    for m, v in p.terms.items():
        q = v.exact_div(c)
        if q is None:
            return None
        out[m] = q
    return Poly(out, p.group)


def known_sign(p: Poly) -> int:
    """+1/-1 when the sign of ``p`` is certain on the current assumptions, else 0."""
    if p.is_constant():
        return int(p.constant_value().sign())
    if p.is_known_positive():
        return 1
    if (-p).is_known_positive():
        return -1
    return 0


def sym_root(a, k: int) -> Sym:
    """Principal real k-th root."""
    a = a if isinstance(a, Sym) else Sym.constant(a)
    group = a.group
    if k == 1:
        return a
    if a.is_zero():
        return a
    if a.den:
        # (N / D)^(1/k) = (N D^(k-1))^(1/k) / |D|, pulling out factors whose
        # multiplicity is already a multiple of k
        outside = []
        sign = 1
        inner = a.num
        for p, m in a.den:
            q, r = divmod(m, k)
            if q:
                outside.append((p, q))
                if k % 2 == 0 and q % 2:
                    s = known_sign(p)
                    if s == 0:
                        raise UnsupportedIntegrand(f"cannot decide the sign of {p}")
                    sign *= s
            if r:
                s = known_sign(p)
                if s == 0 and k % 2 == 0:
                    raise UnsupportedIntegrand(f"cannot decide the sign of {p}")
                inner = inner * (p ** (k - r))
                outside.append((p, 1))
                if k % 2 == 0:
                    sign *= s
        return sym_root(Sym(inner), k) * Sym(Poly.constant(sign, group), outside, group)
    p = a.num
    if p.is_constant():
        c = p.constant_value()
        return Sym.constant(_constant_root(c, k), group) if _root_is_exact(c, k) else Sym.of_symbol(Root(p, k), group)
    outside = Sym.constant(1, group)
    content = p.monomial_content()
    signs = _signs.get()
    take = {}
    for s, e in content.items():
        q = e // k if e >= 0 else -((-e) // k)
        if q == 0:
            continue
        if k % 2 == 0 and q % 2 != 0:
            sign = signs.get(s.name, 0)
            if sign == 0:
                continue
            if sign < 0:
                outside = -outside
        take[s] = q
    if take:
        p = p.shift({s: -q * k for s, q in take.items()})
        outside = outside * Sym(Poly({_mono(take): Series.constant(1, group)}, group))
    lm, lc = p.leading(sorted(p.symbols(), key=lambda s: s.key))
    # even roots can only pull out |lc|, leaving a radicand with leading coefficient -1
    scale = abs(lc) if k % 2 == 0 else lc
    if lc.is_monomial() and scale != 1:
        p = p.divide_scalar(scale)
        outside = outside * Sym.constant(_constant_root(scale, k), group)
    if p.is_constant():
        return outside * sym_root(Sym(p), k)
    return outside * Sym.of_symbol(Root(p, k), group)


def _root_is_exact(c: Series, k: int) -> bool:
    if c.is_monomial():
        return not (k % 2 == 0 and c.sign() < 0)
    if not c.is_exact:
        return False
    try:
        r = _constant_root(c, k)
    except DomainError:
        return False
    return r.is_exact


def _constant_root(c: Series, k: int) -> Series:
    if c.sign() < 0:
        if k % 2 == 0:
            raise DomainError(f"even root of negative {c}")
        return -((-c).nth_root(k))
    return c.nth_root(k)


def _exact_log_constant(c: Series):
    """extended_log(|c|) when it is exact, else None."""
    from .logexp import extended_log
    c = abs(c)
    if not c.is_monomial():
        return None
    return extended_log(c)


def sym_log(a) -> Sym:
    """log|a| split over factors; constant parts become exact values when possible."""
    a = a if isinstance(a, Sym) else Sym.constant(a)
    group = a.group
    result = _log_poly(a.num, group)
    for p, m in a.den:
        result = result - _log_poly(p, group) * m
    return result


def _log_poly(p: Poly, group) -> Sym:
    if p.is_zero():
        raise DomainError("logarithm of zero")
    out = Sym.zero(group)
    if p.is_constant():
        value = _exact_log_constant(p.constant_value())
        if value is not None:
            return Sym.from_algebra(value)
        return Sym.of_symbol(LogAbs(Poly.constant(abs(p.constant_value()), group)), group)
    content = p.monomial_content()
    if any(content.values()):
        p = p.shift({s: -e for s, e in content.items()})
        for s, e in content.items():
            if e:
                out = out + Sym.of_symbol(LogAbs(Poly.of_symbol(s, 1, group)), group) * e
    if len(p.terms) == 1:
        (mono, c), = p.terms.items()
        for s, e in mono:
            if isinstance(s, Root):
                out = out + _log_poly(s.base, group) * Fraction(e, s.index)
            elif isinstance(s, Var):
                out = out + Sym.of_symbol(LogAbs(Poly.of_symbol(s, 1, group)), group) * e
            else:
                out = out + Sym.of_symbol(LogAbs(Poly.of_symbol(s, 1, group)), group) * e
        return out + _log_poly(Poly.constant(c, group), group)
    lm, lc = p.leading(sorted(p.symbols(), key=lambda s: s.key))
    if lc.is_monomial() and lc != 1:
        p = p.divide_scalar(lc)
        out = out + _log_poly(Poly.constant(lc, group), group)
    elif lc.sign() < 0:
        p = -p
    return out + Sym.of_symbol(LogAbs(p), group)


def sym_arctan(a) -> Sym:
    a = a if isinstance(a, Sym) else Sym.constant(a)
    group = a.group
    if a.is_zero():
        return a
    if a.is_constant():
        c = a.constant_value()
        if c.is_constant():
            return Sym.constant(K.arctan(c.constant_value()), group)
    if _looks_negative(a):
        return -sym_arctan(-a)
    return Sym.of_symbol(Arctan(a), group)


def sym_arcsin(a) -> Sym:
    a = a if isinstance(a, Sym) else Sym.constant(a)
    group = a.group
    if a.is_zero():
        return a
    if a.is_constant():
        c = a.constant_value()
        if c.is_constant():
            return Sym.constant(K.arcsin(c.constant_value()), group)
    if _looks_negative(a):
        return -sym_arcsin(-a)
    return Sym.of_symbol(Arcsin(a), group)


def _looks_negative(a: Sym) -> bool:
    """Canonical sign choice for odd functions: leading coefficient of the numerator."""
    if not a.num.terms:
        return False
    lm, lc = a.num.leading(sorted(a.num.symbols(), key=lambda s: s.key))
    return lc.terms and lc.terms[0][1].sign() < 0


# --- symbol calculus --------------------------------------------------------------------


def _symbol_derivative(s: Symbol, name: str, group) -> Sym:
    if isinstance(s, Var):
        return Sym.constant(1 if s.name == name else 0, group)
    if isinstance(s, _Lebesgue) or not s.depends_on(name):
        return Sym.zero(group)
    if isinstance(s, Root):
        db = s.base.derivative(name)
        return Sym.of_symbol(s, group) * db / (Sym(s.base) * s.index)
    if isinstance(s, LogAbs):
        return s.arg.derivative(name) / Sym(s.arg)
    if isinstance(s, Arctan):
        return s.arg.derivative(name) / (s.arg * s.arg + 1)
    if isinstance(s, Arcsin):
        return s.arg.derivative(name) * (1 - s.arg * s.arg) ** Fraction(-1, 2)
    raise UnsupportedIntegrand(f"no derivative rule for {s}")


def _substitute_symbol(s: Symbol, mapping: dict, cache: dict, group) -> Sym:
    if s in cache:
        return cache[s]
    if isinstance(s, Var):
        out = mapping.get(s.name) or Sym.of_symbol(s, group)
    elif not any(s.depends_on(n) for n in mapping):
        out = Sym.of_symbol(s, group)
    elif isinstance(s, Root):
        out = sym_root(s.base.substitute(mapping, cache), s.index)
    elif isinstance(s, LogAbs):
        out = sym_log(s.arg.substitute(mapping, cache))
    elif isinstance(s, Arctan):
        out = sym_arctan(s.arg.substitute(mapping))
    elif isinstance(s, Arcsin):
        out = sym_arcsin(s.arg.substitute(mapping))
    else:
        out = Sym.of_symbol(s, group)
    cache[s] = out
    return out


def _power_value(v: AlgebraElement, e: int) -> AlgebraElement:
    if e >= 0:
        return v ** e
    if not v.is_series():
        raise UnsupportedIntegrand("negative power of an element involving X")
    s = v.as_series()
    if s.is_zero():
        raise DivisionByZero("negative power of zero")
    return AlgebraElement.lift(s ** e, v.group)


def _evaluate_symbol(s: Symbol, env: dict, cache: dict, group) -> AlgebraElement:
    if s in cache:
        return cache[s]
    from .logexp import analytic_eval, extended_log
    if isinstance(s, Var):
        if s.name not in env:
            raise DomainError(f"no value for variable {s.name}")
        v = env[s.name]
        out = v if isinstance(v, AlgebraElement) else AlgebraElement.lift(v, group)
    elif isinstance(s, _Lebesgue):
        out = AlgebraElement.x_power(1, group)
    else:
        if isinstance(s, Root):
            b = _series_value(s.base.evaluate(env, cache))
            if b.is_zero():
                value = b
            elif b.sign() < 0:
                if s.index % 2 == 0:
                    raise DomainError(f"even root of negative value {b}")
                value = -((-b).nth_root(s.index))
            else:
                value = b.nth_root(s.index)
            out = AlgebraElement.lift(value, group)
        elif isinstance(s, LogAbs):
            b = _series_value(s.arg.evaluate(env, cache))
            if b.is_zero() or not b.terms:
                raise DomainError(f"logarithm of zero at {s.arg}")
            out = extended_log(abs(b))
        elif isinstance(s, Arctan):
            out = AlgebraElement.lift(analytic_eval("arctan", _series_value(s.arg.evaluate(env))), group)
        elif isinstance(s, Arcsin):
            out = AlgebraElement.lift(analytic_eval("arcsin", _series_value(s.arg.evaluate(env))), group)
        else:
            raise UnsupportedIntegrand(f"cannot evaluate {s}")
    cache[s] = out
    return out


def _series_value(v: AlgebraElement) -> Series:
    if not v.is_series():
        raise UnsupportedIntegrand(f"analytic function applied to {v}, which involves X")
    return v.as_series()


def _float_symbol(s: Symbol, env: dict, tau: float, cache: dict) -> float:
    if s in cache:
        return cache[s]
    if isinstance(s, Var):
        out = float(env[s.name])
    elif isinstance(s, _Lebesgue):
        out = math.log(1 / tau)
    elif isinstance(s, Root):
        b = s.base.to_float(env, tau, cache)
        out = math.copysign(abs(b) ** (1 / s.index), b) if s.index % 2 else math.sqrt(b)
    elif isinstance(s, LogAbs):
        out = math.log(abs(s.arg.to_float(env, tau, cache)))
    elif isinstance(s, Arctan):
        out = math.atan(s.arg.to_float(env, tau))
    elif isinstance(s, Arcsin):
        out = math.asin(max(-1.0, min(1.0, s.arg.to_float(env, tau))))
    else:
        raise UnsupportedIntegrand(f"cannot evaluate {s}")
    cache[s] = out
    return out
