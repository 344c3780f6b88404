"""Sets, regions and integrand expressions of the semialgebraic fragment.

An :class:`Expr` is kept in piecewise normal form: a tuple of pieces, each a
conjunction of sign conditions on symbolic guards together with a symbolic
value.  The conditions of different pieces are mutually exclusive and cover
everything, so ``abs`` and ``piecewise`` reduce to bookkeeping.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from fractions import Fraction
from typing import Iterable

from .algebra import AlgebraElement
from .errors import DomainError, PrecisionExhausted, UnsupportedIntegrand
from .exponents import QQ
from .integrate import sym_sign
from .series import Series
from .symbolic import (LEBESGUE, Sym, Var, sym_arcsin, sym_arctan, sym_log, sym_root)

__all__ = [
    "Guard", "Expr", "Infinity", "POS_INF", "NEG_INF", "Interval", "SetOneD", "Region",
    "normalize", "eval_expr", "translate", "box", "as_sym", "compare_points",
]

_NEGATE = {"<": ">=", ">=": "<", ">": "<=", "<=": ">", "==": "!=", "!=": "=="}


def as_sym(value, group=QQ) -> Sym:
    if isinstance(value, Sym):
        return value
    if isinstance(value, Expr):
        return value.single()
    if isinstance(value, str):
        return Sym.of_symbol(Var(value), group)
    return Sym.constant(value, group)


def _holds(sign: int, rel: str) -> bool:
    return {"<": sign < 0, "<=": sign <= 0, ">": sign > 0, ">=": sign >= 0,
            "==": sign == 0, "!=": sign != 0}[rel]


@dataclass(frozen=True)
class Guard:
    """The condition ``expr rel 0``."""

    expr: Sym
    rel: str

    def negate(self) -> "Guard":
        return Guard(self.expr, _NEGATE[self.rel])

    def decide(self, sign: int) -> bool:
        return _holds(sign, self.rel)

    def constant_truth(self):
        """True/False when the guard does not depend on any variable, else None."""
        if self.expr.free_vars():
            return None
        return self.decide(_sign_of(self.expr))

    def __str__(self):
        return f"{self.expr} {self.rel} 0"


def _sign_of(s: Sym) -> int:
    if s.is_zero():
        return 0
    if not s.free_vars():
        return int(s.evaluate({}).sign())
    sign = sym_sign(s)
    if sign == 0:
        raise PrecisionExhausted(f"sign of {s} is undetermined")
    return sign


class Expr:
    """Piecewise symbolic expression: pieces of (conditions, value)."""

    __slots__ = ("pieces", "group")

    def __init__(self, pieces: Iterable, group=QQ):
        kept = []
        for conds, value in pieces:
            out = []
            dead = False
            for g in conds:
                truth = g.constant_truth()
                if truth is False:
                    dead = True
                    break
                if truth is None and g not in out:
                    out.append(g)
            if not dead and _feasible(out):
                kept.append((tuple(out), value))
        if not kept:
            raise DomainError("piecewise expression with no live branch")
        self.pieces = tuple(kept)
        self.group = group

    @classmethod
    def of(cls, value, group=QQ) -> "Expr":
        if isinstance(value, Expr):
            return value
        if isinstance(value, (Sym, Series, AlgebraElement)):
            group = value.group
        return cls([((), as_sym(value, group))], group)

    @classmethod
    def variable(cls, name: str, group=QQ) -> "Expr":
        return cls.of(Sym.of_symbol(Var(name), group), group)

    @classmethod
    def lebesgue(cls, group=QQ) -> "Expr":
        return cls.of(Sym.of_symbol(LEBESGUE, group), group)

    @classmethod
    def piecewise(cls, branches, default) -> "Expr":
        """branches: list of (list of Guard, Expr); the first true branch wins."""
        group = default.group if isinstance(default, Expr) else QQ
        pieces = []
        previous: list = []
        for guards, value in branches:
            value = Expr.of(value, group)
            # not(previous_1) and ... and guards; each negated branch splits
            for prefix in _negations(previous):
                for conds, v in value.pieces:
                    pieces.append((prefix + tuple(guards) + conds, v))
            previous.append(tuple(guards))
        for prefix in _negations(previous):
            for conds, v in Expr.of(default, group).pieces:
                pieces.append((prefix + conds, v))
        return cls(pieces, group)

    # --- inspection ---------------------------------------------------------------

    def is_single(self) -> bool:
        return len(self.pieces) == 1 and not self.pieces[0][0]

    def single(self) -> Sym:
        if not self.is_single():
            raise UnsupportedIntegrand(f"{self} is piecewise here")
        return self.pieces[0][1]

    def free_vars(self) -> frozenset:
        out = frozenset()
        for conds, value in self.pieces:
            out |= value.free_vars()
            for g in conds:
                out |= g.expr.free_vars()
        return out

    def depends_on(self, name: str) -> bool:
        return name in self.free_vars()

    def guards(self) -> list:
        out = []
        for conds, _ in self.pieces:
            for g in conds:
                if g.expr not in [h.expr for h in out]:
                    out.append(g)
        return out

    # --- arithmetic -----------------------------------------------------------------

    def _combine(self, other, op) -> "Expr":
        other = Expr.of(other, self.group)
        pieces = []
        for c1, v1 in self.pieces:
            for c2, v2 in other.pieces:
                pieces.append((c1 + c2, op(v1, v2)))
        return Expr(pieces, self.group)

    def map(self, fn) -> "Expr":
        return Expr([(c, fn(v)) for c, v in self.pieces], self.group)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __radd__(self, other):
        return Expr.of(other, self.group) + self

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return Expr.of(other, self.group) - self

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return Expr.of(other, self.group) * self

    def __truediv__(self, other):
        return self._combine(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return Expr.of(other, self.group) / self

    def __neg__(self):
        return self.map(lambda v: -v)

    def __pow__(self, q):
        q = Fraction(q)
        return self.map(lambda v: v ** q)

    def abs(self) -> "Expr":
        pieces = []
        for conds, v in self.pieces:
            if not v.free_vars():
                pieces.append((conds, v if _sign_of(v) >= 0 else -v))
                continue
            g = Guard(v, ">=")
            pieces.append((conds + (g,), v))
            pieces.append((conds + (g.negate(),), -v))
        return Expr(pieces, self.group)

    def apply(self, name: str) -> "Expr":
        """sqrt, log, arctan, arcsin or exp applied piecewise."""
        fn = {"sqrt": lambda v: sym_root(v, 2), "log": sym_log, "arctan": sym_arctan,
              "arcsin": sym_arcsin, "exp": _sym_exp}[name]
        return self.map(fn)

    # --- calculus -------------------------------------------------------------------

    def derivative(self, name: str) -> "Expr":
        return self.map(lambda v: v.derivative(name))

    def substitute(self, mapping: dict) -> "Expr":
        mapping = {k: as_sym(v, self.group) for k, v in mapping.items()}
        pieces = []
        for conds, v in self.pieces:
            pieces.append((tuple(Guard(g.expr.substitute(mapping), g.rel) for g in conds),
                           v.substitute(mapping)))
        return Expr(pieces, self.group)

    def select(self, env_sign) -> Sym:
        """The value of the piece whose conditions hold; env_sign(guard_expr) -> sign."""
        for conds, v in self.pieces:
            if all(g.decide(env_sign(g.expr)) for g in conds):
                return v
        raise DomainError("no branch applies")

    def equals(self, other) -> bool:
        """Equal values on every cell of the common refinement."""
        other = Expr.of(other, self.group)
        if self.is_single() and other.is_single():
            return self.single().equals(other.single())
        return all(v.is_zero() for _, v in (self - other).pieces)

    def __eq__(self, other):
        if not isinstance(other, (Expr, Sym)):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        return hash(str(self))

    def __str__(self):
        if self.is_single():
            return str(self.single())
        parts = []
        for conds, v in self.pieces:
            cond = " and ".join(str(g) for g in conds) or "true"
            parts.append(f"{cond}: {v}")
        return "piecewise(" + ", ".join(parts) + ")"

    def __repr__(self):
        return f"Expr({str(self)!r})"


def _linear_constraint(g: Guard):
    """(variable, root, relation) when g is linear in one variable with constant coefficients."""
    names = g.expr.free_vars()
    if len(names) != 1 or g.expr.den:
        return None
    (v,) = names
    coeffs = g.expr.num.coefficients_in(Var(v))
    if set(coeffs) - {0, 1} or 1 not in coeffs:
        return None
    a, b = coeffs[1], coeffs.get(0)
    if not (a.is_constant() and (b is None or b.is_constant())):
        return None
    a = a.constant_value()
    root = Sym.zero(g.expr.group) if b is None else Sym.constant(-b.constant_value() / a, g.expr.group)
    rel = g.rel if a.sign() > 0 else {"<": ">", "<=": ">=", ">": "<", ">=": "<="}.get(g.rel, g.rel)
    return v, root, rel


def _feasible(conds) -> bool:
    """False only when linear one-variable guards visibly contradict each other."""
    lower: dict = {}
    upper: dict = {}
    points: dict = {}
    for g in conds:
        c = _linear_constraint(g)
        if c is None:
            continue
        v, r, rel = c
        if rel in (">", ">="):
            cur = lower.get(v)
            d = 1 if cur is None else compare_points(r, cur[0])
            if d > 0 or (d == 0 and rel == ">"):
                lower[v] = (r, rel == ">=")
        elif rel in ("<", "<="):
            cur = upper.get(v)
            d = -1 if cur is None else compare_points(r, cur[0])
            if d < 0 or (d == 0 and rel == "<"):
                upper[v] = (r, rel == "<=")
        elif rel == "==":
            points.setdefault(v, []).append(r)
    for v in set(lower) | set(upper) | set(points):
        lo, hi = lower.get(v), upper.get(v)
        if lo and hi:
            d = compare_points(lo[0], hi[0])
            if d > 0 or (d == 0 and not (lo[1] and hi[1])):
                return False
        for p in points.get(v, []):
            if lo and (compare_points(p, lo[0]) < 0 or (compare_points(p, lo[0]) == 0 and not lo[1])):
                return False
            if hi and (compare_points(p, hi[0]) > 0 or (compare_points(p, hi[0]) == 0 and not hi[1])):
                return False
    return True


def _negations(previous: list) -> list:
    """Condition prefixes for 'none of the previous conjunctions holds'."""
    prefixes = [()]
    for conj in previous:
        nxt = []
        for prefix in prefixes:
            for i, g in enumerate(conj):
                # not(g_1 and ... and g_k) = first failing guard i
                nxt.append(prefix + tuple(conj[:i]) + (g.negate(),))
        prefixes = nxt
    return prefixes


def _sym_exp(v: Sym) -> Sym:
    if v.free_vars():
        raise UnsupportedIntegrand("exp of a non-constant expression")
    from .logexp import partial_exp
    value = v.evaluate({})
    if not value.is_series():
        raise UnsupportedIntegrand("exp of an element involving X")
    return Sym.constant(partial_exp(value.as_series()), v.group)


def eval_expr(e, point: dict):
    """Value at a point given as {name: Series}; returns a Series when X-free."""
    e = Expr.of(e)
    env = {k: (v if isinstance(v, (Series, AlgebraElement)) else Series.constant(v, e.group))
           for k, v in point.items()}

    def sign(g: Sym) -> int:
        return int(g.evaluate(env).sign())

    value = e.select(sign).evaluate(env)
    return value.as_series() if value.is_series() else value


# --- one-dimensional sets ------------------------------------------------------------


@dataclass(frozen=True)
class Infinity:
    sign: int

    def __str__(self):
        return "inf" if self.sign > 0 else "-inf"

    def __neg__(self):
        return Infinity(-self.sign)


POS_INF = Infinity(1)
NEG_INF = Infinity(-1)


def compare_points(a, b) -> int:
    """Sign of a - b for endpoints (Sym or Infinity)."""
    if isinstance(a, Infinity) or isinstance(b, Infinity):
        sa = a.sign * 2 if isinstance(a, Infinity) else 0
        sb = b.sign * 2 if isinstance(b, Infinity) else 0
        return (sa > sb) - (sa < sb)
    return _sign_of(a - b)


def _point(value, group=QQ):
    return value if isinstance(value, Infinity) else as_sym(value, group)


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", _point(self.lo))
        object.__setattr__(self, "hi", _point(self.hi))
        if isinstance(self.lo, Infinity):
            object.__setattr__(self, "lo_closed", False)
        if isinstance(self.hi, Infinity):
            object.__setattr__(self, "hi_closed", False)

    @classmethod
    def point(cls, a) -> "Interval":
        return cls(a, a, True, True)

    def is_empty(self) -> bool:
        c = compare_points(self.lo, self.hi)
        return c > 0 or (c == 0 and not (self.lo_closed and self.hi_closed))

    def is_point(self) -> bool:
        return compare_points(self.lo, self.hi) == 0 and not self.is_empty()

    def is_bounded(self) -> bool:
        return not isinstance(self.lo, Infinity) and not isinstance(self.hi, Infinity)

    def shifted(self, c: Sym) -> "Interval":
        move = (lambda p: p if isinstance(p, Infinity) else p + c)
        return Interval(move(self.lo), move(self.hi), self.lo_closed, self.hi_closed)

    def __str__(self):
        if self.is_point():
            return "{" + str(self.lo) + "}"
        left = "[" if self.lo_closed else "]"
        right = "]" if self.hi_closed else "["
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class SetOneD:
    components: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def interval(cls, a, b, lo_closed=True, hi_closed=True) -> "SetOneD":
        return cls((Interval(a, b, lo_closed, hi_closed),))

    def union(self, other: "SetOneD") -> "SetOneD":
        return SetOneD(self.components + other.components)

    def is_empty(self) -> bool:
        return all(c.is_empty() for c in self.components)

    def __str__(self):
        comps = [c for c in self.components if not c.is_empty()]
        return " u ".join(str(c) for c in comps) if comps else "{}"


def normalize(s: SetOneD) -> SetOneD:
    """Disjoint components sorted from left to right."""
    comps = [c for c in s.components if not c.is_empty()]
    if not comps:
        return SetOneD(())

    def before(a: Interval, b: Interval) -> int:
        c = compare_points(a.lo, b.lo)
        if c:
            return c
        return (b.lo_closed > a.lo_closed) - (a.lo_closed > b.lo_closed)

    comps.sort(key=cmp_to_key(before))
    out = [comps[0]]
    for nxt in comps[1:]:
        cur = out[-1]
        c = compare_points(nxt.lo, cur.hi)
        if c < 0 or (c == 0 and (cur.hi_closed or nxt.lo_closed)):
            d = compare_points(nxt.hi, cur.hi)
            if d > 0 or (d == 0 and nxt.hi_closed):
                out[-1] = Interval(cur.lo, nxt.hi, cur.lo_closed, nxt.hi_closed if d > 0 else True)
        else:
            out.append(nxt)
    return SetOneD(tuple(out))


def translate(s: SetOneD, c) -> SetOneD:
    c = as_sym(c)
    return SetOneD(tuple(comp.shifted(c) for comp in s.components))


# --- cylindrical regions ---------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """{(x_1, ..., x_n): x_1 in base, lower_k(x_1..x_(k-1)) <= x_k <= upper_k(...)}."""

    variables: tuple
    base: SetOneD
    bounds: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "bounds", tuple((_point(lo), _point(hi)) for lo, hi in self.bounds))
        if len(self.bounds) != len(self.variables) - 1:
            raise ValueError("a region needs one bound pair per variable after the first")

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def is_box(self) -> bool:
        return all(all(isinstance(p, Infinity) or not p.free_vars() for p in pair)
                   for pair in self.bounds)

    def __str__(self):
        parts = [f"{self.variables[0]} in {self.base}"]
        for v, (lo, hi) in zip(self.variables[1:], self.bounds):
            parts.append(f"{v} in [{lo}, {hi}]")
        return "region " + "; ".join(parts)


def box(*intervals, variables=None) -> Region:
    """Product of bounded intervals, each given as Interval, SetOneD or (lo, hi)."""
    sides = []
    for iv in intervals:
        if isinstance(iv, SetOneD):
            if len(iv.components) != 1:
                raise ValueError("box sides must be single intervals")
            iv = iv.components[0]
        if not isinstance(iv, Interval):
            iv = Interval(*iv)
        sides.append(iv)
    if not sides:
        raise ValueError("a box needs at least one side")
    names = tuple(variables) if variables else tuple(f"x{i + 1}" for i in range(len(sides)))
    return Region(names, SetOneD((sides[0],)), tuple((iv.lo, iv.hi) for iv in sides[1:]))

