"""Finitely generated archimedean value groups inside (R, +)."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import cmp_to_key

from .constants import Ordering, RealConstant, as_constant, compare
from .errors import DomainError

__all__ = ["ExponentGroup", "Exponent", "QQ", "compare_exponents", "embed"]


class ExponentGroup:
    """The Q-span of fixed real basis values b_1, ..., b_k.

    Two generators with a rational ratio are rejected.  Wider linear
    dependencies over Q are the caller's responsibility.
    """

    def __init__(self, basis, name: str | None = None):
        self.basis = tuple(as_constant(b) for b in basis)
        if not self.basis:
            raise ValueError("a value group needs at least one generator")
        for i, b in enumerate(self.basis):
            if b.is_zero() or any((c / b).is_rational for c in self.basis[i + 1:]):
                raise ValueError(f"the generators {', '.join(map(str, basis))} are dependent over Q")
        self.rank = len(self.basis)
        self.name = name or " + ".join(
            "Q" if b == 1 else f"Q*{b}" for b in self.basis)
        self._rational_line = self.rank == 1 and self.basis[0].is_rational
        self._first_sign = self.basis[0].sign() if self.rank == 1 else 0
        self._cmp_cache: dict = {}
        self.zero = Exponent(self, (Fraction(0),) * self.rank)

    def __repr__(self):
        return f"ExponentGroup({self.name!r})"

    def __eq__(self, other):
        return isinstance(other, ExponentGroup) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __call__(self, *coords) -> "Exponent":
        if len(coords) == 1 and self.rank > 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) == 1 and self.rank > 1:
            coords = (coords[0],) + (0,) * (self.rank - 1)
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates")
        return Exponent(self, tuple(Fraction(c) for c in coords))

    def coerce(self, x) -> "Exponent":
        if isinstance(x, Exponent):
            if x.group != self:
                raise ValueError("exponents from different groups")
            return x
        if isinstance(x, (int, Fraction, str)):
            if self.basis[0] != 1:
                raise TypeError("plain numbers are exponents only when the first generator is 1")
            return self(Fraction(x))
        raise TypeError(f"cannot read {x!r} as an exponent")

    def embed(self, e: "Exponent") -> RealConstant:
        total = RealConstant(0)
        for c, b in zip(e.coords, self.basis):
            if c:
                total = total + b * c
        return total

    def coordinates(self, value) -> "Exponent":
        """The exponent whose embedding is ``value``; DomainError if outside the group."""
        value = as_constant(value)
        if self._rational_line and value.is_rational:
            return self(value.as_fraction() / self.basis[0].as_fraction())
        monos = {}
        columns = []
        for b in self.basis + (value,):
            col = {}
            for c, m in b.terms():
                monos.setdefault(m, len(monos))
                col[monos[m]] = c
            columns.append(col)
        rows = [[col.get(i, Fraction(0)) for col in columns] for i in range(len(monos))]
        solution = _solve_rational(rows, self.rank)
        if solution is None:
            raise DomainError(f"{value} is not in the value group {self.name}")
        return self(*solution)

    def compare(self, a: "Exponent", b: "Exponent") -> int:
        if a.coords == b.coords:
            return 0
        if self.rank == 1:
            d = (a.coords[0] - b.coords[0]) * self._first_sign
            return (d > 0) - (d < 0)
        diff = tuple(x - y for x, y in zip(a.coords, b.coords))
        cached = self._cmp_cache.get(diff)
        if cached is None:
            cached = int(compare(self.embed(Exponent(self, diff)), 0))
            self._cmp_cache[diff] = cached
            self._cmp_cache[tuple(-x for x in diff)] = -cached
        return cached

    def sort_key(self):
        if self.rank == 1:
            s = self._first_sign
            return lambda e: e.coords[0] * s
        return cmp_to_key(self.compare)

    def archimedean_witness(self, a: "Exponent", b: "Exponent") -> int:
        """Smallest n >= 1 with |a| <= n |b|, for b != 0."""
        if b.is_zero():
            raise ValueError("witness needs a nonzero comparison element")
        ra, rb = abs(self.embed(a)), abs(self.embed(b))
        n = max(1, math.ceil(float(ra) / float(rb)))
        while n > 1 and compare(ra, rb * (n - 1)) is not Ordering.GREATER:
            n -= 1
        while compare(ra, rb * n) is Ordering.GREATER:
            n += 1
        return n


class Exponent:
    __slots__ = ("group", "coords", "_hash")

    def __init__(self, group: ExponentGroup, coords: tuple):
        self.group = group
        self.coords = coords
        self._hash = None

    def _other(self, other):
        if isinstance(other, Exponent):
            if other.group is not self.group and other.group != self.group:
                raise ValueError("exponents from different groups")
            return other
        return self.group.coerce(other)

    def __add__(self, other):
        other = self._other(other)
        return Exponent(self.group, tuple(x + y for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return Exponent(self.group, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return Exponent(self.group, tuple(-x for x in self.coords))

    def __mul__(self, q):
        q = Fraction(q)
        return Exponent(self.group, tuple(x * q for x in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, q):
        q = Fraction(q)
        return Exponent(self.group, tuple(x / q for x in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def sign(self) -> int:
        return self.group.compare(self, self.group.zero)

    def embed(self) -> RealConstant:
        return self.group.embed(self)

    def as_fraction(self) -> Fraction:
        """The real value when it is rational (rank-one group with basis 1)."""
        value = self.embed()
        return value.as_fraction()

    def __eq__(self, other):
        if not isinstance(other, Exponent):
            try:
                other = self.group.coerce(other)
            except TypeError:
                return NotImplemented
        return self.coords == other.coords and self.group == other.group

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords)
        return self._hash

    def __lt__(self, other):
        return self.group.compare(self, self._other(other)) < 0

    def __le__(self, other):
        return self.group.compare(self, self._other(other)) <= 0

    def __gt__(self, other):
        return self.group.compare(self, self._other(other)) > 0

    def __ge__(self, other):
        return self.group.compare(self, self._other(other)) >= 0

    def __str__(self):
        if self.group.rank == 1 and self.group.basis[0] == 1:
            q = self.coords[0]
            return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        return str(self.embed())

    def __repr__(self):
        return f"Exponent({', '.join(str(c) for c in self.coords)})"


def _solve_rational(rows, n):
    """Solve an augmented system over Q with n unknowns; None if inconsistent."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][col]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[n] != 0 and not any(row[:n]) for row in rows):
        return None
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = rows[i][n]
    return sol


QQ = ExponentGroup([1], "Q")


def embed(e: Exponent) -> RealConstant:
    return e.group.embed(e)


def compare_exponents(a: Exponent, b: Exponent) -> Ordering:
    return Ordering(a.group.compare(a, b))
