"""Closed-form antiderivatives on the integrable fragment.

Supported integrands in the variable ``v`` (other symbols act as parameters):

* rational functions whose denominator factors into pieces of degree <= 2;
* a single radical ``(a v + b)^(1/k)`` times a rational function, by the
  substitution ``w = (a v + b)^(1/k)``;
* a single square root of a quadratic times a polynomial, or divided by it;
* polynomial-like multiples of ``log|.|``, ``arctan`` and ``arcsin`` atoms,
  by parts.

Anything else raises :class:`UnsupportedIntegrand`; nothing is approximated.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import NonlinearFactorRequired, PrecisionExhausted, UnsupportedIntegrand
from .symbolic import (Arcsin, Arctan, LogAbs, Poly, Root, Sym, Var, known_sign,
                       sym_arcsin, sym_arctan, sym_log, sym_root)

__all__ = ["antiderivative", "UPoly", "sym_sign", "real_roots", "poly_roots"]

_MAX_DEPTH = 6


def sym_sign(s: Sym) -> int:
    """Certified sign of a symbolic quantity on the current assumptions, 0 if unknown."""
    if s.is_zero():
        return 0
    if s.is_constant():
        return int(s.constant_value().sign())
    sign = known_sign(s.num)
    for p, m in s.den:
        if m % 2 == 0:
            continue
        sign *= known_sign(p)
    return sign


# --- univariate polynomials with symbolic coefficients ---------------------------


class UPoly:
    """Polynomial in one variable with Sym coefficients (index = degree)."""

    __slots__ = ("coeffs", "group")

    def __init__(self, coeffs, group):
        cs = list(coeffs)
        while cs and cs[-1].known_zero():
            cs.pop()
        self.coeffs = cs
        self.group = group

    @classmethod
    def from_poly(cls, p: Poly, v: str) -> "UPoly":
        parts = p.coefficients_in(Var(v))
        if any(e < 0 for e in parts):
            raise UnsupportedIntegrand("negative power in a polynomial")
        top = max(parts, default=-1)
        return cls([Sym(parts.get(i, Poly({}, p.group))) for i in range(top + 1)], p.group)

    def _zero(self):
        return Sym.zero(self.group)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Sym:
        return self.coeffs[-1]

    def coeff(self, i) -> Sym:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self._zero()

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly([self.coeff(i) + other.coeff(i) for i in range(n)], self.group)

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly([self.coeff(i) - other.coeff(i) for i in range(n)], self.group)

    def __mul__(self, other):
        if isinstance(other, Sym):
            return UPoly([c * other for c in self.coeffs], self.group)
        if self.is_zero() or other.is_zero():
            return UPoly([], self.group)
        out = [self._zero() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.known_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.known_zero():
                    out[i + j] = out[i + j] + a * b
        return UPoly(out, self.group)

    def __pow__(self, n: int):
        result = UPoly([Sym.constant(1, self.group)], self.group)
        for _ in range(n):
            result = result * self
        return result

    def divmod(self, other: "UPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inv = other.lc().inverse()
        rem = list(self.coeffs)
        q = [self._zero() for _ in range(max(len(rem) - len(other.coeffs) + 1, 0))]
        d = other.degree
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c.known_zero():
                continue
            f = c * inv
            q[i - d] = f
            for j, b in enumerate(other.coeffs):
                rem[i - d + j] = rem[i - d + j] - f * b
            rem[i] = self._zero()
        return UPoly(q, self.group), UPoly(rem[:d], self.group)

    def monic(self) -> tuple:
        lc = self.lc()
        inv = lc.inverse()
        return lc, UPoly([c * inv for c in self.coeffs[:-1]] + [Sym.constant(1, self.group)], self.group)

    def derivative(self) -> "UPoly":
        return UPoly([c * i for i, c in enumerate(self.coeffs)][1:], self.group)

    def to_sym(self, v: str) -> Sym:
        x = Sym.of_symbol(Var(v), self.group)
        total = self._zero()
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def at(self, value: Sym) -> Sym:
        total = self._zero()
        for c in reversed(self.coeffs):
            total = total * value + c
        return total

    def equals(self, other: "UPoly") -> bool:
        return (self - other).is_zero()

    def __str__(self):
        return " + ".join(f"({c})*v^{i}" for i, c in enumerate(self.coeffs)) or "0"


def _inverse_mod(a: UPoly, m: UPoly) -> UPoly:
    """s with s * a = 1 modulo m (a and m coprime)."""
    group = a.group
    one = UPoly([Sym.constant(1, group)], group)
    r0, r1 = m, a.divmod(m)[1]
    s0, s1 = UPoly([], group), one
    guard = 0
    while not r1.is_zero():
        guard += 1
        if guard > 64:
            raise UnsupportedIntegrand("extended Euclid did not terminate")
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise UnsupportedIntegrand("denominator factors are not coprime")
    return s0 * r0.coeffs[0].inverse()


def _gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd over the coefficient field."""
    guard = 0
    while not b.is_zero():
        guard += 1
        if guard > 64:
            raise UnsupportedIntegrand("gcd computation did not terminate")
        a, b = b, a.divmod(b)[1]
    return a.monic()[1] if a.degree >= 0 else a


# --- rational functions ----------------------------------------------------------------


class _Factor:
    """Monic irreducible factor: ('linear', root) or ('quadratic', p, q) for v^2 + p v + q."""

    __slots__ = ("kind", "poly", "data")

    def __init__(self, kind, poly, data):
        self.kind, self.poly, self.data = kind, poly, data


def _split_rational(f: Sym, v: str):
    """f = scalar * N(v) / prod(F_i^m_i) with monic factors of degree <= 2."""
    group = f.group
    x = Var(v)
    scalar = Sym.constant(1, group)
    parts = f.num.coefficients_in(x)
    low = min(parts, default=0)
    factors: list = []
    if low < 0:
        factors.append((UPoly([Sym.zero(group), Sym.constant(1, group)], group), -low))
        parts = {e - low: p for e, p in parts.items()}
    top = max(parts, default=-1)
    num = UPoly([Sym(parts.get(i, Poly({}, group))) for i in range(top + 1)], group)
    for p, m in f.den:
        if not p.depends_on(v):
            scalar = scalar / (Sym(p) ** m)
            continue
        if any(s.depends_on(v) and not isinstance(s, Var) for s in p.symbols()):
            raise UnsupportedIntegrand(f"denominator {p} is not polynomial in {v}")
        factors.append((UPoly.from_poly(p, v), m))
    irreducible: list = []
    for poly, m in factors:
        lc, monic = poly.monic()
        scalar = scalar / (lc ** m)
        for fac, k in _factor_monic(monic, v):
            for entry in irreducible:
                if entry[0].poly.equals(fac.poly):
                    entry[1] += k * m
                    break
            else:
                irreducible.append([fac, k * m])
    return scalar, num, irreducible


def _factor_monic(poly: UPoly, v: str):
    group = poly.group
    one = Sym.constant(1, group)
    d = poly.degree
    if d == 1:
        return [(_Factor("linear", poly, -poly.coeff(0)), 1)]
    if d == 2:
        p, q = poly.coeff(1), poly.coeff(0)
        disc = p * p - q * 4
        s = sym_sign(disc) if not disc.known_zero() else 0
        if disc.known_zero():
            root = -p / 2
            return [(_Factor("linear", UPoly([-root, one], group), root), 2)]
        if s == 0:
            raise NonlinearFactorRequired(f"cannot decide whether {poly.to_sym(v)} splits")
        if s > 0:
            r = sym_root(disc, 2)
            a = (-p + r) / 2
            b = (-p - r) / 2
            return [(_Factor("linear", UPoly([-a, one], group), a), 1),
                    (_Factor("linear", UPoly([-b, one], group), b), 1)]
        return [(_Factor("quadratic", poly, (p, q)), 1)]
    if d > 2 and poly.coeff(0).known_zero():
        rest = UPoly(poly.coeffs[1:], group)
        out = [(_Factor("linear", UPoly([Sym.zero(group), one], group), Sym.zero(group)), 1)]
        return out + _factor_monic(rest, v)
    if d > 2:
        g = _gcd(poly, poly.derivative())
        if g.degree > 0:
            return _factor_monic(g, v) + _factor_monic(poly.divmod(g)[0], v)
    raise NonlinearFactorRequired(
        f"denominator factor {poly.to_sym(v)} has degree {d}; supply a factorization")


def _rational_antiderivative(f: Sym, v: str) -> Sym:
    group = f.group
    if not f.depends_on(v):
        return f * Sym.of_symbol(Var(v), group)
    scalar, num, factors = _split_rational(f, v)
    x = Sym.of_symbol(Var(v), group)
    if not factors:
        return _integrate_polynomial(num, v) * scalar
    den = UPoly([Sym.constant(1, group)], group)
    powers = []
    for fac, m in factors:
        g = fac.poly ** m
        powers.append(g)
        den = den * g
    quotient, rem = num.divmod(den)
    total = _integrate_polynomial(quotient, v)
    for j, (fac, m) in enumerate(factors):
        if rem.is_zero():
            break
        others = UPoly([Sym.constant(1, group)], group)
        for i, g in enumerate(powers):
            if i != j:
                others = others * g
        part = rem if len(factors) == 1 else (rem * _inverse_mod(others, powers[j])).divmod(powers[j])[1]
        # F-adic expansion: part = sum r_i F^i
        for i in range(m):
            part, r = part.divmod(fac.poly)
            if r.is_zero():
                continue
            total = total + _integrate_simple(r, fac, m - i, v, x)
    return total * scalar


def _integrate_polynomial(p: UPoly, v: str) -> Sym:
    return UPoly([Sym.zero(p.group)] + [c / (i + 1) for i, c in enumerate(p.coeffs)], p.group).to_sym(v)


def _integrate_simple(r: UPoly, fac: _Factor, e: int, v: str, x: Sym) -> Sym:
    """Antiderivative of r / F^e with deg r < deg F."""
    group = r.group
    if fac.kind == "linear":
        c = r.coeff(0)
        base = x - fac.data
        if e == 1:
            return c * sym_log(base)
        return c * (base ** (1 - e)) / (1 - e)
    p, q = fac.data
    alpha, beta = r.coeff(1), r.coeff(0)
    w = x + p / 2
    c2 = q - p * p / 4
    quad = fac.poly.to_sym(v)
    out = Sym.zero(group)
    if not alpha.known_zero():
        if e == 1:
            out = out + alpha / 2 * sym_log(quad)
        else:
            out = out + alpha / 2 * (quad ** (1 - e)) / (1 - e)
    gamma = beta - alpha * p / 2
    if not gamma.known_zero():
        out = out + gamma * _arctan_power(w, c2, quad, e)
    return out


def _arctan_power(w: Sym, c2: Sym, quad: Sym, e: int) -> Sym:
    """Antiderivative of 1 / (w^2 + c^2)^e in w, where quad = w^2 + c^2."""
    c = sym_root(c2, 2)
    result = sym_arctan(w / c) / c
    for k in range(2, e + 1):
        result = w / ((quad ** (k - 1)) * c2 * (2 * (k - 1))) + result * Fraction(2 * k - 3, 2 * (k - 1)) / c2
    return result


# --- radicals ----------------------------------------------------------------------------


def _quadratic_radical(poly: UPoly, atom: Root, v: str) -> Sym:
    """Antiderivative of P(v) / sqrt(B(v)) with B quadratic."""
    group = poly.group
    base = UPoly.from_poly(atom.base, v)
    if base.degree != 2:
        raise UnsupportedIntegrand(f"square root of {atom.base} is not quadratic in {v}")
    A, Bc, C = base.coeff(2), base.coeff(1), base.coeff(0)
    p = Sym.of_symbol(atom, group)
    residual = poly
    n = poly.degree
    r = [Sym.zero(group) for _ in range(max(n, 0))]
    for i in range(n - 1, -1, -1):
        ri = residual.coeff(i + 1) / (A * (i + 1))
        r[i] = ri
        step = UPoly([Sym.zero(group)] * (i - 1) + [C * i, Bc * Fraction(2 * i + 1, 2), A * (i + 1)]
                     if i >= 1 else [Bc * Fraction(1, 2), A], group)
        residual = residual - step * ri
    if residual.degree > 0:
        raise UnsupportedIntegrand("radical reduction left a non-constant residual")
    lam = residual.coeff(0)
    out = UPoly(r, group).to_sym(v) * p
    if lam.known_zero():
        return out
    x = Sym.of_symbol(Var(v), group)
    w = x + Bc / (A * 2)
    s = sym_sign(A)
    if s > 0:
        sa = sym_root(A, 2)
        return out + lam * sym_log(sa * w + p) / sa
    if s < 0:
        e = C / A - Bc * Bc / (A * A * 4)
        m = sym_root(-e, 2)
        sn = sym_root(-A, 2)
        return out + lam * sym_arcsin(w / m) / sn
    raise UnsupportedIntegrand(f"cannot decide the sign of {A}")


def _linear_radical(R: Sym, atom: Root, j: int, v: str, depth: int) -> Sym:
    """Antiderivative of R(v) * p^j with p = (a v + b)^(1/k), via w = p."""
    group = R.group
    base = UPoly.from_poly(atom.base, v)
    a, b = base.coeff(1), base.coeff(0)
    k = atom.index
    w_name = f"_w{depth}"
    w = Sym.of_symbol(Var(w_name), group)
    v_expr = (w ** k - b) / a
    integrand = R.substitute({v: v_expr}) * (w ** (j + k - 1)) * k / a
    result = _antiderivative(integrand, w_name, depth + 1)
    return result.substitute({w_name: Sym.of_symbol(atom, group)})


# --- dispatcher ---------------------------------------------------------------------------


def _split_by_atoms(f: Sym, v: str) -> dict:
    group = f.group
    for p, _ in f.den:
        if any(s.depends_on(v) and not isinstance(s, Var) for s in p.symbols()):
            raise UnsupportedIntegrand(f"denominator {p} involves a transcendental or radical in {v}")
    groups: dict = {}
    for m, c in f.num.terms.items():
        atom_part = tuple((s, e) for s, e in m if s.depends_on(v) and not isinstance(s, Var))
        rest = tuple((s, e) for s, e in m if not (s.depends_on(v) and not isinstance(s, Var)))
        groups.setdefault(atom_part, {})[rest] = c
    return {k: Sym(Poly(terms, group), f.den, group) for k, terms in groups.items()}


def antiderivative(f: Sym, v: str) -> Sym:
    """A symbolic F with dF/dv = f on every cell."""
    return _antiderivative(f, v, 0)


def _antiderivative(f: Sym, v: str, depth: int) -> Sym:
    if depth > _MAX_DEPTH:
        raise UnsupportedIntegrand("integration by parts does not terminate")
    group = f.group
    if f.is_zero():
        return f
    total = Sym.zero(group)
    for mono, R in _split_by_atoms(f, v).items():
        try:
            total = total + _integrate_group(mono, R, v, depth)
        except PrecisionExhausted:
            raise
    return total


def _integrate_group(mono: tuple, R: Sym, v: str, depth: int) -> Sym:
    group = R.group
    if not mono:
        return _rational_antiderivative(R, v)
    if len(mono) == 1 and isinstance(mono[0][0], Root):
        atom, j = mono[0]
        base = UPoly.from_poly(atom.base, v) if not any(
            s.depends_on(v) and not isinstance(s, Var) for s in atom.base.symbols()) else None
        if base is None:
            raise UnsupportedIntegrand(f"nested radical {atom.render()}")
        if base.degree == 1:
            return _linear_radical(R, atom, j, v, depth)
        if base.degree == 2 and atom.index == 2 and j == 1:
            return _quadratic_radical(_radical_numerator(R, atom, v), atom, v)
        raise UnsupportedIntegrand(f"radical {atom.render()} outside the fragment")
    if len(mono) == 1 and isinstance(mono[0][0], (LogAbs, Arctan, Arcsin)):
        atom, n = mono[0]
        L = Sym.of_symbol(atom, group)
        dL = Sym.of_symbol(atom, group).derivative(v)
        ratio = R / dL
        if not ratio.depends_on(v):
            return ratio * (L ** (n + 1)) / (n + 1)
        if len(R.num.terms) > 1:
            # a term proportional to dL needs the power rule, the others integration by parts
            return sum((_integrate_group(mono, Sym(Poly({m: c}, group), R.den, group), v, depth)
                        for m, c in R.num.terms.items()), Sym.zero(group))
        C = _antiderivative(R, v, depth + 1)
        if any(isinstance(s, type(atom)) and s == atom for s in C.atoms()):
            raise UnsupportedIntegrand("integration by parts cycles")
        rest = C * (L ** (n - 1)) * dL * n
        return C * (L ** n) - _antiderivative(rest, v, depth + 1)
    raise UnsupportedIntegrand("product of several transcendental or radical factors")


def _radical_numerator(R: Sym, atom: Root, v: str) -> UPoly:
    """P with R * sqrt(B) = P / sqrt(B)."""
    group = R.group
    num = R * Sym(atom.base)
    if any(p.depends_on(v) for p, _ in num.den):
        raise UnsupportedIntegrand("rational factor in front of a square root is outside the fragment")
    scalar = Sym.constant(1, group)
    for p, m in num.den:
        scalar = scalar / (Sym(p) ** m)
    return UPoly.from_poly(num.num, v) * scalar


def poly_roots(p: Poly, v: str) -> list:
    """Roots in v of a polynomial factor, when it splits into factors of degree <= 2."""
    if not p.depends_on(v) or any(s.depends_on(v) and not isinstance(s, Var) for s in p.symbols()):
        return []
    try:
        poly = UPoly.from_poly(p, v)
        if poly.degree < 1:
            return []
        _, monic = poly.monic()
        facs = _factor_monic(monic, v)
    except (UnsupportedIntegrand, PrecisionExhausted):
        return []
    return [fac.data for fac, _ in facs if fac.kind == "linear"]


def real_roots(f: Sym, v: str, numerator: bool = False) -> list:
    """Roots in v of the denominators, radical bases and log arguments of f.

    With ``numerator`` the zeros of the numerator are included as well.
    """
    out = []
    seen = set()

    def add(p: Poly):
        for r in poly_roots(p, v):
            key = str(r)
            if key not in seen:
                seen.add(key)
                out.append(r)

    if numerator:
        add(f.num)
    for p, _ in f.den:
        add(p)
    for atom in f.atoms():
        if isinstance(atom, Root):
            add(atom.base)
        elif isinstance(atom, LogAbs):
            add(atom.arg)
        elif isinstance(atom, (Arctan, Arcsin)):
            for p, _ in atom.arg.den:
                add(p)
    return out
