"""Sections of the valuation and the isomorphisms they induce.

A section s sends each exponent g to a positive series of order g.  Changing
the section is modelled in two ways:

* transport: the automorphism K with K(t^g) = t^g m^(coordinates of g) that
  carries s(g) to s'(g) on the generators.  The parameters of a set are moved
  by K, and an isomorphism Phi of R[X] with Phi(X) = X + f*/r accounts for the
  change of every measure;
* relative logarithm: the set is kept and log is taken relative to the
  section, log_s(f) = -g X + log(f / s(g)) with g = ord f.  Inside
  ``using_section`` every computation uses it.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement, reduce
from .calculus import integrate_interval, integrate_region, integrate_set
from .constants import RealConstant, as_constant
from .errors import DomainError, PrecisionExhausted
from .exponents import Exponent, ExponentGroup, QQ, _solve_rational
from .logexp import extended_log, partial_log, section_offset
from .semialg import Infinity, Interval, Region, SetOneD
from .series import Series
from .symbolic import Arcsin, Arctan, LogAbs, Poly, Root, Sym, var

__all__ = [
    "Section", "Transport", "AlgebraMap", "build_isomorphism_Q", "using_section",
    "measure_under", "verify_nonisomorphism_rank2", "Rank2Report",
    "reduced_invariance_check", "InvarianceEntry", "DegenerateUnit", "hyperbola",
]


class DegenerateUnit(DomainError):
    """The unit u = 1 gives two identical data; there is nothing to separate."""


class Section:
    """Images s(g_i) of generators g_i; extended multiplicatively."""

    def __init__(self, images, group: ExponentGroup | None = None):
        pairs = list(images.items()) if isinstance(images, dict) else list(images)
        if not pairs:
            raise DomainError("a section needs at least one generator")
        group = group or pairs[0][1].group
        self.group = group
        self.generators = tuple(group.coerce(g) if not isinstance(g, Exponent) else g for g, _ in pairs)
        self.images = tuple(img for _, img in pairs)
        self.units = []
        for g, img in zip(self.generators, self.images):
            if img.ord() != g:
                raise DomainError(f"s({g}) = {img} has order {img.ord()}")
            if img.sign() <= 0:
                raise DomainError(f"s({g}) = {img} is not positive")
            self.units.append(img.shift(-g))
        self.units = tuple(self.units)
        if _solve_rational([list(g.coords) + [0] for g in self.generators], len(self.generators)) is None:
            raise DomainError("section generators are dependent")
        self._logs = None

    @classmethod
    def standard(cls, group: ExponentGroup = QQ) -> "Section":
        gens = [Exponent(group, tuple(Fraction(int(i == j)) for j in range(group.rank)))
                for i in range(group.rank)]
        return cls([(g, Series.monomial(1, g, group)) for g in gens], group)

    def coordinates(self, g: Exponent) -> list:
        """Rational q_i with g = sum q_i g_i."""
        n = len(self.generators)
        rows = [[gen.coords[k] for gen in self.generators] + [g.coords[k]]
                for k in range(self.group.rank)]
        sol = _solve_rational(rows, n)
        if sol is None:
            raise DomainError(f"{g} is outside the span of the section generators")
        return sol

    def unit(self, g: Exponent) -> Series:
        """s(g) / t^g."""
        out = Series.constant(1, self.group)
        for q, u in zip(self.coordinates(g), self.units):
            if q:
                out = out * (u ** q)
        return out

    def __call__(self, g) -> Series:
        g = self.group.coerce(g) if not isinstance(g, Exponent) else g
        return self.unit(g).shift(g)

    def unit_log(self, g: Exponent) -> Series:
        """log(s(g) / t^g) as a bounded series."""
        if self._logs is None:
            self._logs = tuple(partial_log(u) for u in self.units)
        out = Series.zero(self.group)
        for q, lg in zip(self.coordinates(g), self._logs):
            if q:
                out = out + lg.scale(as_constant(q))
        return out

    def is_standard(self) -> bool:
        return all(u == 1 for u in self.units)

    def __str__(self):
        return ", ".join(f"t^({g}) -> {img}" for g, img in zip(self.generators, self.images))


@contextmanager
def using_section(s: Section):
    """Evaluate logarithms relative to s inside the block."""
    token = section_offset.set(None if s.is_standard() else s.unit_log)
    try:
        yield s
    finally:
        section_offset.reset(token)


class Transport:
    """The automorphism t^g -> t^g * prod m_i^(q_i) with K(s(g_i)) = s'(g_i).

    K(u_i t^(g_i)) = K(u_i) t^(g_i) m_i, so m_i = u'_i / K(u_i).  Starting
    from m_i = u'_i / u_i, each round fixes the terms of the next order.
    """

    _ROUNDS = 64

    def __init__(self, source: Section, target: Section):
        if source.group != target.group:
            raise DomainError("sections on different groups")
        self.source, self.target = source, target
        wanted = tuple(target.unit(g) for g in source.generators)
        self._set_ratios(tuple(w / u for w, u in zip(wanted, source.units)))
        for _ in range(self._ROUNDS):
            ratios = tuple(w / self(u) for w, u in zip(wanted, source.units))
            if all(a == b for a, b in zip(ratios, self.ratios)):
                break
            self._set_ratios(ratios)
        else:
            raise PrecisionExhausted("the transport multipliers do not settle")

    def _set_ratios(self, ratios: tuple) -> None:
        self.ratios = ratios
        self._multipliers = {}

    def multiplier(self, g: Exponent) -> Series:
        out = self._multipliers.get(g)
        if out is None:
            out = Series.constant(1, self.source.group)
            for q, w in zip(self.source.coordinates(g), self.ratios):
                if q:
                    out = out * (w ** q)
            self._multipliers[g] = out
        return out

    def __call__(self, f: Series) -> Series:
        if not isinstance(f, Series):
            return f
        out = Series.zero(f.group, f.prec)
        for e, c in f.terms:
            out = out + (self.multiplier(e) * Series.monomial(c, e, f.group))
        return out

    def algebra(self, p: AlgebraElement) -> AlgebraElement:
        return p.map_coefficients(self)

    def poly(self, p: Poly) -> Poly:
        terms = {}
        for mono, c in p.terms.items():
            new = tuple((self._symbol(s), e) for s, e in mono)
            terms[new] = self(c)
        return Poly(terms, p.group)

    def _symbol(self, s):
        if isinstance(s, Root):
            return Root(self.poly(s.base), s.index)
        if isinstance(s, LogAbs):
            return LogAbs(self.poly(s.arg))
        if isinstance(s, Arctan):
            return Arctan(self.sym(s.arg))
        if isinstance(s, Arcsin):
            return Arcsin(self.sym(s.arg))
        return s

    def sym(self, f: Sym) -> Sym:
        return Sym(self.poly(f.num), [(self.poly(p), m) for p, m in f.den], f.group)

    def point(self, p):
        return p if isinstance(p, Infinity) else self.sym(p)

    def set(self, A):
        """The image of a set described with series parameters."""
        if isinstance(A, SetOneD):
            return SetOneD(tuple(Interval(self.point(c.lo), self.point(c.hi), c.lo_closed, c.hi_closed)
                                 for c in A.components))
        if isinstance(A, Region):
            base = self.set(A.base)
            bounds = tuple((self.point(lo), self.point(hi)) for lo, hi in A.bounds)
            return Region(A.variables, base, bounds)
        raise TypeError(f"cannot transport {A!r}")


@dataclass(frozen=True)
class AlgebraMap:
    """Phi on R[X]: the transport K on coefficients and X -> scale X + shift."""

    transport: Transport
    scale: RealConstant
    shift: Series

    @property
    def x_image(self) -> AlgebraElement:
        return AlgebraElement((self.shift, Series.constant(self.scale, self.shift.group)),
                              self.shift.group)

    def __call__(self, p) -> AlgebraElement:
        p = AlgebraElement.lift(p, self.shift.group)
        out = AlgebraElement((), p.group)
        image = self.x_image
        power = AlgebraElement.lift(1, p.group)
        for c in p.coeffs:
            out = out + power.scale(self.transport(c))
            power = power * image
        return out

    def then(self, other: "AlgebraMap") -> "AlgebraMap":
        """other after self, on generators and on X."""
        transport = Transport(self.transport.source, other.transport.target)
        shift = other.transport(self.shift).scale(other.scale) + other.shift
        return AlgebraMap(transport, self.scale * other.scale, shift)

    def __str__(self):
        return f"X -> {self.x_image}"


def build_isomorphism_Q(s: Section, s2: Section) -> AlgebraMap:
    """Phi with Phi(log s(g)) = log s2(g) on the generator g of a rank-one group.

    With r = -g > 0 and K(t^(-r)) = t^(-r) a*(1 + h*), Phi(X) = X + f*/r with
    f* = log(a*(1 + h*)).
    """
    if len(s.generators) != 1 or len(s2.generators) != 1:
        raise DomainError("build_isomorphism_Q needs sections on a rank-one group")
    K = Transport(s, s2)
    g = s.generators[0]
    if g.embed().sign() > 0:
        g = -g
    r = -g.embed()
    f_star = partial_log(K.multiplier(g))
    phi = AlgebraMap(K, RealConstant(1), f_star.scale(r.inverse()))
    for gen in s.generators:
        lhs = phi(extended_log(s(gen)))
        rhs = extended_log(K(s(gen)))
        if not lhs.equal_up_to(rhs):
            raise PrecisionExhausted(f"Phi(log s({gen})) and log K(s({gen})) do not agree")
    return phi


def measure_under(A, section: Section | None = None, integrand=1):
    """Measure (or integral) of A computed with logarithms relative to ``section``."""
    section = section or Section.standard(_group_of(A))
    with using_section(section):
        if isinstance(A, Region):
            return integrate_region(integrand, A, measure=integrand == 1)
        return integrate_set(integrand, A, allow_infinite=True)


def _group_of(A):
    if isinstance(A, Region):
        return _group_of(A.base)
    for c in A.components:
        for p in (c.lo, c.hi):
            if isinstance(p, Sym):
                return p.group
    return QQ


def hyperbola(c, group: ExponentGroup = QQ) -> Region:
    """{(x, y): 1 <= x <= c, 0 <= y <= 1/x}."""
    x = var("x", group)
    c = c if isinstance(c, Sym) else Sym.constant(c, group)
    return Region(("x", "y"), SetOneD.interval(Sym.constant(1, group), c),
                  ((Sym.constant(0, group), 1 / x),))


# --- the rank-two witness ----------------------------------------------------------------


@dataclass(frozen=True)
class Rank2Report:
    zeta: RealConstant
    unit: Series
    alpha: tuple
    beta: tuple
    g: Series
    solution: tuple | None
    residual: Series
    verdict: str

    def to_json(self) -> dict:
        return {
            "zeta": str(self.zeta), "unit": str(self.unit),
            "alpha": [str(v) for v in self.alpha], "beta": [str(v) for v in self.beta],
            "g": str(self.g), "residual": str(self.residual), "verdict": self.verdict,
        }

    def __str__(self):
        return "\n".join([
            f"alpha: {self.alpha[0]}, {self.alpha[1]}",
            f"beta: {self.beta[0]}, {self.beta[1]}",
            f"g = {self.g}",
            f"first pair forces X -> {AlgebraElement((self.solution[1], self.solution[0]), self.g.group)}"
            if self.solution else "first pair has no solution",
            f"second pair residual: {self.residual}",
            f"verdict: {self.verdict}",
        ])


def verify_nonisomorphism_rank2(zeta, unit: Series) -> Rank2Report:
    """Two sections on Q + Q*zeta whose measures no map X -> rX + g' relates.

    a = t^(-1) and b = t^(-zeta).  The standard section gives the hyperbola
    areas log a = X and log b = zeta X; the section with b -> u*b gives X and
    zeta X + log u.  Matching X-coefficients in the first pair forces r = 1 and
    g' = 0, and then the second pair leaves log u, which is nonzero.
    """
    zeta = as_constant(zeta)
    if zeta.is_rational:
        raise DomainError(f"zeta = {zeta} is rational, so Q + Q*zeta has rank one")
    group = unit.group if unit.group.rank == 2 else ExponentGroup([1, zeta])
    if unit.group != group:
        unit = Series([(group(*(list(e.coords) + [0] * (group.rank - len(e.coords)))), c)
                       for e, c in unit.terms], unit.prec, group)
    if unit.ord() != group.zero or unit.sign() <= 0:
        raise DomainError(f"{unit} is not a positive unit")
    if unit.is_exact and unit == 1:
        raise DegenerateUnit("u = 1: both sections agree, the data are trivially isomorphic")
    gamma, delta = group(-1, 0), group(0, -1)
    alpha = Section.standard(group)
    beta = Section([(group(1, 0), Series.monomial(1, group(1, 0), group)),
                    (group(0, 1), Series.monomial(1, group(0, 1), group) / unit)], group)
    K = Transport(alpha, beta)
    a, b = Series.monomial(1, gamma, group), Series.monomial(1, delta, group)
    x = var("x", group)
    pairs = []
    for section_params in (lambda c: c, K):
        pairs.append(tuple(integrate_interval(1 / x, 1, section_params(c), "x").algebra()
                           for c in (a, b)))
    (pa, pb), (qa, qb) = pairs
    g = qb.coeff(0) - pb.coeff(0)
    if g.known_zero():
        raise PrecisionExhausted("log u cannot be separated from 0 at this precision")
    # Phi(c1 X + c0) = c1 (r X + g') + c0 must equal d1 X + d0
    c1, c0, d1, d0 = pa.coeff(1), pa.coeff(0), qa.coeff(1), qa.coeff(0)
    r = d1 / c1
    g_shift = (d0 - c0) / c1
    e1, e0, f1, f0 = pb.coeff(1), pb.coeff(0), qb.coeff(1), qb.coeff(0)
    residual_x = e1 * r - f1
    residual = e1 * g_shift + e0 - f0
    if not residual_x.known_zero():
        residual = residual_x
    verdict = "NonIsomorphic" if not residual.known_zero() else "Undecided"
    return Rank2Report(zeta, unit, (pa, pb), (qa, qb), g, (r, g_shift), residual, verdict)


# --- reduced measures --------------------------------------------------------------------


@dataclass(frozen=True)
class InvarianceEntry:
    set: object
    value: object
    other: object
    reduced: object
    other_reduced: object
    agree: bool


def reduced_invariance_check(s: Section, s2: Section, testset) -> list:
    """Measures of each set with logarithms relative to s and to s2, compared after reduce."""
    out = []
    for A in testset:
        m1 = measure_under(A, s)
        m2 = measure_under(A, s2)
        if m1.infinite or m2.infinite:
            out.append(InvarianceEntry(A, m1, m2, None, None, m1.infinite == m2.infinite))
            continue
        r1, r2 = reduce(m1.algebra()), reduce(m2.algebra())
        out.append(InvarianceEntry(A, m1, m2, r1, r2, r1.equal_up_to(r2)))
    return out
