"""Constructible functions of one variable.

Simple descriptions at infinity, limits, derivatives, extraction of the
X-coefficient functions, and smoothing by convolution with the Cauchy kernel.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import asymptotic
from .asymptotic import Limit
from .calculus import _sorted_unique, integrate_interval
from .constants import PI
from .errors import ExtractionFailed, UnsupportedIntegrand
from .integrate import real_roots
from .semialg import Expr, Guard, Interval, _sign_of, as_sym, compare_points
from .series import Series
from .symbolic import LEBESGUE, LogAbs, Poly, Sym, Var

__all__ = [
    "ConstructibleExpr", "SimpleTerm", "SimpleDescription", "simple_description",
    "limit_at_infinity", "limit_at_point", "differentiate", "extract_coefficients",
    "convolve", "cauchy_kernel",
]

ConstructibleExpr = Expr


def _variable(f: Expr, variable):
    if variable:
        return variable
    names = sorted(f.free_vars())
    if len(names) == 1:
        return names[0]
    if not names:
        return "x"
    raise UnsupportedIntegrand(f"choose the variable among {', '.join(names)}")


def _ultimate_piece(f: Expr, v: str, image: Sym | None = None, y: str | None = None) -> Sym:
    """The piece of f that holds for all large v (or near a point, via an image)."""
    if f.is_single():
        return f.single()

    def sign(g: Sym) -> int:
        if not g.depends_on(v):
            return _sign_of(g)
        h = g.substitute({v: image}) if image is not None else g
        lim = asymptotic.expand(h, y or v)
        if lim.is_exact_zero():
            return 0
        return asymptotic.coefficient_sign(lim.lead()[2])

    return f.select(sign)


@dataclass(frozen=True)
class SimpleTerm:
    """A x^power (log x)^log_power X^lebesgue_power with A a nonzero series."""

    power: Fraction
    log_power: int
    lebesgue_power: int
    limit: Series

    def __str__(self):
        parts = [f"({self.limit})"]
        if self.power:
            parts.append(f"x^({self.power})")
        if self.log_power:
            parts.append(f"log(x)^{self.log_power}")
        if self.lebesgue_power:
            parts.append(f"X^{self.lebesgue_power}")
        return "*".join(parts)


@dataclass(frozen=True)
class SimpleDescription:
    """Dominant-first terms; ``floor`` bounds the exponents left out (None: exact)."""

    terms: tuple
    floor: Fraction | None

    @property
    def dominant(self):
        """mu = max of (power, log_power) over the terms, or None when ultimately 0."""
        if not self.terms:
            return None
        return max((s.power, s.log_power) for s in self.terms)

    def __str__(self):
        body = " + ".join(str(s) for s in self.terms) or "0"
        if self.floor is not None:
            body += f" + o(x^({self.floor}))"
        return body


def simple_description(f, variable: str | None = None, depth: int = 6) -> SimpleDescription:
    f = Expr.of(f)
    v = _variable(f, variable)
    piece = _ultimate_piece(f, v)
    terms, floor = asymptotic.simple_terms(piece, v, depth)
    return SimpleDescription(tuple(SimpleTerm(q, n, j, a) for q, n, j, a in terms), floor)


def limit_at_infinity(f, variable: str | None = None, mode: str = "P", direction: int = 1) -> Limit:
    """Limit as the variable tends to +infinity (or -infinity with direction -1)."""
    f = Expr.of(f)
    v = _variable(f, variable)
    if direction < 0:
        y = "_z"
        image = -Sym.of_symbol(Var(y), f.group)
        piece = _ultimate_piece(f, v, image, y)
        return asymptotic.limit_at_infinity(piece.substitute({v: image}), y, mode)
    return asymptotic.limit_at_infinity(_ultimate_piece(f, v), v, mode)


def limit_at_point(f, a, side: str = "+", variable: str | None = None, mode: str = "P") -> Limit:
    f = Expr.of(f)
    v = _variable(f, variable)
    a = as_sym(a, f.group)
    y = "_z"
    step = Sym.of_symbol(Var(y), f.group).inverse()
    image = a + step if side == "+" else a - step
    piece = _ultimate_piece(f, v, image, y)
    return asymptotic.limit_at_point(piece, v, a, side, mode)


def differentiate(f, variable: str | None = None) -> Expr:
    """Derivative on each cell; X is a constant."""
    f = Expr.of(f)
    return f.derivative(_variable(f, variable))


# --- X-coefficient extraction ------------------------------------------------------------


def _sample_points(K: Interval, extra) -> list:
    if not K.is_bounded():
        raise ExtractionFailed("coefficient extraction needs a bounded interval")
    lo, hi = K.lo, K.hi
    points = [lo] if compare_points(lo, hi) == 0 else [
        lo, (lo * 3 + hi) / 4, (lo + hi) / 2, (lo + hi * 3) / 4, hi]
    for p in extra:
        p = as_sym(p, lo.group)
        if not any(compare_points(p, q) == 0 for q in points):
            points.append(p)
    return points


def _log_orders(f: Sym, v: str, p: Sym) -> tuple:
    """(atom, order of its argument at p) for the log atoms of f that depend on v."""
    point = {v: p.evaluate({})}
    out = []
    for atom in sorted(f.atoms(), key=lambda a: a.key):
        if not isinstance(atom, LogAbs) or not atom.arg.depends_on(v):
            continue
        value = atom.arg.evaluate(point)
        if not value.is_series() or value.as_series().is_zero():
            raise ExtractionFailed(f"log argument {atom.arg} vanishes or involves X at {p}")
        out.append((atom, value.as_series().ord()))
    return tuple(out)


def _separate_logs(f: Sym, orders: tuple) -> Sym:
    """Rewrite each log|A| as -ord(A) X + log|t^(-ord A) A| for the given orders."""
    names = {}
    images = {}
    for i, (atom, order) in enumerate(orders):
        if order.is_zero():
            continue
        # kept unnormalized: normalizing would move log(t^(-ord A)) back out as X
        scaled = Sym.of_symbol(LogAbs(atom.arg.scale(Series.monomial(1, -order, f.group))), f.group)
        lebesgue = Sym.of_symbol(LEBESGUE, f.group)
        names[atom] = f"_log{i}"
        images[f"_log{i}"] = scaled - lebesgue * Sym.constant(order.embed(), f.group)
    if not names:
        return f
    # atoms become placeholder variables, then the placeholders their images
    num = _replace_atoms(f.num, names)
    den = [(_replace_atoms(p, names), m) for p, m in f.den]
    return Sym(num, den, f.group).substitute(images)


def _replace_atoms(p: Poly, names: dict) -> Poly:
    terms = {}
    for mono, c in p.terms.items():
        items = {}
        for s, e in mono:
            key = Var(names[s]) if s in names else s
            items[key] = items.get(key, 0) + e
        new = tuple(sorted(items.items(), key=lambda se: se[0].key))
        terms[new] = terms[new] + c if new in terms else c
    return Poly(terms, p.group)


def _check_coefficients(piece: Sym, hs: list, v: str, p: Sym) -> None:
    point = {v: p.evaluate({})}
    try:
        value = piece.evaluate(point)
    except (ZeroDivisionError, ValueError) as exc:
        raise ExtractionFailed(f"f is undefined at {p}: {exc}") from exc
    for j, h in enumerate(hs):
        hv = h.evaluate(point)
        if not hv.is_series():
            raise ExtractionFailed(f"coefficient h_{j} still involves X at {p}")
        if not hv.as_series().equal_up_to(value.coeff(j)):
            raise ExtractionFailed(f"coefficient h_{j} disagrees with f at {p}")
    if any(not c.known_zero() for c in value.coeffs[len(hs):]):
        raise ExtractionFailed(f"f has extra powers of X at {p}")


def extract_coefficients(f, K, variable: str | None = None, points=()) -> list:
    """Functions h_0, ..., h_N free of X with f = sum h_j X^j on K.

    Each log|A| is split as -ord(A) X + log|t^(-ord A) A|.  The order used is
    the one most sample points share; sample points where some log argument
    has another order get point cells of their own.  Every h_j is confirmed
    against the X-coefficients of f at all sample points, which are unique.
    """
    f = Expr.of(f)
    v = _variable(f, variable)
    interval = K if isinstance(K, Interval) else Interval(as_sym(K, f.group), as_sym(K, f.group))
    samples = _sample_points(interval, points)
    branches = {_branch_index(f, v, p) for p in samples}
    if len(branches) != 1:
        raise ExtractionFailed("f changes branch on the interval")
    piece = f.pieces[branches.pop()][1]
    classes: dict = {}
    for p in samples:
        classes.setdefault(_log_orders(piece, v, p), []).append(p)
    generic = max(classes, key=lambda k: len(classes[k]))
    solved = {}
    for orders, members in classes.items():
        hs = _separate_logs(piece, orders).lebesgue_coefficients()
        for p in members:
            _check_coefficients(piece, hs, v, p)
        solved[orders] = hs
    width = max(len(hs) for hs in solved.values())
    zero = Sym.zero(f.group)

    def padded(hs):
        return list(hs) + [zero] * (width - len(hs))

    x = Sym.of_symbol(Var(v), f.group)
    out = []
    for j in range(width):
        branches = [([Guard(x - p, "==")], padded(solved[orders])[j])
                    for orders, members in classes.items() if orders != generic for p in members]
        default = Expr.of(padded(solved[generic])[j], f.group)
        out.append(Expr.piecewise(branches, default) if branches else default)
    return out


def _branch_index(f: Expr, v: str, p: Sym) -> int:
    value = p.evaluate({})
    for i, (conds, _) in enumerate(f.pieces):
        if all(g.decide(int(g.expr.evaluate({v: value}).sign())) for g in conds):
            return i
    raise ExtractionFailed(f"no branch of f applies at {p}")


def _ultimate_at(f: Expr, v: str, p: Sym) -> Sym:
    if f.is_single():
        return f.single()
    return f.select(lambda g: _sign_of(g.substitute({v: p})))


# --- convolution --------------------------------------------------------------------------


def cauchy_kernel(h, s: str = "s", group=None) -> Sym:
    """Phi_h(s) = h / (pi (h^2 + s^2))."""
    h = as_sym(h)
    sv = Sym.of_symbol(Var(s), h.group)
    return h / ((h * h + sv * sv) * Sym.constant(PI, h.group))


def convolve(g, h, variable: str = "s", point: str = "x") -> Expr:
    """S_h g(x) = integral of g(s) Phi_h(s - x) ds for piecewise-polynomial g of bounded support."""
    g = Expr.of(g)
    h = as_sym(h, g.group)
    s_var = Sym.of_symbol(Var(variable), g.group)
    x_var = Sym.of_symbol(Var(point), g.group)
    for _, value in g.pieces:
        if value.den or any(not isinstance(sym, Var) for sym in value.num.symbols()):
            raise UnsupportedIntegrand("convolution is implemented for piecewise polynomials")
    cuts = []
    for g_ in g.guards():
        cuts.extend(r for r in real_roots(g_.expr, variable, numerator=True) if not r.free_vars())
    cuts = _sorted_unique(cuts)
    if not cuts:
        raise UnsupportedIntegrand("g needs bounded support")
    for outer in (_ultimate_piece(g, variable), _left_piece(g, variable)):
        if not outer.is_zero():
            raise UnsupportedIntegrand("g needs bounded support")
    kernel = cauchy_kernel(h, variable, g.group).substitute({variable: s_var - x_var})
    total = Sym.zero(g.group)
    for lo, hi in zip(cuts, cuts[1:]):
        piece = _ultimate_at(g, variable, (lo + hi) / 2)
        if piece.is_zero():
            continue
        total = total + integrate_interval(piece * kernel, lo, hi, variable).sym()
    return Expr.of(total)


def _left_piece(g: Expr, v: str) -> Sym:
    y = "_z"
    image = -Sym.of_symbol(Var(y), g.group)
    return _ultimate_piece(g, v, image, y)

