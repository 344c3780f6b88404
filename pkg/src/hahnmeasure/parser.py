"""Text syntax for expressions, series, sets and regions.

Expressions use infix arithmetic with ``^`` (or ``**``) for powers.  ``t`` is
the infinitesimal, ``X`` the Lebesgue generator, ``pi`` the constant, and
``O(t^q)`` marks the working precision.  Known functions are sqrt, log, exp,
arctan, arcsin and abs; ``log(abs(f))`` and ``log(f)`` both mean log|f|.
``piecewise(cond: value, ..., default)`` picks the first true branch; without
a default the branches are read as disjoint pieces.

Sets are unions (``u``) of intervals ``[a, b]``, ``]a, b[``, points ``{a}``
and ``{}``; ``inf`` stands for infinity.  Regions read
``region x in [0, 1]; y in [0, x]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement
from .constants import PI
from .errors import DomainError, ParseError
from .exponents import ExponentGroup, QQ
from .semialg import Expr, Guard, Infinity, Interval, NEG_INF, POS_INF, Region, SetOneD
from .series import Series
from .symbolic import LEBESGUE, Sym, Var

__all__ = ["parse_expr", "parse_series", "parse_value", "parse_set", "parse_region",
           "parse_domain", "parse_group", "parse_rational", "Token"]

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|<=|>=|==|!=|->|[-+*/^()\[\]{},:;<>])
""", re.VERBOSE)

_FUNCTIONS = {"sqrt", "log", "exp", "arctan", "arcsin", "abs", "O", "piecewise"}
_RELATIONS = {"<", "<=", ">", ">=", "==", "!="}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, group: ExponentGroup):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.group = group

    # --- token helpers --------------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(message, self.text, tok.pos)

    def at(self, *texts) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text in texts

    def take(self, text: str | None = None) -> Token:
        tok = self.tok
        if text is not None and tok.text != text:
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        self.i += 1
        return tok

    def finish(self):
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")

    # --- expressions ---------------------------------------------------------------

    def expr(self) -> Expr:
        value = self.product()
        while self.at("+", "-"):
            op = self.take().text
            rhs = self.product()
            value = value + rhs if op == "+" else value - rhs
        return value

    def product(self) -> Expr:
        value = self.unary()
        while self.at("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except (DomainError, ZeroDivisionError) as exc:
                    raise self.error(f"division by zero ({exc})", op) from exc
        return value

    def unary(self) -> Expr:
        if self.at("-"):
            self.take()
            return -self.unary()
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        start = self.tok
        base = self.atom()
        if not self.at("^", "**"):
            return base
        op = self.take()
        exponent = self.unary()
        if isinstance(base, _TMarker):
            return self._t_power(exponent, op)
        q = self._rational(exponent, op)
        try:
            return base ** q
        except (DomainError, ZeroDivisionError, ValueError) as exc:
            raise self.error(str(exc), start) from exc

    def _constant(self, e: Expr, tok: Token):
        if not e.is_single() or e.single().free_vars():
            raise self.error("expected a constant", tok)
        value = e.single().evaluate({})
        if not value.is_series():
            raise self.error("expected a constant without X", tok)
        return value.as_series()

    def _rational(self, e: Expr, tok: Token) -> Fraction:
        s = self._constant(e, tok)
        if not (s.is_constant() and s.constant_value().is_rational):
            raise self.error("exponents of expressions must be rational", tok)
        return s.constant_value().as_fraction()

    def _t_power(self, exponent: Expr, tok: Token) -> Expr:
        s = self._constant(exponent, tok)
        if not s.is_constant():
            raise self.error("the exponent of t must be a real constant", tok)
        try:
            e = self.group.coordinates(s.constant_value())
        except DomainError as exc:
            raise self.error(f"exponent outside the value group {self.group.name}", tok) from exc
        return Expr.of(Series.monomial(1, e, self.group), self.group)

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.take()
            return Expr.of(Sym.constant(Fraction(tok.text), self.group), self.group)
        if self.at("("):
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if tok.kind == "ident":
            self.take()
            name = tok.text
            if name in _FUNCTIONS and self.at("("):
                return self.call(name, tok)
            if name == "t":
                return _TMarker(Series.monomial(1, self.group(1) if self.group.basis[0] == 1
                                                else self.group.coordinates(1), self.group),
                                self.group)
            if name == "X":
                return Expr.of(Sym.of_symbol(LEBESGUE, self.group), self.group)
            if name == "pi":
                return Expr.of(Sym.constant(PI, self.group), self.group)
            if name in _FUNCTIONS or name in ("inf", "and", "region", "in", "true"):
                raise self.error(f"{name!r} cannot be used here", tok)
            return Expr.of(Sym.of_symbol(Var(name), self.group), self.group)
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")

    def call(self, name: str, tok: Token) -> Expr:
        self.take("(")
        if name == "piecewise":
            return self.piecewise(tok)
        if name == "O":
            arg_tok = self.tok
            arg = self.expr()
            self.take(")")
            s = self._constant(arg, arg_tok)
            if not s.is_monomial() or s.lead_coeff != 1:
                raise self.error("O(...) takes a power of t", arg_tok)
            return Expr.of(Series.zero(self.group, s.ord()), self.group)
        if name == "log" and self.at("abs"):
            # log(abs(f)) is log|f|, the same as log(f)
            save = self.i
            self.take()
            if self.at("("):
                self.take()
                arg = self.expr()
                self.take(")")
                if self.at(")"):
                    self.take()
                    return self._apply("log", arg, tok)
            self.i = save
        arg = self.expr()
        self.take(")")
        if name == "abs":
            return arg.abs()
        return self._apply(name, arg, tok)

    def _apply(self, name: str, arg: Expr, tok: Token) -> Expr:
        try:
            return arg.apply(name)
        except DomainError as exc:
            raise self.error(str(exc), tok) from exc

    def piecewise(self, tok: Token) -> Expr:
        branches = []
        default = None
        while True:
            if default is not None:
                raise self.error("the default must be the last argument")
            conds = self.conditions()
            if self.at(":"):
                self.take()
                branches.append((conds, self.expr()))
            else:
                if conds is None or len(conds) != 1 or not isinstance(conds[0], Expr):
                    raise self.error("expected ':' after a condition")
                default = conds[0]
            if self.at(")"):
                self.take()
                break
            self.take(",")
        if not branches and default is None:
            raise self.error("piecewise needs at least one branch", tok)
        if default is not None:
            return Expr.piecewise([(guards, value) for guards, value in branches], default)
        pieces = []
        group = self.group
        for guards, value in branches:
            for conds, v in value.pieces:
                pieces.append((tuple(guards) + conds, v))
        return Expr(pieces, group)

    def conditions(self):
        """'true', a conjunction of relations, or a lone expression (the default)."""
        if self.at("true"):
            self.take()
            return []
        guards = []
        while True:
            lhs_tok = self.tok
            lhs = self.expr()
            if not self.at(*_RELATIONS):
                if guards:
                    raise self.error("expected a relation")
                return [lhs]
            rel = self.take().text
            rhs = self.expr()
            diff = lhs - rhs
            if not diff.is_single():
                raise self.error("conditions must compare plain expressions", lhs_tok)
            guards.append(Guard(diff.single(), rel))
            if not self.at("and"):
                return guards
            self.take()

    # --- sets -----------------------------------------------------------------------

    def point(self):
        if self.at("inf"):
            self.take()
            return POS_INF
        if self.at("-") and self.tokens[self.i + 1].text == "inf":
            self.take()
            self.take()
            return NEG_INF
        if self.at("+") and self.tokens[self.i + 1].text == "inf":
            self.take()
            self.take()
            return POS_INF
        tok = self.tok
        e = self.expr()
        if not e.is_single():
            raise self.error("interval endpoints must be plain expressions", tok)
        return e.single()

    def interval(self) -> Interval:
        if self.at("{"):
            self.take()
            if self.at("}"):
                self.take()
                return None
            p = self.point()
            self.take("}")
            if isinstance(p, Infinity):
                raise self.error("a point cannot be infinite")
            return Interval.point(p)
        if not self.at("[", "]"):
            raise self.error("expected an interval")
        lo_closed = self.take().text == "["
        lo = self.point()
        self.take(",")
        hi = self.point()
        if not self.at("[", "]"):
            raise self.error("expected ']' or '['")
        hi_closed = self.take().text == "]"
        return Interval(lo, hi, lo_closed, hi_closed)

    def set_one_d(self) -> SetOneD:
        comps = []
        while True:
            iv = self.interval()
            if iv is not None:
                comps.append(iv)
            if not self.at("u"):
                return SetOneD(tuple(comps))
            self.take()

    def region(self) -> Region:
        self.take("region")
        names = [self.name()]
        self.take("in")
        base = self.set_one_d()
        bounds = []
        while self.at(";"):
            self.take()
            names.append(self.name())
            self.take("in")
            self.take("[")
            lo = self.point()
            self.take(",")
            hi = self.point()
            self.take("]")
            bounds.append((lo, hi))
        if len(set(names)) != len(names):
            raise self.error("region variables must be distinct")
        return Region(tuple(names), base, tuple(bounds))

    def name(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in ("t", "X", "pi", "in", "region", "u"):
            raise self.error("expected a variable name")
        self.take()
        return tok.text


class _TMarker(Expr):
    """The bare symbol t, which may still receive an irrational exponent."""

    __slots__ = ()

    def __init__(self, series: Series, group):
        super().__init__([((), Sym.constant(series, group))], group)


def _run(text: str, group, method):
    p = _Parser(text, group or QQ)
    out = method(p)
    p.finish()
    return out


def parse_expr(text: str, group: ExponentGroup | None = None) -> Expr:
    e = _run(text, group, _Parser.expr)
    return Expr(e.pieces, e.group) if isinstance(e, _TMarker) else e


def parse_value(text: str, group: ExponentGroup | None = None):
    """A constant: Series when free of X, otherwise AlgebraElement."""
    p = _Parser(text, group or QQ)
    e = p.expr()
    p.finish()
    if not e.is_single() or e.single().free_vars():
        raise ParseError("expected a constant", text, 0)
    value = e.single().evaluate({})
    return value.as_series() if value.is_series() else value


def parse_series(text: str, group: ExponentGroup | None = None) -> Series:
    value = parse_value(text, group)
    if isinstance(value, AlgebraElement):
        raise ParseError("expected a series without X", text, 0)
    return value


def parse_set(text: str, group: ExponentGroup | None = None) -> SetOneD:
    return _run(text, group, _Parser.set_one_d)


def parse_region(text: str, group: ExponentGroup | None = None) -> Region:
    return _run(text, group, _Parser.region)


def parse_domain(text: str, group: ExponentGroup | None = None):
    """A Region when the text starts with 'region', else a SetOneD."""
    if text.lstrip().startswith("region"):
        return parse_region(text, group)
    return parse_set(text, group)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"expected a rational number: {exc}", text, 0) from exc


def parse_group(text: str) -> ExponentGroup:
    """'Q' or a '+'-separated list of generators such as 'Q + Q*sqrt(2)'."""
    parts = [p.strip() for p in text.split("+")]
    basis = []
    for part in parts:
        if part == "Q":
            basis.append(1)
            continue
        if not part.startswith("Q*"):
            raise ParseError("group generators look like Q or Q*c", text, text.find(part))
        value = parse_series(part[2:])
        if not value.is_constant():
            raise ParseError("group generators must be real constants", text, text.find(part))
        basis.append(value.constant_value())
    return ExponentGroup(basis)
