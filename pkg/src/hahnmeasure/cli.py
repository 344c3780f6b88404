"""Command-line front end.

Exit codes: 0 success, 1 usage or syntax error, 2 domain error (unsupported
integrand, divergent integral, failed extraction, ...), 3 precision exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import calculus, constructible, datum, oracle
from .algebra import AlgebraElement
from .config import settings, working_precision
from .constants import Ordering
from .errors import (DivergentIntegral, HahnMeasureError, ParseError, PrecisionExhausted)
from .exponents import ExponentGroup, QQ
from .parser import (parse_domain, parse_expr, parse_group, parse_series,
                     parse_set, parse_value)
from .semialg import NEG_INF, POS_INF, Region, eval_expr
from .series import INFINITE, Series

SCHEMA = 1

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class Result:
    """Text lines for humans and a JSON payload for programs."""

    def __init__(self, text, payload, oracle_check=None):
        self.text = text if isinstance(text, list) else [text]
        self.payload = payload
        self.oracle_check = oracle_check


def _value_json(v):
    if isinstance(v, calculus.MeasureValue):
        return {"text": str(v), "exact": v.to_json()}
    if isinstance(v, (Series, AlgebraElement)):
        return {"text": str(v), "exact": v.to_json()}
    return str(v)


def _variable(e, given, default="x"):
    if given:
        return given
    names = sorted(e.free_vars())
    return names[0] if len(names) == 1 else default


def _domain_from(rest: list, group) -> object:
    if not rest or rest[0] != "on":
        raise UsageError("expected: integrate EXPR on DOMAIN")
    text = " ".join(rest[1:])
    if not text:
        raise UsageError("missing domain after 'on'")
    return parse_domain(text, group)


def _integral(e, domain, variable):
    if isinstance(domain, Region):
        return calculus.integrate_region(e, domain)
    return calculus.integrate_set(e, domain, _variable(e, variable))


def _oracle_line(report: oracle.OracleReport, tol=1e-6) -> str:
    verdict = "yes" if report.within(tol) else "no"
    return (f"oracle at t = {report.tau}: symbolic {report.symbolic:.10g}, "
            f"numeric {report.numeric:.10g}, agree within {tol:g}: {verdict}")


# --- commands -------------------------------------------------------------------------------


def cmd_eval(args, group):
    e = parse_expr(args.expr, group)
    if not args.at:
        return Result(str(e), {"value": str(e)})
    point = {}
    for item in args.at:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--at expects NAME=VALUE, got {item!r}")
        point[name.strip()] = parse_value(value, group)
    value = eval_expr(e, point)
    return Result(str(value), {"value": _value_json(value)})


def cmd_measure(args, group):
    domain = parse_domain(args.domain, group)
    if isinstance(domain, Region):
        value = calculus.measure_region(domain)
    else:
        value = calculus.measure_1d(domain)
    check = None
    text = [str(value)]
    if args.check:
        check = oracle.check_integral(1, domain, value, args.oracle_tau)
        text.append(_oracle_line(check))
    return Result(text, {"value": _value_json(value), "degree": value.degree()
                         if value.is_finite else None}, check)


def cmd_integrate(args, group):
    e = parse_expr(args.expr, group)
    domain = _domain_from(args.rest, group)
    value = _integral(e, domain, args.var)
    check = None
    text = [str(value)]
    if args.check:
        check = oracle.check_integral(e, domain, value, args.oracle_tau, args.var)
        text.append(_oracle_line(check))
    return Result(text, {"value": _value_json(value),
                         "degree": value.degree() if value.is_finite else None}, check)


def cmd_antideriv(args, group):
    e = parse_expr(args.expr, group)
    F = calculus.antiderivative_of(e, _variable(e, args.var))
    return Result(str(F), {"value": str(F)})


def _point_arg(text, group):
    if text in ("inf", "+inf"):
        return POS_INF
    if text == "-inf":
        return NEG_INF
    return parse_expr(text, group).single()


def cmd_limit(args, group):
    e = parse_expr(args.expr, group)
    v = _variable(e, args.var)
    at = _point_arg(args.at, group)
    if at is POS_INF:
        lim = constructible.limit_at_infinity(e, v, args.mode)
    elif at is NEG_INF:
        lim = constructible.limit_at_infinity(e, v, args.mode, direction=-1)
    else:
        lim = constructible.limit_at_point(e, at, args.side, v, args.mode)
    return Result(str(lim), {"kind": lim.kind, "value": None if not lim.is_finite else str(lim)})


def cmd_convolve(args, group):
    g = parse_expr(args.expr, group)
    h = parse_series(args.h, group)
    out = constructible.convolve(g, h, args.var, args.point)
    return Result(str(out), {"value": str(out)})


def cmd_coeffs(args, group):
    e = parse_expr(args.expr, group)
    comps = parse_set(args.interval, group).components
    if len(comps) != 1:
        raise UsageError("--interval takes a single interval")
    points = [parse_value(p, group) for p in args.points.split(";")] if args.points else []
    hs = constructible.extract_coefficients(e, comps[0], _variable(e, args.var), points)
    lines = [f"h{j} = {h}" for j, h in enumerate(hs)]
    return Result(lines, {"coefficients": [str(h) for h in hs]})


_SYMBOL = {Ordering.LESS: "<", Ordering.EQUAL: "=", Ordering.GREATER: ">"}


def cmd_compare(args, group):
    a = AlgebraElement.lift(parse_value(args.a, group), group)
    b = AlgebraElement.lift(parse_value(args.b, group), group)
    order = a.compare(b)
    return Result(f"{a} {_SYMBOL[order]} {b}", {"ordering": str(order)})


def _stdpart_value(v):
    if isinstance(v, AlgebraElement) and v.degree() > 0:
        return "+inf" if v.sign() > 0 else "-inf"
    s = v.as_series() if isinstance(v, AlgebraElement) else v
    st = s.standard_part()
    if st is INFINITE:
        return "+inf" if s.sign() > 0 else "-inf"
    return str(st)


def cmd_stdpart(args, group):
    text = args.arg.strip()
    if text.startswith(("[", "]", "{", "region")):
        A = parse_domain(text, group)
        report = calculus.standard_part_measure(A, strict=args.strict)
        lines = [f"st(measure) = {report.standard_part_of_measure}",
                 f"measure(st) = {report.measure_of_standard_part}",
                 f"R-bounded: {'yes' if report.r_bounded else 'no'}",
                 f"agree: {'yes' if report.agree else 'no'}"]
        return Result(lines, {"standard_part_of_measure": str(report.standard_part_of_measure),
                              "measure_of_standard_part": str(report.measure_of_standard_part),
                              "r_bounded": report.r_bounded, "agree": report.agree})
    value = _stdpart_value(parse_value(text, group))
    return Result(value, {"value": value})


def cmd_transform_check(args, group):
    phi = parse_expr(args.phi, group).single()
    f = parse_expr(args.f, group)
    U = parse_set(args.over, group)
    report = calculus.check_transformation(phi, f, U, args.u, args.x)
    lines = [f"image = {report.image}", f"direct = {report.direct}",
             f"transformed = {report.transformed}", f"agree: {'yes' if report.agree else 'no'}"]
    return Result(lines, {"image": str(report.image), "direct": _value_json(report.direct),
                          "transformed": _value_json(report.transformed), "agree": report.agree})


def _section(text: str, group) -> datum.Section:
    pairs = []
    for part in text.split(","):
        lhs, sep, rhs = part.partition("->")
        if not sep:
            raise UsageError(f"section entries look like 't^-1 -> 2*t^-1', got {part!r}")
        gen = parse_series(lhs, group)
        if not gen.is_monomial() or gen.lead_coeff != 1:
            raise UsageError(f"{lhs.strip()!r} is not a power of t")
        pairs.append((gen.ord(), parse_series(rhs, group)))
    return datum.Section(pairs, group)


def cmd_iso(args, group):
    target = _section(args.section, group)
    source = _section(args.source, group) if args.source else datum.Section(
        [(g, Series.monomial(1, g, group)) for g in target.generators], group)
    phi = datum.build_isomorphism_Q(source, target)
    return Result(str(phi), {"x_image": str(phi.x_image), "shift": _value_json(phi.shift)})


def cmd_witness_rank2(args, group):
    zeta = parse_series(args.zeta).constant_value()
    rank2 = ExponentGroup([1, zeta])
    unit = parse_series(args.unit, rank2)
    report = datum.verify_nonisomorphism_rank2(zeta, unit)
    return Result(str(report).split("\n"), report.to_json())


def cmd_oracle(args, group):
    if args.measure:
        domain = parse_domain(args.measure, group)
        e = parse_expr("1", group)
        value = (calculus.measure_region(domain) if isinstance(domain, Region)
                 else calculus.measure_1d(domain))
    else:
        if not args.expr:
            raise UsageError("oracle needs EXPR on DOMAIN or --measure DOMAIN")
        e = parse_expr(args.expr, group)
        domain = _domain_from(args.rest, group)
        value = _integral(e, domain, args.var)
    report = oracle.check_integral(e, domain, value, args.oracle_tau, args.var)
    return Result([str(value), _oracle_line(report)], {"value": _value_json(value)}, report)


# --- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="hahnmeasure", description=(
        "Exact measures and integrals over Puiseux and Hahn series fields, "
        "with values in the Lebesgue algebra R[X]."))
    p.add_argument("--precision", type=Fraction, default=None,
                   help="series are kept below t^PRECISION (default 8, or $HM_PRECISION)")
    p.add_argument("--const-bits", type=int, default=None,
                   help="bit budget for deciding signs of real constants (default 256)")
    p.add_argument("--group", default="Q", help="value group, e.g. 'Q' or 'Q + Q*sqrt(2)'")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--oracle-tau", type=Fraction, default=oracle.DEFAULT_TAU,
                   help="t is instantiated at this value for numerical checks (default 1/1000)")
    sub = p.add_subparsers(dest="command", parser_class=_ArgumentParser)

    s = sub.add_parser("eval", help="simplify an expression or evaluate it at a point")
    s.add_argument("expr")
    s.add_argument("--at", action="append", metavar="NAME=VALUE")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("measure", help="Lebesgue measure of a set or region")
    s.add_argument("domain")
    s.add_argument("--check", action="store_true", help="compare with numerical quadrature")
    s.set_defaults(run=cmd_measure)

    s = sub.add_parser("integrate", help="integral of an expression: integrate EXPR on DOMAIN")
    s.add_argument("expr")
    s.add_argument("rest", nargs="+")
    s.add_argument("--var")
    s.add_argument("--check", action="store_true")
    s.set_defaults(run=cmd_integrate)

    s = sub.add_parser("antideriv", help="antiderivative on each cell")
    s.add_argument("expr")
    s.add_argument("--var")
    s.set_defaults(run=cmd_antideriv)

    s = sub.add_parser("limit", help="limit at a point or at +-inf")
    s.add_argument("expr")
    s.add_argument("--at", required=True, help="inf, -inf or a point")
    s.add_argument("--side", choices=("+", "-"), default="+")
    s.add_argument("--mode", choices=("P", "S"), default="P",
                   help="P: X is a constant; S: log x is also allowed to tend to infinity")
    s.add_argument("--var")
    s.set_defaults(run=cmd_limit)

    s = sub.add_parser("convolve", help="convolution with the Cauchy kernel of width h")
    s.add_argument("expr")
    s.add_argument("--h", required=True)
    s.add_argument("--var", default="s")
    s.add_argument("--point", default="x")
    s.set_defaults(run=cmd_convolve)

    s = sub.add_parser("coeffs", help="X-coefficient functions on an interval")
    s.add_argument("expr")
    s.add_argument("--interval", required=True)
    s.add_argument("--points", help="extra sample points separated by ';'")
    s.add_argument("--var")
    s.set_defaults(run=cmd_coeffs)

    s = sub.add_parser("compare", help="order two elements of R[X]")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(run=cmd_compare)

    s = sub.add_parser("stdpart", help="standard part of a value, or st of a measure vs measure of st")
    s.add_argument("arg")
    s.add_argument("--strict", action="store_true", help="reject sets that are not R-bounded")
    s.set_defaults(run=cmd_stdpart)

    s = sub.add_parser("transform-check", help="change of variables x = phi(u) on a set")
    s.add_argument("--phi", required=True)
    s.add_argument("--f", required=True)
    s.add_argument("--over", required=True)
    s.add_argument("--u", default="u")
    s.add_argument("--x", default="x")
    s.set_defaults(run=cmd_transform_check)

    s = sub.add_parser("iso", help="isomorphism induced by a change of section on Q")
    s.add_argument("--section", required=True, help="e.g. 't^-1 -> 2*t^-1'")
    s.add_argument("--source", help="starting section (default: the standard one)")
    s.set_defaults(run=cmd_iso)

    s = sub.add_parser("witness-rank2", help="two sections on Q + Q*zeta with non-isomorphic measures")
    s.add_argument("--zeta", required=True)
    s.add_argument("--unit", required=True)
    s.set_defaults(run=cmd_witness_rank2)

    s = sub.add_parser("oracle", help="numerical check: oracle EXPR on DOMAIN, or --measure DOMAIN")
    s.add_argument("expr", nargs="?")
    s.add_argument("rest", nargs="+")
    s.add_argument("--measure")
    s.add_argument("--var")
    s.set_defaults(run=cmd_oracle)
    return p


def _emit_error(args_format, kind: str, message: str, out, err):
    if args_format == "json":
        out.write(json.dumps({"schema": SCHEMA, "error": {"type": kind, "message": message}}) + "\n")
    else:
        err.write(f"{kind}: {message}\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    fmt = "text"
    try:
        args = parser.parse_args(argv)
        fmt = args.format
        if not args.command:
            raise UsageError("missing command; see --help")
        group = parse_group(args.group) if args.group != "Q" else QQ
        with settings(args.precision, args.const_bits):
            precision = working_precision()
            result = args.run(args, group)
    except UsageError as exc:
        _emit_error(fmt, "UsageError", str(exc), out, err)
        return EXIT_USAGE
    except ParseError as exc:
        _emit_error(fmt, "ParseError", str(exc), out, err)
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        _emit_error(fmt, "PrecisionExhausted", str(exc), out, err)
        return EXIT_PRECISION
    except DivergentIntegral as exc:
        _emit_error(fmt, "DivergentIntegral", str(exc), out, err)
        return EXIT_DOMAIN
    except (HahnMeasureError, ValueError, ZeroDivisionError) as exc:
        _emit_error(fmt, type(exc).__name__, str(exc), out, err)
        return EXIT_DOMAIN
    if fmt == "json":
        payload = {"schema": SCHEMA, "command": args.command,
                   "precision": str(precision),
                   "result": result.payload,
                   "oracle_check": result.oracle_check.to_json() if result.oracle_check else None}
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write("\n".join(result.text) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

