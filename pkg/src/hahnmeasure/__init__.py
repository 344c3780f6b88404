"""Exact Lebesgue measure and integration over Puiseux and Hahn series fields.

Values live in the Lebesgue algebra R[X], where R is the series field and X
stands for log(1/t).
"""
from .algebra import AlgebraElement, X, ReducedElement, reduce
from .calculus import (MeasureValue, check_transformation, differentiate_under_integral,
                       integrate_interval, integrate_region, integrate_set, measure_1d,
                       measure_region, standard_part_measure)
from .constants import PI, RealConstant
from .constructible import (convolve, differentiate, extract_coefficients, limit_at_infinity,
                            limit_at_point, simple_description)
from .datum import (AlgebraMap, Section, build_isomorphism_Q, reduced_invariance_check,
                    verify_nonisomorphism_rank2)
from .errors import (DegreeBoundViolation, DivergentIntegral, DomainError, ExtractionFailed,
                     HahnMeasureError, ParseError, PrecisionExhausted, UnsupportedIntegrand)
from .exponents import QQ, Exponent, ExponentGroup
from .logexp import extended_log, partial_exp, partial_log
from .parser import parse_domain, parse_expr, parse_region, parse_series, parse_set
from .semialg import Expr, Guard, Interval, Region, SetOneD, box
from .series import Series, t
from .symbolic import Sym, var

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "X", "ReducedElement", "reduce", "MeasureValue", "check_transformation",
    "differentiate_under_integral", "integrate_interval", "integrate_region", "integrate_set",
    "measure_1d", "measure_region", "standard_part_measure", "PI", "RealConstant", "convolve",
    "differentiate", "extract_coefficients", "limit_at_infinity", "limit_at_point",
    "simple_description", "AlgebraMap", "Section", "build_isomorphism_Q",
    "reduced_invariance_check", "verify_nonisomorphism_rank2", "DegreeBoundViolation",
    "DivergentIntegral", "DomainError", "ExtractionFailed", "HahnMeasureError", "ParseError",
    "PrecisionExhausted", "UnsupportedIntegrand", "QQ", "Exponent", "ExponentGroup",
    "extended_log", "partial_exp", "partial_log", "parse_domain", "parse_expr", "parse_region",
    "parse_series", "parse_set", "Expr", "Guard", "Interval", "Region", "SetOneD", "box",
    "Series", "t", "Sym", "var",
]
