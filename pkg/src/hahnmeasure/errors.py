"""Exception hierarchy shared by every module."""


class HahnMeasureError(Exception):
    """Base class for all library errors."""


class DomainError(HahnMeasureError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class NegativeRadicand(DomainError):
    pass


class PrecisionExhausted(HahnMeasureError):
    """A decision needs more precision than the configured budget allows."""


class ZeroPolynomial(HahnMeasureError):
    """Degree or leading data requested of the zero element."""


class UnsupportedIntegrand(HahnMeasureError):
    """The expression falls outside the closed-form fragment."""


class NonlinearFactorRequired(UnsupportedIntegrand):
    """A denominator factor cannot be split over the coefficient field."""


class DivergentIntegral(HahnMeasureError):
    pass


class NotMonotone(HahnMeasureError):
    pass


class NotRBounded(DomainError):
    """The set is not contained in a box with standard (real) bounds."""


class ExtractionFailed(HahnMeasureError):
    pass


class OracleUnavailable(HahnMeasureError):
    pass


class DegreeBoundViolation(HahnMeasureError, AssertionError):
    """A measure or integral exceeded the degree bound in X."""


class ParseError(HahnMeasureError, SyntaxError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text_input = text
        self.position = position
        line = text.count("\n", 0, position) + 1
        column = position - (text.rfind("\n", 0, position) + 1) + 1
        self.line, self.column = line, column
        super().__init__(f"{message} at line {line}, column {column}")
