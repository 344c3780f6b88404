"""Process-wide defaults, overridable per context."""
from __future__ import annotations

import contextlib
import contextvars
import os
from fractions import Fraction

DEFAULT_PRECISION = Fraction(8)
DEFAULT_CONST_BITS = 256

_precision = contextvars.ContextVar("precision", default=None)
_const_bits = contextvars.ContextVar("const_bits", default=None)


def working_precision() -> Fraction:
    """Absolute exponent below which series terms are kept."""
    value = _precision.get()
    if value is not None:
        return value
    env = os.environ.get("HM_PRECISION")
    if env:
        return Fraction(env)
    return DEFAULT_PRECISION


def const_bits() -> int:
    value = _const_bits.get()
    return DEFAULT_CONST_BITS if value is None else value


@contextlib.contextmanager
def settings(precision=None, bits: int | None = None):
    tokens = []
    if precision is not None:
        tokens.append((_precision, _precision.set(Fraction(precision))))
    if bits is not None:
        tokens.append((_const_bits, _const_bits.set(int(bits))))
    try:
        yield
    finally:
        for var, token in reversed(tokens):
            var.reset(token)
