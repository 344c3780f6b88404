"""Certified enclosures of elementary functions on rational intervals.

Every function here takes exact rational endpoints and a working precision
``bits`` and returns a pair ``(lo, hi)`` of dyadic Fractions that is
guaranteed to contain the true value.  Series are summed in integer fixed
point with an explicit count of rounding errors, so no floating point is
involved anywhere.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

Interval = tuple[Fraction, Fraction]

_GUARD = 24


def down(q: Fraction, bits: int) -> Fraction:
    """Largest multiple of 2**-bits that is <= q."""
    return Fraction((q.numerator << bits) // q.denominator, 1 << bits)


def up(q: Fraction, bits: int) -> Fraction:
    return Fraction(-((-q.numerator << bits) // q.denominator), 1 << bits)


def outward(iv: Interval, bits: int) -> Interval:
    return down(iv[0], bits), up(iv[1], bits)


def point(q) -> Interval:
    q = Fraction(q)
    return q, q


def add(a: Interval, b: Interval) -> Interval:
    return a[0] + b[0], a[1] + b[1]


def neg(a: Interval) -> Interval:
    return -a[1], -a[0]


def sub(a: Interval, b: Interval) -> Interval:
    return a[0] - b[1], a[1] - b[0]


def mul(a: Interval, b: Interval) -> Interval:
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(p), max(p)


def contains_zero(a: Interval) -> bool:
    return a[0] <= 0 <= a[1]


def inv(a: Interval) -> Interval:
    if contains_zero(a):
        raise ZeroDivisionError("interval contains zero")
    return 1 / a[1], 1 / a[0]


def div(a: Interval, b: Interval) -> Interval:
    return mul(a, inv(b))


def scale(a: Interval, q: Fraction) -> Interval:
    return (a[0] * q, a[1] * q) if q >= 0 else (a[1] * q, a[0] * q)


def power(a: Interval, n: int) -> Interval:
    if n < 0:
        return inv(power(a, -n))
    if n == 0:
        return Fraction(1), Fraction(1)
    lo, hi = a[0] ** n, a[1] ** n
    if n % 2 == 0:
        if contains_zero(a):
            return Fraction(0), max(lo, hi)
        return min(lo, hi), max(lo, hi)
    return lo, hi


def intersect(a: Interval, b: Interval) -> Interval:
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    if lo > hi:
        raise ArithmeticError("disjoint enclosures for the same value")
    return lo, hi


def width(a: Interval) -> Fraction:
    return a[1] - a[0]


# --- integer helpers -------------------------------------------------------

def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _fixed(q: Fraction, w: int) -> int:
    return (q.numerator << w) // q.denominator


# --- series kernels on exact rationals -------------------------------------

def _atan_series(x: Fraction, bits: int) -> Interval:
    """arctan(x) for |x| <= 1/2, alternating Taylor series."""
    w = bits + _GUARD
    num2, den2 = (x * x).numerator, (x * x).denominator
    p = _fixed(x, w)
    total, k, errors = 0, 0, 1
    while p != 0:
        term = p // (2 * k + 1)
        total += -term if k % 2 else term
        p = (p * num2) // den2
        k += 1
        errors += 3
    e = Fraction(errors + 1, 1 << w)
    s = Fraction(total, 1 << w)
    return s - e, s + e


def _atanh_series(z: Fraction, bits: int) -> Interval:
    """atanh(z) for 0 <= z <= 1/3."""
    w = bits + _GUARD
    num2, den2 = (z * z).numerator, (z * z).denominator
    p = _fixed(z, w)
    total, k, errors = 0, 0, 1
    while p != 0:
        total += p // (2 * k + 1)
        p = (p * num2) // den2
        k += 1
        errors += 3
    # the tail after p hits zero is below 2 ulp since z^2 <= 1/9
    e = Fraction(errors + 2, 1 << w)
    s = Fraction(total, 1 << w)
    return s - e, s + e


def _exp_small(r: Fraction, bits: int) -> Interval:
    """exp(r) for |r| <= 1/2 via Taylor series."""
    w = bits + _GUARD
    p = 1 << w
    total, k, errors = 0, 0, 0
    while p != 0:
        total += p
        k += 1
        p = (p * r.numerator) // (r.denominator * k)
        errors += 2
    e = Fraction(errors + 2, 1 << w)
    s = Fraction(total, 1 << w)
    return s - e, s + e


@lru_cache(maxsize=64)
def pi(bits: int) -> Interval:
    a = _atan_series(Fraction(1, 5), bits + 8)
    b = _atan_series(Fraction(1, 239), bits + 8)
    return outward(sub(scale(a, Fraction(16)), scale(b, Fraction(4))), bits + 4)


@lru_cache(maxsize=64)
def log2(bits: int) -> Interval:
    return outward(scale(_atanh_series(Fraction(1, 3), bits + 4), Fraction(2)), bits + 4)


def _atan_point(x: Fraction, bits: int) -> Interval:
    if x == 0:
        return point(0)
    if x < 0:
        return neg(_atan_point(-x, bits))
    if x > 1:
        half_pi = scale(pi(bits + 2), Fraction(1, 2))
        return sub(half_pi, _atan_point(1 / x, bits + 2))
    if x > Fraction(1, 2):
        y = (x - Fraction(1, 2)) / (1 + x / 2)
        return add(_atan_series(Fraction(1, 2), bits + 2), _atan_series(y, bits + 2))
    return _atan_series(x, bits)


def _log_point(x: Fraction, bits: int) -> Interval:
    if x <= 0:
        raise ValueError("log of a non-positive number")
    if x == 1:
        return point(0)
    k = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** k
    while m >= 2:
        m /= 2
        k += 1
    while m < 1:
        m *= 2
        k -= 1
    extra = max(k, -k).bit_length()
    z = (m - 1) / (m + 1)
    core = scale(_atanh_series(z, bits + 2), Fraction(2))
    return add(core, scale(log2(bits + extra + 2), Fraction(k)))


def _exp_point(x: Fraction, bits: int) -> Interval:
    if x == 0:
        return point(1)
    if x < 0:
        lo, hi = _exp_point(-x, bits + 4 + _magnitude_bits(-x))
        return 1 / hi, 1 / lo
    squarings = max(0, (x.numerator // x.denominator).bit_length() + 1)
    r = x / (1 << squarings)
    work = bits + 2 * squarings + 2 * _magnitude_bits(x) + 8
    iv = _exp_small(r, work)
    for _ in range(squarings):
        iv = outward(mul(iv, iv), work)
    return iv


def _magnitude_bits(x: Fraction) -> int:
    """A crude upper bound for log2(exp(x)) used to size guard bits."""
    return 2 * (abs(x.numerator) // x.denominator + 1)


# --- monotone lifting to intervals -----------------------------------------

def atan(a: Interval, bits: int) -> Interval:
    return _atan_point(a[0], bits)[0], _atan_point(a[1], bits)[1]


def log(a: Interval, bits: int) -> Interval:
    if a[0] <= 0:
        raise ValueError("log enclosure needs a positive interval")
    return _log_point(a[0], bits)[0], _log_point(a[1], bits)[1]


def exp(a: Interval, bits: int) -> Interval:
    return _exp_point(a[0], bits)[0], _exp_point(a[1], bits)[1]


def root(a: Interval, n: int, bits: int) -> Interval:
    """Real n-th root; odd n allows negative inputs."""
    if a[0] < 0:
        if n % 2 == 0:
            raise ValueError("even root of a negative interval")
        if a[1] <= 0:
            return neg(root(neg(a), n, bits))
        lo = neg(root((Fraction(0), -a[0]), n, bits))
        hi = root((Fraction(0), a[1]), n, bits)
        return lo[0], hi[1]
    w = bits + _GUARD
    scale_n = 1 << (w * n)
    lo_int = iroot((a[0].numerator * scale_n) // a[0].denominator, n)
    hi_int = iroot(-((-a[1].numerator * scale_n) // a[1].denominator), n) + 1
    return Fraction(lo_int, 1 << w), Fraction(hi_int, 1 << w)


def sqrt(a: Interval, bits: int) -> Interval:
    return root(a, 2, bits)


def asin(a: Interval, bits: int) -> Interval:
    if a[0] < -1 or a[1] > 1:
        raise ValueError("arcsin enclosure outside [-1, 1]")
    return _asin_point(a[0], bits)[0], _asin_point(a[1], bits)[1]


def _asin_point(x: Fraction, bits: int) -> Interval:
    if x == 0:
        return point(0)
    if x < 0:
        return neg(_asin_point(-x, bits))
    if x == 1:
        return scale(pi(bits + 2), Fraction(1, 2))
    w = bits + 8
    if x > Fraction(1, 2):
        # asin(x) = pi/2 - 2 asin(sqrt((1-x)/2)) keeps the atan argument small
        inner = _asin_point_from_sqrt((1 - x) / 2, w + 2)
        return sub(scale(pi(w), Fraction(1, 2)), scale(inner, Fraction(2)))
    return _asin_point_from_sqrt(x * x, w, sign_source=x)


def _asin_point_from_sqrt(y2: Fraction, bits: int, sign_source: Fraction | None = None) -> Interval:
    """asin(sqrt(y2)) for 0 <= y2 <= 1/4 via atan(y / sqrt(1 - y^2))."""
    w = bits + 8
    if sign_source is None:
        y = sqrt(point(y2), w)
    else:
        y = point(sign_source)
    c = sqrt(point(1 - y2), w)
    ratio = div(y, c)
    return atan(outward(ratio, w), bits)


def pow_frac(a: Interval, e: Fraction, bits: int) -> Interval:
    """a ** e for a positive interval (or any interval when e is an integer)."""
    if e.denominator == 1:
        return power(a, int(e))
    if a[0] < 0 and e.denominator % 2 == 0:
        raise ValueError("even root of a negative interval")
    w = bits + _GUARD + 8 * abs(e.numerator).bit_length()
    r = root(outward(a, w), e.denominator, w)
    if e.numerator < 0 and contains_zero(r):
        raise ZeroDivisionError("negative power of an interval touching zero")
    return power(r, e.numerator)
