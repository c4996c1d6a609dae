"""Certified reals: exact rationals plus rational midpoint-radius balls.

A *Real* in this package is either a :class:`fractions.Fraction` (exact) or a
:class:`Ball` ``mid +/- rad`` with rational ends.  Ball arithmetic is exact on
the rational endpoints, so the only rounding happens when a transcendental
value (``exp``, non-integer powers, roots) is first enclosed; that enclosure is
produced by mpmath's outward-rounded interval context.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

import mpmath
from mpmath import iv

PREC = 128
# balls whose endpoint denominators exceed this many bits get re-rounded
_TIDY_BITS = 4 * PREC


class Ball:
    """Closed interval ``[mid - rad, mid + rad]`` with rational mid and radius."""

    __slots__ = ("_mid", "_rad")

    def __init__(self, mid, rad=0):
        mid = Fraction(mid)
        rad = Fraction(rad)
        if rad < 0:
            raise ValueError("negative radius")
        object.__setattr__(self, "_mid", mid)
        object.__setattr__(self, "_rad", rad)

    def __setattr__(self, name, value):
        raise AttributeError("Ball is immutable")

    @classmethod
    def from_bounds(cls, lo, hi) -> "Ball":
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        return cls((lo + hi) / 2, (hi - lo) / 2)

    @property
    def mid(self) -> Fraction:
        return self._mid

    @property
    def rad(self) -> Fraction:
        return self._rad

    @property
    def lo(self) -> Fraction:
        return self._mid - self._rad

    @property
    def hi(self) -> Fraction:
        return self._mid + self._rad

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def tidy(self, bits: int = PREC) -> "Ball":
        """Round the endpoints outward to dyadic rationals with ``bits`` bits."""
        lo, hi = self.lo, self.hi
        scale = 1 << bits
        lo_r = Fraction(math.floor(lo * scale), scale)
        hi_r = Fraction(math.ceil(hi * scale), scale)
        # keep relative precision for tiny numbers
        if lo_r == hi_r == 0 and (lo != 0 or hi != 0):
            return self
        return Ball.from_bounds(lo_r, hi_r)

    def _maybe_tidy(self) -> "Ball":
        if (self._mid.denominator.bit_length() > _TIDY_BITS
                or self._rad.denominator.bit_length() > _TIDY_BITS):
            mag = max(abs(self.lo), abs(self.hi))
            if mag == 0:
                return self
            # bits relative to the magnitude of the ball
            extra = max(0, -math.floor(math.log2(mag)) if mag < 1 else 0)
            return self.tidy(PREC + extra)
        return self

    # arithmetic -----------------------------------------------------------
    def __neg__(self):
        return Ball(-self._mid, self._rad)

    def __pos__(self):
        return self

    def __abs__(self):
        lo, hi = self.lo, self.hi
        if lo >= 0:
            return self
        if hi <= 0:
            return -self
        return Ball.from_bounds(0, max(-lo, hi))

    def __add__(self, other):
        if isinstance(other, Ball):
            return Ball(self._mid + other._mid, self._rad + other._rad)._maybe_tidy()
        if isinstance(other, (int, Rational)):
            return Ball(self._mid + other, self._rad)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (Ball, int, Rational)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Rational)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Ball):
            m1, r1, m2, r2 = self._mid, self._rad, other._mid, other._rad
            return Ball(m1 * m2, abs(m1) * r2 + abs(m2) * r1 + r1 * r2)._maybe_tidy()
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            return Ball(self._mid * other, self._rad * abs(other))._maybe_tidy()
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "Ball":
        lo, hi = self.lo, self.hi
        if lo <= 0 <= hi:
            raise ZeroDivisionError("ball contains zero")
        return Ball.from_bounds(1 / hi, 1 / lo)._maybe_tidy()

    def __truediv__(self, other):
        if isinstance(other, Ball):
            return self * other.reciprocal()
        if isinstance(other, (int, Rational)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.reciprocal() * Fraction(other)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (self ** -k).reciprocal()
        lo, hi = self.lo, self.hi
        cands = [lo ** k, hi ** k]
        if k % 2 == 0 and lo < 0 < hi:
            cands.append(Fraction(0))
        return Ball.from_bounds(min(cands), max(cands))._maybe_tidy()

    def __eq__(self, other):
        if isinstance(other, Ball):
            return self._mid == other._mid and self._rad == other._rad
        if isinstance(other, (int, Rational)):
            return self._rad == 0 and self._mid == other
        return NotImplemented

    def __hash__(self):
        return hash((self._mid, self._rad))

    def __float__(self):
        return float(self._mid)

    def __repr__(self):
        return f"Ball({float(self._mid)!r} +/- {float(self._rad):.3g})"


Real = Union[Fraction, Ball]


def frac(x) -> Fraction:
    """Parse ints, ``"num/den"`` strings and Fractions (floats are rejected)."""
    if isinstance(x, float):
        raise TypeError("floating-point input is not accepted in exact paths; "
                        "pass a Fraction or a 'num/den' string")
    return Fraction(x)


def lower(x) -> Fraction:
    return x.lo if isinstance(x, Ball) else Fraction(x)


def upper(x) -> Fraction:
    return x.hi if isinstance(x, Ball) else Fraction(x)


def is_exact(x) -> bool:
    return not isinstance(x, Ball) or x.rad == 0


def exact_value(x) -> Fraction:
    if isinstance(x, Ball):
        if x.rad:
            raise ValueError("value is not exact")
        return x.mid
    return Fraction(x)


def as_ball(x) -> Ball:
    return x if isinstance(x, Ball) else Ball(x)


def certainly_lt(x, y) -> bool:
    return upper(x) < lower(y)


def certainly_le(x, y) -> bool:
    return upper(x) <= lower(y)


def certainly_pos(x) -> bool:
    return lower(x) > 0


def rmax(values: Iterable) -> Real:
    """Enclosure of the maximum of Reals (exact when all inputs are exact)."""
    values = list(values)
    if all(not isinstance(v, Ball) for v in values):
        return max(values)
    return Ball.from_bounds(max(lower(v) for v in values), max(upper(v) for v in values))


def rmin(values: Iterable) -> Real:
    values = list(values)
    if all(not isinstance(v, Ball) for v in values):
        return min(values)
    return Ball.from_bounds(min(lower(v) for v in values), min(upper(v) for v in values))


def rsum(values: Iterable) -> Real:
    total: Real = Fraction(0)
    for v in values:
        total = total + v
    return total


def to_float(x) -> float:
    return float(x)


# interval kernels ---------------------------------------------------------

@contextmanager
def _precision(bits: int = PREC):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _mpf_tuple_to_fraction(t) -> Fraction:
    sign, man, exp, _bc = t
    if man == 0 and exp != 0:
        raise OverflowError("non-finite interval endpoint")
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def _iv(q: Fraction):
    q = Fraction(q)
    return iv.mpf(q.numerator) / q.denominator


def _ball_from_iv(x) -> Ball:
    lo_t, hi_t = x._mpi_
    return Ball.from_bounds(_mpf_tuple_to_fraction(lo_t), _mpf_tuple_to_fraction(hi_t))


def _iv_of(x):
    if isinstance(x, Ball):
        lo, hi = _iv(x.lo), _iv(x.hi)
        return iv.mpf([lo.a, hi.b])
    return _iv(x)


# below this exponent e**x is enclosed by [0, 2**-EXP_FLOOR] (valid since e > 2)
EXP_FLOOR = 4096


def exp(x) -> Ball:
    """Certified enclosure of ``e**x`` for a rational (or ball) argument."""
    if upper(x) < -EXP_FLOOR:
        return Ball.from_bounds(0, Fraction(1, 2 ** EXP_FLOOR))
    with _precision():
        return _ball_from_iv(iv.exp(_iv_of(x)))


def log(x) -> Ball:
    if lower(x) <= 0:
        raise ValueError("log of a non-positive number")
    with _precision():
        return _ball_from_iv(iv.log(_iv_of(x)))


def power(base, e) -> Real:
    """``base ** e`` for positive ``base``; exact when ``e`` is an integer."""
    e = Fraction(e)
    if e.denominator == 1:
        k = int(e)
        if isinstance(base, Ball):
            return base ** k
        return Fraction(base) ** k
    if lower(base) <= 0:
        raise ValueError("non-integer power of a non-positive number")
    if not isinstance(base, Ball):
        r = _exact_root(Fraction(base), e.denominator)
        if r is not None:
            return r ** e.numerator
    with _precision():
        return _ball_from_iv(_iv_of(base) ** _iv(e))


def _exact_root(q: Fraction, k: int):
    if max(q.numerator.bit_length(), q.denominator.bit_length()) > 4096:
        return None  # not worth an exact search; the interval route is fine

    def iroot(n):
        if k == 2:
            r = math.isqrt(n)
            return r if r * r == n else None
        r = round(n ** (1.0 / k)) if n < 2 ** 1000 else None
        if r is None:
            lo, hi = 0, 1 << (n.bit_length() // k + 1)
            while lo < hi:
                mid = (lo + hi) // 2
                if mid ** k < n:
                    lo = mid + 1
                else:
                    hi = mid
            r = lo
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** k == n:
                return c
        return None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def root(x, k) -> Real:
    """Certified ``x ** (1/k)`` for ``x >= 0``; exact for perfect powers."""
    k = Fraction(k)
    if lower(x) < 0:
        raise ValueError("root of a negative number")
    if upper(x) == 0:
        return Fraction(0)
    if k == 1:
        return x
    if isinstance(x, Ball) and x.lo <= 0:
        hi = root(x.hi, k)
        return Ball.from_bounds(0, upper(hi))
    return power(x, 1 / k)


def fmt(x) -> str:
    """Human readable rendering; exact values as ``num/den``."""
    if isinstance(x, Ball):
        return f"{float(x.mid):.17g} +/- {float(x.rad):.3g}"
    x = Fraction(x)
    if max(x.numerator.bit_length(), x.denominator.bit_length()) > 2048:
        # exact but unreadable; show 17 significant digits instead
        with mpmath.workprec(PREC):
            return "~" + mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, 17)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
