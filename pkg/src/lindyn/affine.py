"""Affine maps ``x -> a x + b`` on the line with ``mu = (1/2) e^{-|t|} dt``.

Measures of intervals are finite sums ``sum_k c_k e^{k}`` with rational ``c_k``
and rational exponents ``k``.  Keeping them in that symbolic form makes
equality cases (for instance ``mu(J + b) = e^{-b} mu(J)`` when ``J`` lies in the
positive half-line) cancel exactly before any exponential is evaluated.
"""
from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from mpmath import iv
from mpmath.libmp import (fone, from_rational, mpf_add, mpf_exp, mpf_mul, mpf_neg,
                          mpf_shift, mpf_sign, mpf_sub, round_ceiling, round_floor, to_float)

from .certified import EXP_FLOOR, PREC, Ball, _ball_from_iv, _iv, _precision, exp, frac, upper
from .errors import FixedPointCoversB, InvalidSystem

HALF = Fraction(1, 2)


class ExpPoly:
    """``sum_k c_k e^k`` with rational keys ``k`` (``e^0`` is the constant term)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Fraction, Fraction]] = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c) -> "ExpPoly":
        return cls({Fraction(0): Fraction(c)})

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return ExpPoly(out)

    def __neg__(self):
        return ExpPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c, shift=Fraction(0)) -> "ExpPoly":
        """``c * e^shift * self``."""
        return ExpPoly({k + shift: v * c for k, v in self.terms.items()})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _interval(self):
        total = iv.mpf(0)
        for k, c in self.terms.items():
            total += _iv(c) * _exp_iv(k)
        return total

    def value(self) -> Ball:
        """Certified enclosure."""
        if not self.terms:
            return Ball(0)
        if set(self.terms) == {Fraction(0)}:
            return Ball(self.terms[Fraction(0)])
        with _precision():
            return _ball_from_iv(self._interval())

    def sign(self) -> int:
        """Certified sign; 0 only for exact cancellation, None if not resolved."""
        if not self.terms:
            return 0
        v = self.value()
        if v.lo > 0:
            return 1
        if v.hi < 0:
            return -1
        return None

    def __repr__(self):
        return " + ".join(f"{c}*e^({k})" for k, c in sorted(self.terms.items())) or "0"


@lru_cache(maxsize=1 << 16)
def _exp_iv(k: Fraction):
    with _precision():
        if k < -EXP_FLOOR:
            return iv.mpf([0, iv.ldexp(1, -EXP_FLOOR).b])
        return iv.exp(_iv(k))


# measure ------------------------------------------------------------------------------------------

INF = math.inf


def cdf(t) -> ExpPoly:
    """``F(t) = mu((-inf, t])`` symbolically (``t`` rational or +/-inf)."""
    if t == -INF:
        return ExpPoly()
    if t == INF:
        return ExpPoly.const(1)
    t = Fraction(t)
    if t <= 0:
        return ExpPoly({t: HALF})
    return ExpPoly({Fraction(0): Fraction(1), -t: -HALF})


class IntervalSet:
    """Finite union of intervals with rational (or infinite) endpoints, merged and sorted."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable = ()):
        clean = []
        for lo, hi in intervals:
            lo = lo if lo in (-INF, INF) else frac(lo)
            hi = hi if hi in (-INF, INF) else frac(hi)
            if lo > hi:
                raise InvalidSystem(f"empty interval [{lo}, {hi}]")
            if lo < hi:
                clean.append((lo, hi))
        clean.sort()
        merged: List[Tuple] = []
        for lo, hi in clean:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        self.intervals = tuple(merged)

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        """``"[lo,hi]"`` pieces joined by ``u``; endpoints ``num/den`` or ``inf``."""
        pieces = re.findall(r"\[\s*([^,\]]+)\s*,\s*([^\]]+)\]", text)
        if not pieces:
            raise InvalidSystem(f"cannot parse interval set {text!r}")

        def num(s):
            s = s.strip()
            if s in ("inf", "+inf"):
                return INF
            if s == "-inf":
                return -INF
            return Fraction(s)

        return cls((num(a), num(b)) for a, b in pieces)

    def measure_poly(self) -> ExpPoly:
        out = ExpPoly()
        for lo, hi in self.intervals:
            out = out + cdf(hi) - cdf(lo)
        return out

    def measure(self) -> Ball:
        return self.measure_poly().value()

    def lebesgue(self) -> Fraction:
        if any(v in (-INF, INF) for iv_ in self.intervals for v in iv_):
            return INF
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    def hull(self) -> Tuple:
        return self.intervals[0][0], self.intervals[-1][1]

    def minus_open(self, c: Fraction, r: Fraction) -> "IntervalSet":
        """Remove the open interval ``(c - r, c + r)``."""
        out = []
        for lo, hi in self.intervals:
            if hi <= c - r or lo >= c + r:
                out.append((lo, hi))
                continue
            if lo < c - r:
                out.append((lo, c - r))
            if hi > c + r:
                out.append((c + r, hi))
        return IntervalSet(out)

    def intersect_open(self, c: Fraction, r: Fraction) -> "IntervalSet":
        out = []
        for lo, hi in self.intervals:
            a, b = max(lo, c - r), min(hi, c + r)
            if a < b:
                out.append((a, b))
        return IntervalSet(out)

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __bool__(self):
        return bool(self.intervals)

    def __repr__(self):
        return " u ".join(f"[{lo}, {hi}]" for lo, hi in self.intervals) or "{}"


def total_measure() -> Fraction:
    return Fraction(1)


# maps -------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = frac(self.a), frac(self.b)
        if not 0 < abs(a) <= 1:
            raise InvalidSystem("need 0 < |a| <= 1")
        if a == 1 and b == 0:
            raise InvalidSystem("the identity is excluded")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def fixed_point(self) -> Optional[Fraction]:
        return None if self.a == 1 else self.b / (1 - self.a)

    @property
    def star_bound(self) -> ExpPoly:
        """``|a| e^{-|b|}``."""
        return ExpPoly({-abs(self.b): abs(self.a)})

    def point(self, x, n: int = 1):
        for _ in range(abs(n)):
            x = self.a * x + self.b if n > 0 else (x - self.b) / self.a
        return x

    def iterate_coeffs(self, n: int) -> Tuple[Fraction, Fraction]:
        """``f^n(x) = A x + B``."""
        if self.a == 1:
            return Fraction(1), n * self.b
        A = self.a ** n
        x = self.fixed_point
        return A, x - A * x

    def image(self, s: IntervalSet, n: int = 1) -> IntervalSet:
        A, B = self.iterate_coeffs(n)
        out = []
        for lo, hi in s.intervals:
            p, q = _affine(A, B, lo), _affine(A, B, hi)
            out.append((min(p, q), max(p, q)))
        return IntervalSet(out)


def _affine(A, B, x):
    if x in (-INF, INF):
        return x if A > 0 else -x
    return A * x + B


def recurrent_set(f: AffineMap):
    """``()`` for ``a = 1``, ``"R"`` for the involution ``a = -1``, else the fixed point."""
    if f.a == 1:
        return ()
    if f.a == -1:
        return "R"
    return (f.fixed_point,)


# (star) bound ------------------------------------------------------------------------------------

@dataclass(frozen=True)
class StarReport:
    trials: int
    violations: int
    uncertified: int
    exact_equalities: int
    min_ratio: float
    min_margin_lower: Fraction
    bound: float


def star_margin(f: AffineMap, J: IntervalSet) -> ExpPoly:
    """``mu(f J) - |a| e^{-|b|} mu(J)`` symbolically."""
    return f.image(J).measure_poly() - J.measure_poly().scale(abs(f.a), -abs(f.b))


def random_interval(rng: random.Random, radius: int = 20, den: int = 1000) -> IntervalSet:
    x = Fraction(rng.randint(-radius * den, radius * den), den)
    y = Fraction(rng.randint(-radius * den, radius * den), den)
    if x == y:
        y += Fraction(1, den)
    return IntervalSet([(min(x, y), max(x, y))])


def _exp_bounds(t: Fraction):
    lo = mpf_exp(from_rational(t.numerator, t.denominator, PREC, round_floor), PREC, round_floor)
    hi = mpf_exp(from_rational(t.numerator, t.denominator, PREC, round_ceiling), PREC, round_ceiling)
    return lo, hi


def _cdf_bounds(t: Fraction):
    """Directed-rounding enclosure of ``mu((-inf, t])``."""
    if t <= 0:
        lo, hi = _exp_bounds(t)
        return mpf_shift(lo, -1), mpf_shift(hi, -1)
    lo, hi = _exp_bounds(-t)
    return (mpf_sub(fone, mpf_shift(hi, -1), PREC, round_floor),
            mpf_sub(fone, mpf_shift(lo, -1), PREC, round_ceiling))


def _mass_bounds(lo_t: Fraction, hi_t: Fraction):
    a_lo, a_hi = _cdf_bounds(lo_t)
    b_lo, b_hi = _cdf_bounds(hi_t)
    return mpf_sub(b_lo, a_hi, PREC, round_floor), mpf_sub(b_hi, a_lo, PREC, round_ceiling)


def _fast_margin(f: AffineMap, J: IntervalSet, s_bounds):
    """Enclosure ``(lo, hi)`` of the margin plus float measures, without symbolic work."""
    a, b = f.a, f.b
    m_lo = m_hi = j_lo = j_hi = None
    for x, y in J.intervals:
        p, q = a * x + b, a * y + b
        if a < 0:
            p, q = q, p
        jl, jh = _mass_bounds(x, y)
        il, ih = _mass_bounds(p, q)
        j_lo = jl if j_lo is None else mpf_add(j_lo, jl, PREC, round_floor)
        j_hi = jh if j_hi is None else mpf_add(j_hi, jh, PREC, round_ceiling)
        m_lo = il if m_lo is None else mpf_add(m_lo, il, PREC, round_floor)
        m_hi = ih if m_hi is None else mpf_add(m_hi, ih, PREC, round_ceiling)
    s_lo, s_hi = s_bounds
    lo = mpf_sub(m_lo, mpf_mul(s_hi, j_hi, PREC, round_ceiling), PREC, round_floor)
    hi = mpf_sub(m_hi, mpf_mul(s_lo, j_lo, PREC, round_floor), PREC, round_ceiling)
    return lo, hi, to_float(m_hi), to_float(j_lo)


def star_bound_check(f: AffineMap, trials: int = 1000, seed: int = 0,
                     intervals: Optional[Sequence[IntervalSet]] = None) -> StarReport:
    """Certified check of ``mu(f J) >= |a| e^{-|b|} mu(J)`` on random intervals.

    Directed-rounding bounds settle almost every interval; the rest go through
    the symbolic margin, where equality cases cancel exactly.
    """
    rng = random.Random(seed)
    Js = list(intervals) if intervals is not None else [random_interval(rng) for _ in range(trials)]
    e_lo, e_hi = _exp_bounds(-abs(f.b))
    A = abs(f.a)
    s_bounds = (mpf_mul(from_rational(A.numerator, A.denominator, PREC, round_floor), e_lo, PREC, round_floor),
                mpf_mul(from_rational(A.numerator, A.denominator, PREC, round_ceiling), e_hi, PREC, round_ceiling))
    bound = to_float(s_bounds[0])
    viol = unc = eq = 0
    min_ratio = math.inf
    min_lower: Optional[Fraction] = None
    for J in Js:
        lo_m, hi_m, img_mass, j_mass = _fast_margin(f, J, s_bounds)
        if mpf_sign(lo_m) >= 0:
            lo = _mpf_fraction(lo_m)
        elif mpf_sign(hi_m) < 0:
            viol += 1
            lo = _mpf_fraction(lo_m)
        else:
            m = star_margin(f, J)
            if m.is_zero:
                eq += 1
                lo = Fraction(0)
            else:
                v = m.value()
                lo = v.lo
                if v.hi < 0:
                    viol += 1
                elif v.lo < 0:
                    unc += 1
        min_lower = lo if min_lower is None or lo < min_lower else min_lower
        if j_mass > 0:
            min_ratio = min(min_ratio, img_mass / j_mass)
    return StarReport(len(Js), viol, unc, eq, min_ratio,
                      min_lower if min_lower is not None else Fraction(0), bound)


def _mpf_fraction(x) -> Fraction:
    sign, man, e, _ = x
    v = Fraction(man) * Fraction(2) ** e
    return -v if sign else v


def pushforward_quadrature(f: AffineMap, J: IntervalSet) -> float:
    """``mu(f J)`` by change of variables and numerical quadrature (cross-check only)."""
    from scipy.integrate import quad

    total = 0.0
    a, b = float(f.a), float(f.b)
    for lo, hi in J.intervals:
        lo_f, hi_f = float(lo), float(hi)
        pts = [s for s in (-b / a,) if lo_f < s < hi_f]
        val, _ = quad(lambda s: 0.5 * abs(a) * math.exp(-abs(a * s + b)), lo_f, hi_f, points=pts or None)
        total += val
    return total


# summability witness -------------------------------------------------------------------------

@dataclass(frozen=True)
class SCWitness:
    B_prime: IntervalSet
    delta: Optional[Fraction]
    removed: Ball
    N: int
    head_sums: tuple  # certified partial sums over |n| <= N' for N' = 0..N
    head: Ball
    tail: Ball        # enclosure [0, bound] of the terms with |n| > N
    closed_form: Optional[Ball] = None

    @property
    def total_upper(self) -> Fraction:
        return self.head.hi + self.tail.hi


def _choose_delta(f: AffineMap, B: IntervalSet, eps: Fraction):
    x = f.fixed_point
    lo, hi = B.hull()
    reach = max(abs(lo - x), abs(hi - x), Fraction(1))
    k = math.ceil(math.log2(reach)) + 1
    while True:
        delta = Fraction(2) ** k
        removed = B.intersect_open(x, delta)
        m = removed.measure()
        if m.hi < eps / 2:
            return delta, removed, m
        k -= 1
        if k < -4000:
            raise FixedPointCoversB("no neighbourhood of the fixed point is light enough")


def sc_witness(f: AffineMap, B: IntervalSet, eps=Fraction(1, 100), N: Optional[int] = None,
               tol=Fraction(1, 10 ** 12), max_N: int = 4000) -> SCWitness:
    """``B' <= B`` with ``mu(B - B') < eps`` and a certified bound on ``sum_n mu(f^n B')``."""
    eps = frac(eps)
    if f.a == -1:
        raise InvalidSystem("a = -1 is an involution: every point is recurrent, so no "
                            "neighbourhood removal makes the orbit sums finite")
    if not B or any(v in (-INF, INF) for iv_ in B.intervals for v in iv_):
        raise InvalidSystem("B must be a bounded nonempty interval set")
    if f.a == 1:
        Bp, delta, removed = B, None, Ball(0)
    else:
        delta, cut, removed = _choose_delta(f, B, eps)
        Bp = B.minus_open(f.fixed_point, delta)
    if not Bp:
        raise FixedPointCoversB("B lies inside the removed neighbourhood")

    def term(n):
        return f.image(Bp, n).measure_poly()

    def tail_bound(M):
        return _tail(f, Bp, delta, M)

    if N is None:
        N = 1
        while True:
            t = tail_bound(N)
            if t is not None and t < tol:
                break
            if N >= max_N:
                break
            N *= 2
    t = tail_bound(N)
    if t is None:
        raise FixedPointCoversB("tail bound not available at this N")
    sums, acc = [], term(0)
    sums.append(acc.value())
    for n in range(1, N + 1):
        acc = acc + term(n) + term(-n)
        sums.append(acc.value())
    head = sums[-1]
    closed = _closed_translation_sum(f, Bp) if f.a == 1 else None
    return SCWitness(Bp, delta, removed, N, tuple(sums), head, Ball.from_bounds(0, t), closed)


def _tail(f: AffineMap, Bp: IntervalSet, delta, N: int) -> Optional[Fraction]:
    """Upper bound on ``sum_{|n| > N} mu(f^n B')`` (``None`` if not yet valid)."""
    lo, hi = Bp.hull()
    if f.a == 1:
        b = abs(f.b)
        # translates moving right: [lo + n b, hi + n b] with lo + n b >= 0
        if lo + (N + 1) * b < 0 or hi - (N + 1) * b > 0:
            return None
        q = upper(exp(-b))
        right = HALF * upper(exp(-(lo + (N + 1) * b))) / (1 - q)
        left = HALF * upper(exp(hi - (N + 1) * b)) / (1 - q)
        return right + left
    a = abs(f.a)
    x = f.fixed_point
    # forward iterates shrink by |a| and the density is at most 1/2
    fwd = HALF * Bp.lebesgue() * a ** (N + 1) / (1 - a)
    # backward iterates stay outside |t - x| < delta |a|^-n
    rho0 = delta / a ** (N + 1)
    h = 1 / a - 1
    bwd = upper(exp(abs(x) - rho0)) / (1 - upper(exp(-rho0 * h)))
    return fwd + bwd


def _closed_translation_sum(f: AffineMap, Bp: IntervalSet) -> Ball:
    """Exact ``sum_{n in Z} mu(B' + n b)``: finite head plus summed geometric tails."""
    b = abs(f.b)
    lo, hi = Bp.hull()
    n0 = int(math.ceil(max(abs(lo), abs(hi)) / b)) + 1
    head = ExpPoly()
    for n in range(-n0, n0 + 1):
        head = head + f.image(Bp, n).measure_poly()
    # beyond n0 every translate sits in one half-line, where mu(J + m b) = e^{-m b} mu(J)
    sign = 1 if f.b > 0 else -1
    right = f.image(Bp, sign * (n0 + 1)).measure_poly().value()
    left = f.image(Bp, -sign * (n0 + 1)).measure_poly().value()
    ratio = 1 / (1 - exp(-b))
    return head.value() + (right + left) * ratio
