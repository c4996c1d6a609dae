"""Weight profiles: closed-form orbit measure sequences with certified tails.

A profile is the sequence ``n -> mu(f^n(x))`` along one orbit.  Every closed
family knows its *regime* on each side, i.e. a formula valid for all
``|n| >= start`` on that side.  Regimes are what make summability decidable:

* ``geometric``  ``coef * rate**|n|``
* ``power``      ``coef * (offset + |n|)**(-rate)``
* ``gaussian``   ``coef * rate**(n**2 + lin*|n|)``

Tail sums are returned as *enclosures* of the true tail (an exact Fraction for
geometric regimes, a ball ``[0, bound]`` otherwise), so they compose with the
rest of the certified arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping, Optional, Sequence

import numpy as np
from mpmath import iv

from .certified import (Ball, Real, _ball_from_iv, _iv_of, _precision, frac, fmt, lower, power, rmin, rsum,
                        upper)
from .errors import InvalidSystem, OutOfDomain

POS, NEG = 1, -1
# head sums for non-closed families grow until the tail is this small
SUM_TOLERANCE = Fraction(1, 2 ** 40)
MAX_HEAD = 1 << 9  # slowly decaying tails stop here; the total stays an enclosure
LONG_SUM = 256  # heads longer than this are summed in interval arithmetic


@dataclass(frozen=True)
class Regime:
    kind: str
    rate: Fraction
    start: int
    coef: Real
    offset: int = 1
    lin: int = 0

    def value(self, m: int) -> Real:
        """Weight at ``|n| = m`` (``m >= start``)."""
        if self.kind == "geometric":
            return self.coef * self.rate ** m
        if self.kind == "power":
            return self.coef * power(Fraction(self.offset + m), -self.rate)
        if self.kind == "gaussian":
            return self.coef * self.rate ** (m * m + self.lin * m)
        raise ValueError(self.kind)

    @property
    def summable(self) -> bool:
        if self.kind == "geometric":
            return self.rate < 1
        if self.kind == "power":
            return self.rate > 1
        return self.rate < 1

    def same_shape(self, other: "Regime") -> bool:
        """True when both regimes decay at the same rate (ratios stay bounded)."""
        if self.kind != other.kind or self.rate != other.rate:
            return False
        if self.kind == "gaussian":
            return self.lin == other.lin
        return True

    def tail(self, m0: int) -> Optional[Real]:
        """Enclosure of ``sum_{m > m0} value(m)``; requires ``m0 >= start - 1``."""
        if not self.summable:
            return None
        if self.kind == "geometric":
            return self.coef * self.rate ** (m0 + 1) / (1 - self.rate)
        if self.kind == "power":
            explicit: Real = Fraction(0)
            while self.offset + m0 < 1:
                m0 += 1
                explicit = explicit + self.value(m0)
            # decreasing integrand: int_{m0+1}^inf g <= sum_{m > m0} g(m) <= int_{m0}^inf g
            hi = self.coef * power(Fraction(self.offset + m0), 1 - self.rate) / (self.rate - 1)
            lo = self.coef * power(Fraction(self.offset + m0 + 1), 1 - self.rate) / (self.rate - 1)
            return explicit + Ball.from_bounds(lower(lo), upper(hi))
        # gaussian: exponent increments are at least `gap` past m0
        explicit: Real = Fraction(0)
        m = m0
        while 2 * (m + 1) + 1 + self.lin < 1:
            m += 1
            explicit = explicit + self.value(m)
        gap = 2 * (m + 1) + 1 + self.lin
        first = self.value(m + 1)
        bound = first / (1 - self.rate ** gap)
        return explicit + Ball.from_bounds(0, upper(bound))

    def shifted(self, k: int, scale: Real, side: int) -> "Regime":
        """Regime of ``n -> scale * w(n + k)`` on ``side`` (``m = |n|``)."""
        s = k if side == POS else -k
        if self.kind == "geometric":
            return Regime("geometric", self.rate, 0, scale * self.coef * self.rate ** s)
        if self.kind == "power":
            return Regime("power", self.rate, 0, scale * self.coef, offset=self.offset + s)
        e = s * s + self.lin * s
        return Regime("gaussian", self.rate, 0, scale * self.coef * self.rate ** e,
                      lin=self.lin + 2 * s)

    def with_start(self, start: int) -> "Regime":
        return Regime(self.kind, self.rate, start, self.coef, self.offset, self.lin)

    def describe(self) -> str:
        if self.kind == "geometric":
            return f"geometric ratio {fmt(self.rate)}"
        if self.kind == "power":
            return f"power decay exponent {fmt(self.rate)}"
        return f"gaussian base {fmt(self.rate)}"


@dataclass(frozen=True)
class TailCertificate:
    """User-supplied bound ``w_n <= C * r**|n|`` for ``|n| >= N0``."""

    N0: int
    C: Fraction
    r: Fraction


class WeightProfile:
    """Base class; subclasses implement ``_value`` and ``regime``."""

    family = "abstract"
    domain = "Z"  # "Z", "N" (n >= 0) or "finite"

    # subclasses --------------------------------------------------------------
    def _value(self, n: int) -> Real:
        raise NotImplementedError

    def regime(self, side: int) -> Optional[Regime]:
        return None

    def closed_total(self) -> Optional[Real]:
        return None

    def descriptor(self) -> dict:
        raise InvalidSystem(f"{self.family} profiles have no JSON form")

    @property
    def certified(self) -> bool:
        return True

    # shared -------------------------------------------------------------------
    def in_domain(self, n: int) -> bool:
        if self.domain == "Z":
            return True
        if self.domain == "N":
            return n >= 0
        return n in self.support()

    def support(self) -> Sequence[int]:
        raise NotImplementedError

    def weight_at(self, n: int) -> Real:
        if not self.in_domain(n):
            raise OutOfDomain(f"index {n} outside the domain of a {self.family} profile")
        return self._value(n)

    def sides(self):
        if self.domain == "Z":
            return (POS, NEG)
        if self.domain == "N":
            return (POS,)
        return ()

    def side_tail(self, N: int, side: int) -> Optional[Real]:
        """Enclosure of ``sum_{side*n > N} w_n``, or None when not certifiable."""
        reg = self.regime(side)
        if reg is None or not reg.summable:
            return None
        m0 = max(N, reg.start - 1)
        head = rsum(self._value(side * m) for m in range(N + 1, m0 + 1))
        return head + reg.tail(m0)

    def side_divergence(self, side: int) -> Optional[str]:
        reg = self.regime(side)
        if reg is None or reg.summable:
            return None
        if reg.kind == "power":
            return (f"terms on the {'positive' if side > 0 else 'negative'} side decay like "
                    f"|n|^-{fmt(reg.rate)} with exponent <= 1 (harmonic comparison)")
        return (f"terms on the {'positive' if side > 0 else 'negative'} side do not tend to 0 "
                f"({reg.describe()})")

    def float_values(self, lo: int, hi: int) -> np.ndarray:
        """Float weights on ``lo..hi``; zero outside the domain."""
        n = np.arange(lo, hi + 1)
        out = np.zeros(n.shape, dtype=float)
        done = np.zeros(n.shape, dtype=bool)
        for side in self.sides():
            reg = self.regime(side)
            if reg is None:
                continue
            m = side * n
            mask = (m >= reg.start) & (m >= (0 if side == POS else 1))
            if not mask.any():
                continue
            mf = m[mask].astype(float)
            coef = float(reg.coef)
            with np.errstate(over="ignore", under="ignore"):
                if reg.kind == "geometric":
                    vals = coef * np.exp(mf * np.log(float(reg.rate)))
                elif reg.kind == "power":
                    vals = coef * (reg.offset + mf) ** (-float(reg.rate))
                else:
                    vals = coef * np.exp((mf * mf + reg.lin * mf) * np.log(float(reg.rate)))
            out[mask] = vals
            done |= mask
        for j in np.nonzero(~done)[0]:
            k = int(n[j])
            if self.in_domain(k):
                out[j] = float(self._value(k))
        return out


def _side_params_value(a, r, n):
    return a * r ** abs(n)


@dataclass(frozen=True)
class TwoSided(WeightProfile):
    """``a_pos * r_pos**n`` for ``n >= 0`` and ``a_neg * r_neg**|n|`` for ``n < 0``."""

    a_pos: Fraction
    r_pos: Fraction
    a_neg: Fraction
    r_neg: Fraction
    family = "two_sided"

    def __post_init__(self):
        for name in ("a_pos", "r_pos", "a_neg", "r_neg"):
            v = frac(getattr(self, name))
            if v <= 0:
                raise InvalidSystem(f"{name} must be positive, got {v}")
            object.__setattr__(self, name, v)

    def _value(self, n):
        if n >= 0:
            return self.a_pos * self.r_pos ** n
        return self.a_neg * self.r_neg ** (-n)

    def regime(self, side):
        if side == POS:
            return Regime("geometric", self.r_pos, 0, self.a_pos)
        return Regime("geometric", self.r_neg, 1, self.a_neg)

    def closed_total(self):
        if self.r_pos >= 1 or self.r_neg >= 1:
            return None
        return self.a_pos / (1 - self.r_pos) + self.a_neg * self.r_neg / (1 - self.r_neg)

    def side_sum(self, lo: int, hi: int) -> Fraction:
        """Exact ``sum_{n=lo}^{hi}`` via geometric partial sums."""
        def geo(a, r, m1, m2):  # sum_{m=m1}^{m2} a r^m
            if m1 > m2:
                return Fraction(0)
            if r == 1:
                return a * (m2 - m1 + 1)
            return a * (r ** m1 - r ** (m2 + 1)) / (1 - r)

        total = Fraction(0)
        if hi >= 0:
            total += geo(self.a_pos, self.r_pos, max(lo, 0), hi)
        if lo < 0:
            total += geo(self.a_neg, self.r_neg, max(1, -hi), -lo)
        return total

    def descriptor(self):
        return {"family": "two_sided", "a_pos": fmt(self.a_pos), "r_pos": fmt(self.r_pos),
                "a_neg": fmt(self.a_neg), "r_neg": fmt(self.r_neg)}


@dataclass(frozen=True)
class Geometric(TwoSided):
    """Symmetric geometric profile ``a * r**|n|``; ``r = 1`` gives a constant."""

    family = "geometric"

    def __init__(self, a, r):
        super().__init__(a, r, a, r)

    @property
    def a(self):
        return self.a_pos

    @property
    def r(self):
        return self.r_pos

    def descriptor(self):
        return {"family": "geometric", "a": fmt(self.a), "r": fmt(self.r)}


def constant(a=1) -> Geometric:
    return Geometric(a, 1)


@dataclass(frozen=True)
class Power(WeightProfile):
    """``a * (1 + |n|)**(-s)``."""

    a: Fraction
    s: Fraction
    family = "power"

    def __post_init__(self):
        object.__setattr__(self, "a", frac(self.a))
        object.__setattr__(self, "s", frac(self.s))
        if self.a <= 0 or self.s < 0:
            raise InvalidSystem("power profile needs a > 0 and s >= 0")

    def _value(self, n):
        return self.a * power(Fraction(1 + abs(n)), -self.s)

    def regime(self, side):
        return Regime("power", self.s, 0 if side == POS else 1, self.a)

    def descriptor(self):
        return {"family": "power", "a": fmt(self.a), "s": fmt(self.s)}


@dataclass(frozen=True)
class Gaussian(WeightProfile):
    """``a * r**(n**2)``; with ``r < 1`` its step ratios are unbounded."""

    a: Fraction
    r: Fraction
    family = "gaussian"

    def __post_init__(self):
        object.__setattr__(self, "a", frac(self.a))
        object.__setattr__(self, "r", frac(self.r))
        if self.a <= 0 or self.r <= 0:
            raise InvalidSystem("gaussian profile needs a, r > 0")

    def _value(self, n):
        return self.a * self.r ** (n * n)

    def regime(self, side):
        return Regime("gaussian", self.r, 0 if side == POS else 1, self.a)

    def descriptor(self):
        return {"family": "gaussian", "a": fmt(self.a), "r": fmt(self.r)}


@dataclass(frozen=True)
class Table(WeightProfile):
    """Explicit finite table, optionally continued by a fallback profile."""

    entries: tuple
    fallback: Optional[WeightProfile] = None
    family = "explicit_table"

    def __post_init__(self):
        items = self.entries.items() if isinstance(self.entries, Mapping) else self.entries
        clean = tuple(sorted((int(k), frac(v)) for k, v in items))
        if not clean and self.fallback is None:
            raise InvalidSystem("empty explicit table")
        for k, v in clean:
            if v <= 0:
                raise InvalidSystem(f"weight at {k} must be positive, got {v}")
        object.__setattr__(self, "entries", clean)

    @cached_property
    def mapping(self) -> dict:
        return dict(self.entries)

    @property
    def domain(self):
        return "finite" if self.fallback is None else self.fallback.domain

    def support(self):
        return sorted(self.mapping)

    def in_domain(self, n):
        if self.fallback is None:
            return n in self.mapping
        return n in self.mapping or self.fallback.in_domain(n)

    def _value(self, n):
        if n in self.mapping:
            return self.mapping[n]
        return self.fallback._value(n)

    def regime(self, side):
        if self.fallback is None:
            return None
        reg = self.fallback.regime(side)
        if reg is None:
            return None
        extent = max((side * k for k in self.mapping), default=0)
        return reg.with_start(max(reg.start, extent + 1))

    def closed_total(self):
        if self.fallback is None:
            return rsum(v for _, v in self.entries)
        base = self.fallback.closed_total()
        if base is None:
            return None
        for k, v in self.entries:
            if self.fallback.in_domain(k):
                base = base - self.fallback._value(k)
            base = base + v
        return base

    @property
    def certified(self):
        return self.fallback is None or self.fallback.certified

    def descriptor(self):
        d = {"family": "explicit_table", "values": {str(k): fmt(v) for k, v in self.entries}}
        if self.fallback is not None:
            d["fallback"] = self.fallback.descriptor()
        return d


def table(values: Mapping, fallback: Optional[WeightProfile] = None) -> Table:
    return Table(tuple(values.items()), fallback)


@dataclass(frozen=True)
class ProductForm(WeightProfile):
    """Forward-only ``w_n = (v_0 * ... * v_n)**(-p)``; ``v_i = v_tail`` past the head."""

    v_head: tuple
    v_tail: Fraction
    p: int = 1
    family = "product_form"
    domain = "N"

    def __post_init__(self):
        head = tuple(frac(v) for v in self.v_head)
        tail = frac(self.v_tail)
        if any(v <= 0 for v in head) or tail <= 0:
            raise InvalidSystem("product_form base values must be positive")
        p = frac(self.p)
        if p.denominator != 1 or p < 1:
            raise InvalidSystem("product_form needs an integer exponent p >= 1")
        object.__setattr__(self, "v_head", head)
        object.__setattr__(self, "v_tail", tail)
        object.__setattr__(self, "p", int(p))

    def base(self, i: int) -> Fraction:
        return self.v_head[i] if i < len(self.v_head) else self.v_tail

    @cached_property
    def _head_weights(self):
        out, prod = [], Fraction(1)
        for v in self.v_head:
            prod *= v
            out.append(prod ** -self.p)
        return out

    def _value(self, n):
        H = len(self.v_head)
        if n < H:
            return self._head_weights[n]
        last = self._head_weights[-1] if H else Fraction(1)
        return last * self.v_tail ** (-self.p * (n - H + 1))

    def regime(self, side):
        if side != POS:
            return None
        H = len(self.v_head)
        rho = self.v_tail ** -self.p
        last = self._head_weights[-1] if H else Fraction(1)
        return Regime("geometric", rho, H, last * rho ** (1 - H))

    def closed_total(self):
        reg = self.regime(POS)
        if not reg.summable:
            return None
        return rsum(self._head_weights) + reg.coef * reg.rate ** reg.start / (1 - reg.rate)

    def descriptor(self):
        return {"family": "product_form", "v": [fmt(v) for v in self.v_head],
                "v_tail": fmt(self.v_tail), "p": self.p}


@dataclass(frozen=True)
class Shifted(WeightProfile):
    """``n -> scale * base(n + shift)``, e.g. the ratio ``mu(f^n x) / mu(x)``."""

    base: WeightProfile
    shift: int = 0
    scale: Real = Fraction(1)
    forward: bool = False
    family = "shifted"

    @property
    def domain(self):
        return "N" if (self.forward or self.base.domain == "N") else "Z"

    def _value(self, n):
        return self.scale * self.base._value(n + self.shift)

    def in_domain(self, n):
        if self.domain == "N" and n < 0:
            return False
        return self.base.in_domain(n + self.shift)

    def regime(self, side):
        k = self.shift
        if side == POS:
            reg = self.base.regime(POS)
            if reg is None:
                return None
            return reg.shifted(k, self.scale, POS).with_start(max(0, reg.start - k))
        if self.domain == "N":
            return None
        reg = self.base.regime(NEG)
        if reg is None:
            return None
        return reg.shifted(k, self.scale, NEG).with_start(max(1, reg.start + k))

    def closed_total(self):
        if self.domain != "Z":
            return None
        t = self.base.closed_total()
        return None if t is None else self.scale * t

    @property
    def certified(self):
        return self.base.certified

    def descriptor(self):
        return {"family": "shifted", "base": self.base.descriptor(), "shift": self.shift,
                "scale": fmt(self.scale)}


@dataclass(frozen=True)
class Reversed(WeightProfile):
    """``n -> base(-n)``: the profile seen along the inverse map."""

    base: WeightProfile
    family = "reversed"

    def __post_init__(self):
        if self.base.domain == "N":
            raise InvalidSystem("forward-only profiles cannot be reversed")

    @property
    def domain(self):
        return self.base.domain

    def support(self):
        return sorted(-k for k in self.base.support())

    def in_domain(self, n):
        return self.base.in_domain(-n)

    def _value(self, n):
        return self.base._value(-n)

    def regime(self, side):
        reg = self.base.regime(-side)
        if reg is None:
            return None
        return reg.with_start(max(reg.start, 1 if side == NEG else 0))

    def closed_total(self):
        return self.base.closed_total()

    @property
    def certified(self):
        return self.base.certified

    def descriptor(self):
        return {"family": "reversed", "base": self.base.descriptor()}


@dataclass(frozen=True)
class MinOf(WeightProfile):
    """Pointwise minimum of profiles (the infimum defining ``d_n`` on finite sets)."""

    parts: tuple
    family = "min"

    @property
    def domain(self):
        return "N" if any(p.domain == "N" for p in self.parts) else "Z"

    def _value(self, n):
        return rmin(p._value(n) for p in self.parts)

    def in_domain(self, n):
        return all(p.in_domain(n) for p in self.parts)

    def regime(self, side):
        regs = [p.regime(side) for p in self.parts]
        if any(r is None for r in regs):
            return None
        first = regs[0]
        if not all(r.same_shape(first) and r.offset == first.offset for r in regs):
            return None
        return Regime(first.kind, first.rate, max(r.start for r in regs),
                      rmin(r.coef for r in regs), first.offset, first.lin)

    def side_tail(self, N, side):
        if self.regime(side) is not None:
            return super().side_tail(N, side)
        tails = [p.side_tail(N, side) for p in self.parts]
        tails = [t for t in tails if t is not None]
        if not tails:
            return None
        return Ball.from_bounds(0, min(upper(t) for t in tails))

    def side_divergence(self, side):
        if self.regime(side) is not None:
            return super().side_divergence(side)
        regs = [p.regime(side) for p in self.parts]
        if any(r is None or r.summable for r in regs):
            return None
        return ("every component decays no faster than c/|n|, so the minimum "
                "dominates a harmonic series")

    @property
    def certified(self):
        return all(p.certified for p in self.parts)


@dataclass(frozen=True)
class CallableProfile(WeightProfile):
    """User function weights: usable for simulation, never for verdicts."""

    fn: Callable = field(compare=False)
    forward_only: bool = False
    family = "callable"

    @property
    def domain(self):
        return "N" if self.forward_only else "Z"

    @property
    def certified(self):
        return False

    def _value(self, n):
        v = self.fn(n)
        return v if isinstance(v, Ball) else frac(v)


# summability -------------------------------------------------------------------

@dataclass(frozen=True)
class Summable:
    total: Real
    error: Fraction
    status = "summable"


@dataclass(frozen=True)
class Divergent:
    witness: str
    status = "divergent"


@dataclass(frozen=True)
class Undecided:
    reason: str
    status = "undecided"


def partial_sum(profile: WeightProfile, lo: int, hi: int) -> Real:
    """Exact (or certified) ``sum_{n=lo}^{hi} w_n``."""
    if lo > hi:
        raise ValueError("partial_sum needs lo <= hi")
    if profile.domain == "N" and lo < 0:
        raise OutOfDomain("forward-only profile summed below 0")
    if isinstance(profile, TwoSided):
        return profile.side_sum(lo, hi)
    if profile.domain == "finite":
        missing = [n for n in range(lo, hi + 1) if n not in profile.mapping]
        if missing:
            raise OutOfDomain(f"indices {missing[:5]} outside the explicit table")
    if hi - lo < LONG_SUM:
        return rsum(profile.weight_at(n) for n in range(lo, hi + 1))
    # long heads: exact rationals grow huge denominators, intervals do not
    with _precision():
        acc = iv.mpf(0)
        for n in range(lo, hi + 1):
            acc += _iv_of(profile.weight_at(n))
        return _ball_from_iv(acc)


def _range_in_domain(profile, lo, hi):
    if profile.domain == "N":
        lo = max(lo, 0)
    return lo, hi


_CERT_CACHE: dict = {}


def certify_summability(profile: WeightProfile):
    """Decide ``sum_n w_n`` over the profile's domain by certificate."""
    try:
        return _CERT_CACHE[profile]
    except (KeyError, TypeError):
        pass
    res = _certify(profile)
    try:
        if len(_CERT_CACHE) > 4096:
            _CERT_CACHE.clear()
        _CERT_CACHE[profile] = res
    except TypeError:  # unhashable (callable-backed) profile
        pass
    return res


def _certify(profile: WeightProfile):
    if not profile.certified:
        return Undecided("weights come from user code without a closed form")
    if profile.domain == "finite":
        total = profile.closed_total()
        return Summable(total, Fraction(0))
    for side in profile.sides():
        why = profile.side_divergence(side)
        if why is not None:
            return Divergent(why)
    closed = profile.closed_total()
    if closed is not None:
        return Summable(closed, Fraction(0) if not isinstance(closed, Ball) else closed.rad)
    H = max([r.start for r in (profile.regime(s) for s in profile.sides()) if r is not None] + [16])
    while True:
        tails = [profile.side_tail(H, s) for s in profile.sides()]
        if any(t is None for t in tails):
            return Undecided("no tail certificate for this profile")
        tail = rsum(tails)
        if upper(tail) - lower(tail) < SUM_TOLERANCE or H >= MAX_HEAD:
            break
        H *= 2
    lo, hi = _range_in_domain(profile, -H, H)
    total = partial_sum(profile, lo, hi) + tail
    err = total.rad if isinstance(total, Ball) else Fraction(0)
    return Summable(total, err)


def sum_beyond(profile: WeightProfile, i: int, direction: int) -> Optional[Real]:
    """Enclosure of ``sum_{m > i} w_m`` (direction +1) or ``sum_{m < i} w_m`` (-1)."""
    if direction == POS:
        reg = profile.regime(POS)
        if reg is None:
            return None
        S = max(i, reg.start, 0)
        head = partial_sum(profile, i + 1, S) if S > i else Fraction(0)
        t = profile.side_tail(S, POS)
        return None if t is None else head + t
    if profile.domain == "N":
        lo = 0
        return partial_sum(profile, lo, i - 1) if i - 1 >= lo else Fraction(0)
    reg = profile.regime(NEG)
    if reg is None:
        return None
    S = max(-i, reg.start, 0)
    head = partial_sum(profile, -S, i - 1) if -S <= i - 1 else Fraction(0)
    t = profile.side_tail(S, NEG)
    return None if t is None else head + t


def lattice_tail(profile: WeightProfile, i: int, period: int) -> Optional[Real]:
    """Enclosure of ``sum_{k != 0} w(i + k*period)`` for ``period > |i|``.

    This is the extra mass picked up when a vector supported near index ``i`` is
    extended periodically along the orbit.
    """
    if period <= abs(i):
        raise ValueError("period must exceed |i|")
    total: Real = Fraction(0)
    for side in profile.sides():
        reg = profile.regime(side)
        if reg is None or not reg.summable:
            return None
        m = side * i + period  # |index| of the first lattice point on this side
        floor = max(reg.start, 0 if side == POS else 1)
        while m < floor:
            total = total + profile._value(side * m)
            m += period
        if reg.kind == "geometric":
            total = total + reg.value(m) / (1 - reg.rate ** period)
            continue
        if reg.kind == "gaussian" and 2 * m + 1 + reg.lin < 1:
            return None
        # decreasing terms: sum_j g(m + jP) <= g(m) + (g(m) + sum_{m' > m} g) / P
        first = reg.value(m)
        bound = upper(first) + (upper(first) + upper(reg.tail(m))) / period
        total = total + Ball.from_bounds(lower(first), bound)
    return total


# (star) ratios --------------------------------------------------------------------

def ratio_sup(profile: WeightProfile, step: int = -1):
    """``sup_n w_{n+step} / w_n`` over the domain, as ``(value, argmax)``.

    Raises :class:`UnboundedRatio` with a witness sequence when the sup is infinite
    and :class:`UndecidedError` for profiles without certificates.
    """
    from .errors import UnboundedRatio, UndecidedError

    if not profile.certified:
        raise UndecidedError("ratio sup needs a closed-form profile")
    if profile.domain == "finite":
        keys = profile.support()
        vals = [(profile._value(n + step) / profile._value(n), n)
                for n in keys if (n + step) in profile.mapping]
        if not vals:
            return Fraction(0), None
        return _best(vals)
    window = []
    limits = []
    for side in profile.sides():
        reg = profile.regime(side)
        if reg is None:
            raise UndecidedError(f"no regime on side {side}")
        edge = max(reg.start, 1) + 1
        inward = (side == POS) == (step < 0)
        if reg.kind == "geometric":
            limits.append((reg.rate if not inward else 1 / reg.rate, None))
        elif reg.kind == "power":
            if not inward:
                limits.append((Fraction(1), None))  # approached, not attained
        else:
            grows = (reg.rate < 1) == inward
            if grows and reg.rate != 1:
                witness = []
                for m in range(edge, edge + 6):
                    n = side * m
                    witness.append((n, profile._value(n + step) / profile._value(n)))
                raise UnboundedRatio("step ratios grow without bound", witness)
        for m in range(0, edge + 1):
            n = side * m
            if side == NEG and m == 0:
                continue
            window.append(n)
    vals = []
    for n in sorted(set(window)):
        if not profile.in_domain(n):
            continue
        if profile.in_domain(n + step):
            vals.append((profile._value(n + step) / profile._value(n), n))
        else:
            vals.append((Fraction(0), n))
    vals.extend(limits)
    return _best(vals)


def _best(vals):
    best = max(vals, key=lambda t: upper(t[0]))
    from .certified import rmax
    return rmax(v for v, _ in vals), best[1]


# tail certificates ----------------------------------------------------------------

def check_tail_certificate(profile: WeightProfile, cert: TailCertificate) -> Optional[bool]:
    """Check ``w_n <= C r^|n|`` for ``|n| >= N0``; None when undecidable."""
    if not (0 < cert.r < 1) or cert.C <= 0:
        return False
    for side in profile.sides():
        reg = profile.regime(side)
        if reg is None:
            return None
        if reg.kind == "power":
            return False
        first = max(cert.N0, 1 if side == NEG else 0)
        if reg.kind == "geometric" and reg.rate > cert.r:
            return False
        # explicit part before the regime, then the regime is monotone in ratio
        edge = max(first, reg.start)
        if reg.kind == "gaussian":
            if reg.rate >= 1:
                return False
            # ratio w/(C r^m) decreases once 2m + 1 + lin > log_r(r)... check a generous window
            edge = max(edge, abs(reg.lin) + 2)
        for m in range(first, edge + 1):
            if upper(profile._value(side * m)) > cert.C * cert.r ** m:
                return False
    return True


# JSON -------------------------------------------------------------------------------

def profile_from_json(d: dict) -> WeightProfile:
    fam = d.get("family")
    try:
        if fam == "geometric":
            prof = Geometric(frac(d["a"]), frac(d["r"]))
        elif fam == "constant":
            prof = constant(frac(d.get("a", 1)))
        elif fam == "two_sided":
            prof = TwoSided(frac(d["a_pos"]), frac(d["r_pos"]), frac(d["a_neg"]), frac(d["r_neg"]))
        elif fam == "power":
            prof = Power(frac(d["a"]), frac(d["s"]))
        elif fam == "gaussian":
            prof = Gaussian(frac(d["a"]), frac(d["r"]))
        elif fam == "explicit_table":
            fb = profile_from_json(d["fallback"]) if d.get("fallback") else None
            prof = Table(tuple((int(k), frac(v)) for k, v in d["values"].items()), fb)
        elif fam == "product_form":
            prof = ProductForm(tuple(frac(v) for v in d.get("v", [])), frac(d["v_tail"]),
                               int(d.get("p", 1)))
        elif fam == "shifted":
            prof = Shifted(profile_from_json(d["base"]), int(d.get("shift", 0)),
                           frac(d.get("scale", 1)))
        elif fam == "reversed":
            prof = Reversed(profile_from_json(d["base"]))
        else:
            raise InvalidSystem(f"unknown weight family {fam!r}")
    except KeyError as exc:
        raise InvalidSystem(f"weight family {fam!r} is missing field {exc}") from None
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InvalidSystem):
            raise
        raise InvalidSystem(f"bad parameter in {fam!r} profile: {exc}") from None
    if d.get("tail"):
        t = d["tail"]
        cert = TailCertificate(int(t["N0"]), frac(t["C"]), frac(t["r"]))
        ok = check_tail_certificate(prof, cert)
        if ok is False:
            raise InvalidSystem("tail certificate does not hold for this profile")
        object.__setattr__(prof, "_tail_certificate", cert)
    return prof
