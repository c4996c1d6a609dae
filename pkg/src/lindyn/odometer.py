"""Exact symbolic odometer: the +1-with-carry map on a product of cyclic groups.

Coordinates are ``x_1, x_2, ...`` with ``x_j`` in ``Z_2`` for even ``j`` and in
``Z_{2j}`` for odd ``j``.  The first coordinate is the least significant digit.
The measure is the product of

* ``mu_j(0) = mu_j(1) = 1/2`` for even ``j``;
* ``mu_j(a) = (1 - 2**-j) / j`` for ``a < j`` and ``2**-j / j`` for ``a >= j``, odd ``j``.

A depth-``d`` cylinder fixes the first ``d`` digits.  Its image under ``f^n`` is
again a depth-``d`` cylinder: the digit block, read as a mixed-radix number
``v``, becomes ``(v + n) mod N_d`` with ``N_d = |A_1| ... |A_d|``, and the carry
only moves the free tail bijectively.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .certified import frac, power, rsum
from .errors import InvalidDigit, NotFoundWithinBound

MAX_DEPTH = 8


def radix(j: int) -> int:
    """``|A_j|`` (``j >= 1``)."""
    if j < 1:
        raise ValueError("coordinates start at 1")
    return 2 if j % 2 == 0 else 2 * j


@lru_cache(maxsize=None)
def period(depth: int) -> int:
    """``N_d = |A_1| ... |A_d|``."""
    out = 1
    for j in range(1, depth + 1):
        out *= radix(j)
    return out


@lru_cache(maxsize=None)
def digit_measure(j: int, a: int) -> Fraction:
    if not 0 <= a < radix(j):
        raise InvalidDigit(f"digit {a} not in A_{j} = Z_{radix(j)}")
    if j % 2 == 0:
        return Fraction(1, 2)
    if a < j:
        return (1 - Fraction(1, 2 ** j)) / j
    return Fraction(1, 2 ** j) / j


def check_digits(digits) -> Tuple[int, ...]:
    digits = tuple(int(a) for a in digits)
    for j, a in enumerate(digits, 1):
        if not 0 <= a < radix(j):
            raise InvalidDigit(f"digit {a} at position {j} not in Z_{radix(j)}")
    return digits


def cylinder_measure(digits) -> Fraction:
    out = Fraction(1)
    for j, a in enumerate(check_digits(digits), 1):
        out *= digit_measure(j, a)
    return out


def to_value(digits: Tuple[int, ...]) -> int:
    v, scale = 0, 1
    for j, a in enumerate(digits, 1):
        v += a * scale
        scale *= radix(j)
    return v


def from_value(v: int, depth: int) -> Tuple[int, ...]:
    out = []
    for j in range(1, depth + 1):
        v, a = divmod(v, radix(j))
        out.append(a)
    return tuple(out)


def parse_cylinder(text: str) -> Tuple[int, ...]:
    """``"[a1,a2,...]"`` (``"[]"`` is the whole space)."""
    m = re.fullmatch(r"\s*\[\s*([0-9,\s]*)\]\s*", text)
    if not m:
        raise InvalidDigit(f"cannot parse cylinder literal {text!r}")
    body = m.group(1).strip()
    if not body:
        return ()
    return check_digits(int(t) for t in body.split(",") if t.strip())


def format_cylinder(digits) -> str:
    return "[" + ",".join(str(a) for a in digits) + "]"


def cylinder_image(digits, n: int) -> Tuple[int, ...]:
    """``f^n`` of one cylinder (``n`` may be negative)."""
    digits = check_digits(digits)
    d = len(digits)
    return from_value((to_value(digits) + n) % period(d), d)


class CylinderSet:
    """Finite disjoint union of cylinders in canonical (merged, sorted) form."""

    __slots__ = ("cylinders",)

    def __init__(self, cylinders: Iterable = ()):
        cyls = [check_digits(c) for c in cylinders]
        object.__setattr__(self, "cylinders", _canonical(cyls))

    def __setattr__(self, *_):
        raise AttributeError("CylinderSet is immutable")

    @classmethod
    def whole(cls) -> "CylinderSet":
        return cls([()])

    @property
    def depth(self) -> int:
        return max((len(c) for c in self.cylinders), default=0)

    def values(self, depth: Optional[int] = None) -> List[int]:
        """Sorted depth-``d`` values of the refined set."""
        d = self.depth if depth is None else depth
        if d < self.depth:
            raise ValueError("cannot coarsen below the set's depth")
        out = []
        for c in self.cylinders:
            base = to_value(c)
            step = period(len(c))
            for k in range(period(d) // step):
                out.append(base + k * step)
        return sorted(out)

    def refine(self, depth: int) -> List[Tuple[int, ...]]:
        return [from_value(v, depth) for v in self.values(depth)]

    @classmethod
    def from_values(cls, values: Iterable[int], depth: int) -> "CylinderSet":
        return cls(from_value(v, depth) for v in values)

    def measure(self) -> Fraction:
        return sum((cylinder_measure(c) for c in self.cylinders), Fraction(0))

    def image(self, n: int) -> "CylinderSet":
        d = self.depth
        N = period(d)
        return CylinderSet.from_values(((v + n) % N for v in self.values(d)), d)

    def __and__(self, other: "CylinderSet") -> "CylinderSet":
        d = max(self.depth, other.depth)
        common = set(self.values(d)) & set(other.values(d))
        return CylinderSet.from_values(common, d)

    def __or__(self, other: "CylinderSet") -> "CylinderSet":
        d = max(self.depth, other.depth)
        return CylinderSet.from_values(set(self.values(d)) | set(other.values(d)), d)

    def __eq__(self, other):
        return isinstance(other, CylinderSet) and self.cylinders == other.cylinders

    def __hash__(self):
        return hash(self.cylinders)

    def __bool__(self):
        return bool(self.cylinders)

    def __repr__(self):
        return "CylinderSet(" + " + ".join(format_cylinder(c) for c in self.cylinders) + ")"


def _canonical(cyls: List[Tuple[int, ...]]) -> tuple:
    if not cyls:
        return ()
    d = max(len(c) for c in cyls)
    vals = set()
    for c in cyls:
        base, step = to_value(c), period(len(c))
        vals.update(base + k * step for k in range(period(d) // step))
    # merge complete sibling families bottom-up
    groups: Dict[int, set] = {d: vals}
    for depth in range(d, 0, -1):
        cur = groups[depth]
        r = radix(depth)
        lower = period(depth - 1)
        parents = {}
        for v in cur:
            parents.setdefault(v % lower, []).append(v)
        keep, up = set(), set()
        for pv, kids in parents.items():
            if len(kids) == r:
                up.add(pv)
            else:
                keep.update(kids)
        groups[depth] = keep
        groups[depth - 1] = up
    out = []
    for depth, vs in groups.items():
        out.extend(from_value(v, depth) for v in vs)
    return tuple(sorted(out))


def cylinders_at_depth(depth: int) -> Iterable[Tuple[int, ...]]:
    return product(*(range(radix(j)) for j in range(1, depth + 1)))


# periodic points and returns ------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicPoint:
    set: CylinderSet
    period: int
    verified: bool


def _divisors(n: int) -> List[int]:
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def periodic_point_cylinder(s: CylinderSet) -> PeriodicPoint:
    """``chi_s`` with its least period (a divisor of ``N_depth``), checked by set equality."""
    N = period(s.depth)
    for q in _divisors(N):
        if s.image(-q) == s:
            return PeriodicPoint(s, q, s.image(-N) == s)
    raise AssertionError("N_depth is always a period")


@dataclass(frozen=True)
class ReturnEvidence:
    n: int
    measure: Fraction


def conservativity_evidence(s: CylinderSet, max_n: Optional[int] = None) -> ReturnEvidence:
    """First ``n >= 1`` with ``mu(s & f^-n s) > 0`` and that measure, exactly."""
    if not s:
        raise ValueError("empty set has measure zero")
    d = s.depth
    N = period(d)
    max_n = N if max_n is None else max_n
    vals = set(s.values(d))
    for n in range(1, max_n + 1):
        back = {(v - n) % N for v in vals}
        common = vals & back
        if common:
            return ReturnEvidence(n, CylinderSet.from_values(common, d).measure())
    raise NotFoundWithinBound(f"no return of {s} within n <= {max_n}")


def image_ratio_bounds(depth: int) -> Tuple[Fraction, Fraction]:
    """Min and max of ``mu(f C) / mu(C)`` over depth-``d`` cylinders (exhaustive)."""
    lo = hi = None
    for c in cylinders_at_depth(depth):
        r = cylinder_measure(cylinder_image(c, 1)) / cylinder_measure(c)
        lo = r if lo is None or r < lo else lo
        hi = r if hi is None or r > hi else hi
    return lo, hi


# step functions -------------------------------------------------------------------------------

class StepFunction:
    """Finite rational combination of cylinder indicators, stored at a common depth."""

    __slots__ = ("depth", "values")

    def __init__(self, terms: Mapping = None, depth: Optional[int] = None):
        terms = {check_digits(c): frac(a) for c, a in (terms or {}).items()}
        d = max([len(c) for c in terms] + [0]) if depth is None else depth
        vals: Dict[int, Fraction] = {}
        for c, a in terms.items():
            if len(c) > d:
                raise ValueError("term deeper than the requested depth")
            base, step = to_value(c), period(len(c))
            for k in range(period(d) // step):
                v = base + k * step
                vals[v] = vals.get(v, Fraction(0)) + a
        object.__setattr__(self, "depth", d)
        object.__setattr__(self, "values", {v: a for v, a in vals.items() if a != 0})

    def __setattr__(self, *_):
        raise AttributeError("StepFunction is immutable")

    @classmethod
    def indicator(cls, s: CylinderSet) -> "StepFunction":
        return cls({c: 1 for c in s.cylinders}, depth=s.depth)

    def at_depth(self, d: int) -> "StepFunction":
        if d < self.depth:
            raise ValueError("use truncate to go coarser")
        return StepFunction({from_value(v, self.depth): a for v, a in self.values.items()}, depth=d)

    def compose(self, n: int) -> "StepFunction":
        """``T^n g = g o f^n``: the value on ``C`` moves to ``f^-n(C)``."""
        N = period(self.depth)
        return StepFunction({from_value((v - n) % N, self.depth): a for v, a in self.values.items()},
                            depth=self.depth)

    def truncate(self, d: int) -> "StepFunction":
        """Conditional expectation onto depth-``d`` cylinders."""
        if d >= self.depth:
            return self.at_depth(d)
        N = period(d)
        mass: Dict[int, Fraction] = {}
        for v, a in self.values.items():
            mass[v % N] = mass.get(v % N, Fraction(0)) + a * cylinder_measure(from_value(v, self.depth))
        out = {}
        for pv, m in mass.items():
            out[from_value(pv, d)] = m / cylinder_measure(from_value(pv, d))
        return StepFunction(out, depth=d)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        d = max(self.depth, other.depth)
        a, b = self.at_depth(d), other.at_depth(d)
        vals = dict(a.values)
        for v, x in b.values.items():
            vals[v] = vals.get(v, Fraction(0)) - x
        return StepFunction({from_value(v, d): x for v, x in vals.items()}, depth=d)

    def norm_p(self, p) -> object:
        """``||g||_p^p``, exact for integer ``p``."""
        return rsum(power(abs(a), p) * cylinder_measure(from_value(v, self.depth))
                    for v, a in self.values.items())

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        d = max(self.depth, other.depth)
        return self.at_depth(d).values == other.at_depth(d).values

    def __hash__(self):
        return hash(frozenset(self.values.items()))

    def __repr__(self):
        return "StepFunction(" + ", ".join(
            f"{format_cylinder(from_value(v, self.depth))}: {a}" for v, a in sorted(self.values.items())) + ")"


@dataclass(frozen=True)
class Approximation:
    vector: StepFunction
    period: int
    distance_p: object


def least_period(g: StepFunction) -> int:
    N = period(g.depth)
    for q in _divisors(N):
        if g.compose(q) == g:
            return q
    raise AssertionError("N_depth is always a period")


def simple_function_approx(target: StepFunction, eps=None, depth: Optional[int] = None, p=1) -> Approximation:
    """Periodic step function close to ``target``.

    A finite cylinder combination is itself periodic, so with ``depth`` unset the
    answer is the target at distance 0.  With ``depth`` below the target's depth
    the answer is the conditional expectation at that depth, with its exact
    ``L^p`` distance (``p``-th power).
    """
    approx = target if depth is None or depth >= target.depth else target.truncate(depth)
    dist = (target - approx).norm_p(p)
    return Approximation(approx, least_period(approx), dist)
