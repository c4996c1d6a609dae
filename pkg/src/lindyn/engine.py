"""Finite-support L^p vectors and the composition operator on atomic systems.

``T phi = phi o f``: the amplitude sitting on atom ``a`` moves to ``f^-1(a)``.
``S`` is the inverse shift (amplitude moves to ``f(a)``), so ``T S = id``.
"""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np
from scipy.signal import fftconvolve

from .certified import (Ball, Real, frac, fmt, lower, power, root, rsum,
                        to_float, upper)
from .errors import CannotApproximate, InvalidSystem, TailNotCertified
from .system import CYCLE, Atom, AtomicSystem
from .weights import Summable, certify_summability, lattice_tail

EXACT_BUDGET = 20_000  # horizon * support size below which densities are exact


class LpVector(Mapping):
    """Immutable finitely supported function ``atom -> amplitude``."""

    __slots__ = ("_data", "_hash")

    def __init__(self, data=None):
        clean = {}
        for a, v in (data or {}).items():
            v = v if isinstance(v, Ball) else frac(v)
            if v != 0:
                clean[Atom(*a)] = v
        self._data = clean
        self._hash = None

    @classmethod
    def indicator(cls, *atoms) -> "LpVector":
        return cls({a: 1 for a in atoms})

    def __getitem__(self, atom):
        return self._data.get(atom, Fraction(0))

    def __contains__(self, atom):
        return atom in self._data

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def support(self) -> List[Atom]:
        return sorted(self._data)

    def __eq__(self, other):
        if isinstance(other, LpVector):
            return self._data == other._data
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __add__(self, other: "LpVector") -> "LpVector":
        out = dict(self._data)
        for a, v in other._data.items():
            out[a] = out.get(a, 0) + v
        return LpVector(out)

    def __sub__(self, other: "LpVector") -> "LpVector":
        return self + other * -1

    def __mul__(self, scalar) -> "LpVector":
        scalar = scalar if isinstance(scalar, Ball) else frac(scalar)
        return LpVector({a: v * scalar for a, v in self._data.items()})

    __rmul__ = __mul__

    def __repr__(self):
        inner = ", ".join(f"{a}: {fmt(v)}" for a, v in sorted(self._data.items()))
        return f"LpVector({{{inner}}})"

    def to_json(self) -> list:
        out = []
        for a in self.support():
            d = {"orbit": a.orbit, "index": a.index, "amp": fmt(self._data[a])}
            if a.copy:
                d["copy"] = a.copy
            out.append(d)
        return out

    @classmethod
    def from_json(cls, items) -> "LpVector":
        try:
            return cls({Atom(int(d["orbit"]), int(d["index"]), int(d.get("copy", 0))): frac(d["amp"])
                        for d in items})
        except (KeyError, ValueError, TypeError) as exc:
            raise InvalidSystem(f"bad vector literal: {exc}") from None


def _check_support(system: AtomicSystem, phi: LpVector):
    for a in phi:
        system.validate(a)


def apply_T(system: AtomicSystem, phi: LpVector, n: int) -> LpVector:
    """``T^n phi = phi o f^n``.

    On a forward line the atoms with index below ``n`` have no ``n``-th
    preimage, so their amplitude leaves the space.
    """
    if n < 0:
        raise ValueError("use apply_S for negative powers")
    out = {}
    for a, v in phi.items():
        if system.has_preimage(a, n):
            out[system.iterate(a, -n)] = v
    return LpVector(out)


def apply_S(system: AtomicSystem, phi: LpVector, n: int) -> LpVector:
    """``S^n phi``: amplitude on ``a`` moves to ``f^n(a)``."""
    if n < 0:
        raise ValueError("use apply_T for negative powers")
    return LpVector({system.iterate(a, n): v for a, v in phi.items()})


def lp_norm_p(system: AtomicSystem, phi: LpVector) -> Real:
    """``||phi||_p^p`` (exact when ``p`` is an integer and the data are rational)."""
    return rsum(power(abs(v), system.p) * system.mu(a) for a, v in phi.items())


def lp_norm(system: AtomicSystem, phi: LpVector) -> Real:
    return root(lp_norm_p(system, phi), system.p)


def lp_distance_p(system: AtomicSystem, phi: LpVector, psi: LpVector) -> Real:
    return lp_norm_p(system, phi - psi)


# hitting densities ----------------------------------------------------------------------

@dataclass(frozen=True)
class DensityCurve:
    counts: np.ndarray  # counts[M-1] = #{1 <= n <= M : hit}
    hits: np.ndarray    # sorted hit times
    eps: Fraction
    exact: bool

    @property
    def horizon(self) -> int:
        return int(self.counts.size)

    def density(self, M: int) -> float:
        return float(self.counts[M - 1]) / M

    @property
    def densities(self) -> np.ndarray:
        return self.counts / np.arange(1, self.counts.size + 1)

    @property
    def lower_estimate(self) -> float:
        N = self.horizon
        lo = max(1, N // 2)
        return float(self.densities[lo - 1:].min())

    def to_csv(self, step: int = 1) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["M", "count", "density"])
        d = self.densities
        for M in range(step, self.horizon + 1, step):
            w.writerow([M, int(self.counts[M - 1]), repr(float(d[M - 1]))])
        return buf.getvalue()


def _group_by_orbit(vec: LpVector):
    groups = defaultdict(list)
    for a, v in vec.items():
        groups[a.orbit_id].append((a, v))
    return groups


def orbit_norms_p(system: AtomicSystem, phi: LpVector, horizon: int) -> np.ndarray:
    """Float ``||T^n phi||_p^p`` for ``n = 1..horizon`` (FFT correlation per orbit)."""
    p = float(system.p)
    out = np.zeros(horizon)
    n = np.arange(1, horizon + 1)
    for (orb, copy), items in _group_by_orbit(phi).items():
        spec = system.orbits[orb]
        amps = {a.index: abs(float(v)) ** p for a, v in items}
        if spec.kind == CYCLE:
            L = spec.length
            w = np.array([float(x) for x in spec.weights])
            for i, ap in amps.items():
                out += ap * w[(i - n) % L]
            continue
        lo, hi = min(amps), max(amps)
        arr = np.zeros(hi - lo + 1)
        for i, ap in amps.items():
            arr[i - lo] = ap
        # A(n) = sum_i arr[i] * w(i - n); weights on [lo - horizon, hi - 1]
        w = spec.weights.float_values(lo - horizon, hi - 1) if not system.forward else \
            _forward_floats(spec.weights, lo - horizon, hi - 1)
        # corr[k] = sum_i arr[i-lo] * w[i - lo + (horizon - n)] ; k = horizon - n
        corr = fftconvolve(w, arr[::-1], mode="valid") if w.size >= arr.size else None
        if corr is None:
            raise AssertionError("weight window shorter than support")
        # corr[j] = sum_t w[j + t] * arr[t]  for j = 0..len(w) - len(arr)
        out += np.clip(corr[horizon - n], 0, None)
    return out


def _forward_floats(profile, lo, hi):
    vals = np.zeros(hi - lo + 1)
    if hi >= 0:
        start = max(lo, 0)
        vals[start - lo:] = profile.float_values(start, hi)
    return vals


def hitting_density(system: AtomicSystem, phi: LpVector, target: LpVector, eps,
                    horizon: int, exact: Optional[bool] = None) -> DensityCurve:
    """Counts of ``1 <= n <= M`` with ``||T^n phi - target||_p < eps`` (strict)."""
    eps = frac(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    _check_support(system, phi)
    _check_support(system, target)
    if exact is None:
        exact = horizon * max(1, len(phi)) <= EXACT_BUDGET
    if exact:
        hit = np.zeros(horizon, dtype=bool)
        eps_p = power(eps, system.p)
        for n in range(1, horizon + 1):
            d = lp_distance_p(system, apply_T(system, phi, n), target)
            if upper(d) < lower(eps_p):
                hit[n - 1] = True
            elif lower(d) < upper(eps_p):
                raise ValueError(f"distance at n={n} too close to eps to decide")
        counts = np.cumsum(hit)
        return DensityCurve(counts, np.nonzero(hit)[0] + 1, eps, True)
    p = float(system.p)
    dist = orbit_norms_p(system, phi, horizon)
    dist += sum(abs(float(t)) ** p * float(system.mu(x)) for x, t in target.items())
    # corrections where T^n phi meets the target support
    by_orbit = _group_by_orbit(phi)
    for x, t in target.items():
        for y, a in by_orbit.get(x.orbit_id, ()):
            spec = system.orbits[x.orbit]
            m = float(system.mu(x))
            delta = (abs(float(a - t)) ** p - abs(float(a)) ** p - abs(float(t)) ** p) * m
            if spec.kind == CYCLE:
                first = (y.index - x.index) % spec.length or spec.length
                dist[first - 1::spec.length] += delta
            else:
                k = y.index - x.index
                if 1 <= k <= horizon:
                    dist[k - 1] += delta
    hit = dist < float(eps) ** p
    counts = np.cumsum(hit)
    return DensityCurve(counts, np.nonzero(hit)[0] + 1, eps, False)


# periodic points ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicVector:
    """``sum_k S^{k N} base`` on lines; on cycles ``base`` itself (``N`` a multiple of ``L``)."""

    system: AtomicSystem
    base: LpVector
    period: int

    def canonical(self) -> LpVector:
        """Representative with line indices reduced mod the period."""
        out = {}
        for a, v in self.base.items():
            if self.system.spec(a).kind == CYCLE:
                key = a
            else:
                key = Atom(a.orbit, a.index % self.period, a.copy)
            out[key] = out.get(key, 0) + v
        return LpVector(out)

    def shifted(self, n: int) -> "PeriodicVector":
        """``T^n`` of the periodic vector."""
        return PeriodicVector(self.system, apply_T(self.system, self.base, n), self.period)

    def __eq__(self, other):
        if not isinstance(other, PeriodicVector):
            return NotImplemented
        return self.period == other.period and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.period, self.canonical()))

    def value(self, atom: Atom):
        if self.system.spec(atom).kind == CYCLE:
            return self.base[atom]
        key = atom.index % self.period
        return rsum(v for a, v in self.base.items()
                    if a.orbit_id == atom.orbit_id and a.index % self.period == key)

    def truncate(self, window: int) -> LpVector:
        out = {}
        for a, v in self.base.items():
            if self.system.spec(a).kind == CYCLE:
                out[a] = v
                continue
            k_lo = -((window + a.index) // self.period)
            k_hi = (window - a.index) // self.period
            for k in range(k_lo, k_hi + 1):
                out[Atom(a.orbit, a.index + k * self.period, a.copy)] = v
        return LpVector(out)


@dataclass(frozen=True)
class PeriodicResult:
    target: LpVector
    vector: PeriodicVector
    period: int
    distance_p: Real
    eps: Fraction

    @property
    def distance(self) -> Real:
        return root(self.distance_p, self.vector.system.p)


def _lcm(values):
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def periodic_approximation(system: AtomicSystem, target: LpVector, eps,
                           max_period: int = 1 << 20) -> PeriodicResult:
    """Periodic vector within ``eps`` of ``target``.

    Cycle components are already periodic.  On a line the target is repeated
    every ``N`` steps; the extra mass is ``sum_y |a_y|^p sum_{k != 0} mu(i_y + kN)``,
    finite exactly when the orbit sum is.
    """
    eps = frac(eps)
    _check_support(system, target)
    lines = [a for a in target if system.spec(a).kind != CYCLE]
    for a in lines:
        if not isinstance(certify_summability(system.spec(a).weights), Summable):
            raise CannotApproximate(f"orbit of {a} has no finite orbit sum")
    cyc = _lcm(system.spec(a).length for a in target if system.spec(a).kind == CYCLE)
    radius = max((abs(a.index) for a in lines), default=0)
    N = cyc * -(-(2 * radius + 1) // cyc)
    eps_p = power(eps, system.p)
    while True:
        dist: Real = Fraction(0)
        for a in lines:
            t = lattice_tail(system.spec(a).weights, a.index, N)
            if t is None:
                raise TailNotCertified(f"no lattice tail bound for the orbit of {a}")
            dist = dist + power(abs(target[a]), system.p) * t
        if upper(dist) < lower(eps_p) or not lines:
            return PeriodicResult(target, PeriodicVector(system, target, N), N, dist, eps)
        if N > max_period:
            raise CannotApproximate(f"no period up to {max_period} reaches eps={fmt(eps)}")
        N += cyc * max(1, N // cyc)  # roughly doubles


def periodic_points_dense_check(system: AtomicSystem, targets: Sequence[LpVector], eps) -> list:
    return [periodic_approximation(system, t, eps) for t in targets]


# mixing evidence ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixingEvidence:
    ks: tuple
    ok: tuple
    first_stable: Optional[int]
    label: str = "evidence, not a verdict"


def mixing_evidence(system: AtomicSystem, u: LpVector, v: LpVector, eps, k_max: int) -> MixingEvidence:
    """For ``z_k = u + S^k v``: ``||z_k - u|| = ||S^k v||`` and ``||T^k z_k - v|| = ||T^k u||``."""
    eps_p = power(frac(eps), system.p)
    ks, ok = [], []
    for k in range(1, k_max + 1):
        a = lp_norm_p(system, apply_S(system, v, k))
        b = lp_norm_p(system, apply_T(system, u, k))
        ks.append(k)
        ok.append(upper(a) < lower(eps_p) and upper(b) < lower(eps_p))
    first = None
    for k, flag in zip(reversed(ks), reversed(ok)):
        if not flag:
            break
        first = k
    return MixingEvidence(tuple(ks), tuple(ok), first)
