"""Constructive frequent-hypercyclicity machinery on atomic systems.

The vector built here is ``x = sum_k sum_{n in A_k} S^n y_k`` where ``y_k``
enumerates a dense family of finitely supported rational vectors and the sets
``A_k`` are pairwise disjoint, well separated, and of positive lower density.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence

import numpy as np

from .certified import Real, fmt, frac, lower, power, root, rsum, upper
from .conditions import Holds, check_sc, compute_dn
from .engine import DensityCurve, LpVector, apply_S, apply_T, hitting_density
from .errors import OpenProblem, SCRequired, TailNotCertified
from .system import CYCLE, Atom, AtomicSystem
from .weights import Summable, certify_summability, sum_beyond


# schedules -------------------------------------------------------------------------------

@dataclass(frozen=True)
class FrequencySchedule:
    """``A_k = {s*n : n >= 1, n = 4**(k-1) mod 4**k}`` for ``k = 1..K``.

    The 4-adic valuation of ``n`` is ``k - 1`` on slot ``k``, which makes the
    slots disjoint; two elements of different slots differ by a nonzero
    multiple of ``s``, and two elements of slot ``k`` by a multiple of
    ``s * 4**k``.  With ``s >= K`` every gap is at least ``max(k, l)``.
    """

    K: int
    stretch: int

    def __post_init__(self):
        if self.K < 0 or self.stretch < 1:
            raise ValueError("need K >= 0 and stretch >= 1")

    def density(self, k: int) -> Fraction:
        return Fraction(1, self.stretch * 4 ** k)

    def gap(self, k: int) -> int:
        return self.stretch * 4 ** k

    def slot(self, k: int, horizon: int) -> np.ndarray:
        """Sorted elements of ``A_k`` up to ``horizon``."""
        if not 1 <= k <= self.K:
            raise ValueError(f"slot {k} outside 1..{self.K}")
        first = self.stretch * 4 ** (k - 1)
        return np.arange(first, horizon + 1, self.gap(k), dtype=np.int64)

    def contains(self, k: int, n: int) -> bool:
        if n <= 0 or n % self.stretch:
            return False
        m = n // self.stretch
        return m % 4 ** k == 4 ** (k - 1)

    def slot_of(self, n: int) -> Optional[int]:
        if n <= 0 or n % self.stretch:
            return None
        m, v = n // self.stretch, 0
        while m % 4 == 0:
            m //= 4
            v += 1
        return v + 1 if m % 4 == 1 and v + 1 <= self.K else None


def schedule_frequencies(K: int, stretch: Optional[int] = None) -> FrequencySchedule:
    return FrequencySchedule(K, max(1, K) if stretch is None else stretch)


@dataclass(frozen=True)
class ScheduleReport:
    disjoint: bool
    min_cross_gap: Optional[int]
    separated: bool
    densities: tuple  # (k, empirical density, designed delta_k)
    horizon: int


def check_schedule(schedule: FrequencySchedule, horizon: int) -> ScheduleReport:
    """Exhaustive check of disjointness, separation and density up to ``horizon``."""
    slots = [schedule.slot(k, horizon) for k in range(1, schedule.K + 1)]
    if not slots:
        return ScheduleReport(True, None, True, (), horizon)
    labels = np.concatenate([np.full(s.size, k + 1) for k, s in enumerate(slots)])
    merged = np.concatenate(slots)
    order = np.argsort(merged, kind="stable")
    merged, labels = merged[order], labels[order]
    disjoint = bool(np.all(np.diff(merged) > 0))
    # for sorted values the binding constraints are between neighbours
    gaps = np.diff(merged)
    need = np.maximum(labels[1:], labels[:-1])
    separated = bool(np.all(gaps >= need)) if gaps.size else True
    min_gap = int(gaps.min()) if gaps.size else None
    dens = tuple((k, s.size / horizon, float(schedule.density(k))) for k, s in enumerate(slots, 1))
    return ScheduleReport(disjoint, min_gap, separated, dens, horizon)


# dense family ------------------------------------------------------------------------------

def _amplitudes(level: int) -> List[Fraction]:
    """``num/den`` with ``den <= level`` and ``|num| <= level*den``, ordered (den, |num|, +/-)."""
    seen, out = set(), []
    for den in range(1, level + 1):
        for num in range(0, level * den + 1):
            for sign in (1, -1):
                q = Fraction(sign * num, den)
                if q not in seen:
                    seen.add(q)
                    out.append(q)
    return out


class DenseFamily:
    """Diagonal enumeration of finitely supported rational vectors on summable lines.

    Level ``j`` holds the vectors supported on atoms with ``|index| <= j - 1``
    (and ``|copy| <= j - 1`` on countable families) whose amplitudes are
    rationals with denominator at most ``j`` and modulus at most ``j``.  Members
    are listed level by level, each vector once, so every finite rational
    combination eventually appears.
    """

    def __init__(self, system: AtomicSystem):
        self.system = system
        self.lines = [k for k, o in enumerate(system.orbits)
                      if o.kind != CYCLE and isinstance(certify_summability(o.weights), Summable)]
        self._cache: List[LpVector] = []
        self._levels: List[int] = []
        self._gen = self._generate()

    def _atoms(self, level: int) -> List[Atom]:
        w = level - 1
        out = []
        for k in self.lines:
            o = self.system.orbits[k]
            idx = range(0, w + 1) if self.system.forward else range(-w, w + 1)
            out.extend(Atom(k, i, c) for c in o.copy_range(w) for i in idx)
        return sorted(out, key=lambda a: (abs(a.index) + abs(a.copy), a))

    def _in_level(self, vec: LpVector, level: int) -> bool:
        if level < 1:
            return False
        w = level - 1
        for a, v in vec.items():
            o = self.system.orbits[a.orbit]
            if abs(a.index) > w or (o.copies is None and abs(a.copy) > w) or a.orbit not in self.lines:
                return False
            if v.denominator > level or abs(v) > level:
                return False
        return True

    def _generate(self) -> Iterator[tuple]:
        if not self.lines:
            return
        for level in itertools.count(1):
            atoms = self._atoms(level)
            amps = _amplitudes(level)
            for combo in itertools.product(amps, repeat=len(atoms)):
                if not any(combo):
                    continue
                vec = LpVector(dict(zip(atoms, combo)))
                if self._in_level(vec, level - 1):
                    continue
                yield level, vec

    def member(self, k: int) -> LpVector:
        """``k``-th member (1-based)."""
        if k < 1:
            raise ValueError("members are numbered from 1")
        while len(self._cache) < k:
            try:
                level, vec = next(self._gen)
            except StopIteration:
                raise ValueError("the system has no summable line") from None
            self._cache.append(vec)
            self._levels.append(level)
        return self._cache[k - 1]

    def level_of(self, k: int) -> int:
        self.member(k)
        return self._levels[k - 1]

    def members(self, count: int) -> List[LpVector]:
        return [self.member(k) for k in range(1, count + 1)]

    def contains(self, vec: LpVector) -> bool:
        """Membership in some level (every nonzero rational vector on summable lines)."""
        if not vec:
            return False
        return all(a.orbit in self.lines for a in vec)


# construction ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class FHCResult:
    vector: LpVector
    tail_bound: Real  # bound on ||x - x_N||_p
    horizon: int
    schedule: FrequencySchedule
    members: tuple
    translates: tuple  # (k, number of translates kept)


def _diameter(vec: LpVector) -> int:
    by = {}
    for a in vec:
        lo, hi = by.get(a.orbit_id, (a.index, a.index))
        by[a.orbit_id] = (min(lo, a.index), max(hi, a.index))
    return max((hi - lo for lo, hi in by.values()), default=0)


def construct_fh_vector(system: AtomicSystem, schedule: FrequencySchedule, horizon: int,
                        family: Optional[DenseFamily] = None,
                        members: Optional[Sequence[LpVector]] = None) -> FHCResult:
    """Truncation of ``sum_k sum_{n in A_k} S^n y_k`` to orbit indices ``<= horizon``.

    Translates within a slot have disjoint supports, so the discarded part of
    slot ``k`` has ``p``-th power norm ``g_k = sum_{n in A_k, kept-out} ||S^n y_k||^p``,
    bounded by orbit tails; slots are combined with the triangle inequality.
    """
    if system.forward:
        raise SCRequired("the construction needs a bijective system")
    sc = check_sc(system)
    if not isinstance(sc, Holds):
        raise SCRequired(f"summability condition does not hold: {getattr(sc, 'reason', sc)}")
    if members is None:
        family = family or DenseFamily(system)
        members = family.members(schedule.K)
    members = tuple(members)
    if len(members) < schedule.K:
        raise ValueError("need one family member per slot")
    out = {}
    tail: Real = Fraction(0)
    kept = []
    for k, y in enumerate(members[:schedule.K], 1):
        if not y:
            kept.append((k, 0))
            continue
        for a in y:
            if system.spec(a).kind == CYCLE or not isinstance(
                    certify_summability(system.spec(a).weights), Summable):
                raise TailNotCertified(f"member {k} touches {a}, whose orbit sum is not certified")
        if _diameter(y) >= schedule.gap(k):
            raise ValueError(f"slot {k} gap {schedule.gap(k)} does not separate translates of member {k}")
        top = max(a.index for a in y)
        last = horizon - top
        ns = schedule.slot(k, last) if last >= 1 else np.array([], dtype=np.int64)
        for n in ns:
            for a, v in y.items():
                b = Atom(a.orbit, a.index + int(n), a.copy)
                out[b] = out.get(b, 0) + v
        kept.append((k, int(ns.size)))
        # discarded translates start at the first slot element past `last`
        first_out = int(ns[-1]) + schedule.gap(k) if ns.size else schedule.stretch * 4 ** (k - 1)
        g: Real = Fraction(0)
        for a, v in y.items():
            t = sum_beyond(system.spec(a).weights, a.index + first_out - 1, 1)
            if t is None:
                raise TailNotCertified(f"no tail bound for the orbit of {a}")
            g = g + power(abs(v), system.p) * t
        tail = tail + root(g, system.p)
    return FHCResult(LpVector(out), tail, horizon, schedule, members[:schedule.K], tuple(kept))


# unconditional convergence ------------------------------------------------------------------

@dataclass(frozen=True)
class UnconditionalCertificate:
    forward_sum: Real   # sum_{n>=1} ||T^n phi||_p^p
    backward_sum: Real  # sum_{n>=1} ||S^n phi||_p^p
    orlicz: bool        # p >= 2: the p-summability used by the converse


def verify_unconditional(system: AtomicSystem, phi: LpVector) -> UnconditionalCertificate:
    """Certify ``sum_n ||T^n phi||^p`` and ``sum_n ||S^n phi||^p`` finite.

    ``||T^n phi||_p^p = sum_x |a_x|^p mu(f^-n x)``, so summing over ``n >= 1``
    gives the mass of the orbit strictly before each support atom (and strictly
    after it for ``S``).
    """
    fwd: Real = Fraction(0)
    bwd: Real = Fraction(0)
    for a, v in phi.items():
        o = system.spec(a)
        if o.kind == CYCLE:
            raise TailNotCertified(f"{a} lies on a cycle: the norms of T^n phi are periodic")
        before = sum_beyond(o.weights, a.index, -1)
        after = sum_beyond(o.weights, a.index, 1)
        if before is None or after is None:
            raise TailNotCertified(f"orbit of {a} has no certified tail")
        ap = power(abs(v), system.p)
        fwd = fwd + ap * before
        bwd = bwd + ap * after
    return UnconditionalCertificate(fwd, bwd, system.p >= 2)


def converse_check(system: AtomicSystem):
    """Gate for the frequently hypercyclic => summability direction."""
    if system.p < 2:
        raise OpenProblem("whether frequent hypercyclicity forces the summability "
                          "condition for 1 <= p < 2 is open")
    return True


# empirical checks -------------------------------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalReport:
    curves: tuple          # DensityCurve per target
    lemma_hits: int        # size of the hit set used for the d_n sum check
    lemma_max_sum: float   # max over sampled n of sum_{m in A} d_{m-n}(W)
    lemma_ok: bool
    label: str = "evidence, not proof"


def lemma_hit_set(system: AtomicSystem, x: LpVector, W: Atom, horizon: int) -> np.ndarray:
    """``{n : ||T^n x - chi_W||_p^p < mu(W) / 2^p}`` up to ``horizon``."""
    chi = LpVector.indicator(W)
    m = system.mu(W)
    # ||.||_p^p < mu(W) / 2^p  <=>  ||.||_p < mu(W)^(1/p) / 2; rounding the
    # threshold down only shrinks the hit set, which keeps the lemma sum valid
    eps = lower(root(m, system.p)) / 2
    return hitting_density(system, x, chi, eps, horizon, exact=False).hits


def lemma_sum(system: AtomicSystem, W: Atom, hits: np.ndarray, horizon: int,
              samples: int = 64) -> float:
    dn = compute_dn(system, [W])
    d = dn.profile.float_values(-horizon, horizon)
    if hits.size == 0:
        return 0.0
    idx = np.unique(np.linspace(0, hits.size - 1, min(samples, hits.size)).astype(int))
    worst = 0.0
    for n in hits[idx]:
        worst = max(worst, float(d[hits - n + horizon].sum()))
    return worst


def empirical_fh_check(system: AtomicSystem, x: LpVector, targets: Sequence[LpVector], eps,
                       horizon: int, W: Optional[Atom] = None) -> EmpiricalReport:
    curves = tuple(hitting_density(system, x, t, eps, horizon, exact=False) for t in targets)
    if W is None:
        W = next(iter(targets[0])) if targets and targets[0] else Atom(0, 0, 0)
    hits = lemma_hit_set(system, x, W, horizon)
    worst = lemma_sum(system, W, hits, horizon)
    return EmpiricalReport(curves, int(hits.size), worst, worst < 2)


def support_collisions(system: AtomicSystem, schedule: FrequencySchedule,
                       members: Sequence[LpVector], horizon: int) -> dict:
    """Count atoms hit by more than one translate, within and across slots."""
    owner = {}
    within = across = 0
    for k, y in enumerate(members[:schedule.K], 1):
        for n in schedule.slot(k, horizon):
            for a in y:
                b = Atom(a.orbit, a.index + int(n), a.copy)
                if b in owner:
                    if owner[b] == k:
                        within += 1
                    else:
                        across += 1
                else:
                    owner[b] = k
    return {"within_slot": within, "across_slots": across}
