"""Summability, distortion and ``d_n`` conditions on atomic systems.

On an atomic system the summability condition reduces to a per-atom test: a
finite-measure set is a countable union of atoms, so it can be approximated
from inside by finite atom sets; conversely an atom ``x`` whose orbit sum
diverges cannot be removed by cutting away less than ``mu(x)``, so any set
containing it fails.  Hence the condition holds iff every atom has a finite
orbit sum ``sum_n mu(f^n x)``.  On a cycle that sum counts each atom infinitely
often, so cycles always fail.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np
from scipy.signal import fftconvolve

from .certified import (Real, certainly_le, fmt, lower, rmax, rmin, rsum,
                        to_float, upper)
from .errors import (NotDissipative, NotGenerating, NotWandering,
                     RatioHypothesisViolated, UnboundedRatio, UndecidedError)
from .system import CYCLE, Atom, AtomicSystem
from .weights import (NEG, POS, Divergent, MinOf, Regime, Shifted, Summable,
                      WeightProfile, certify_summability, ratio_sup)

DEFAULT_WINDOW = 1000


# summability condition -----------------------------------------------------------

@dataclass(frozen=True)
class Holds:
    certificates: tuple  # (orbit spec index, orbit sum)
    status = "holds"


@dataclass(frozen=True)
class Fails:
    atom: Atom
    reason: str
    status = "fails"


@dataclass(frozen=True)
class Undecided:
    reason: str
    status = "undecided"


def orbit_sum(system: AtomicSystem, atom: Atom):
    """Certified ``sum_{n in Z} mu(f^n atom)``; None when divergent."""
    o = system.spec(atom)
    if o.kind == CYCLE:
        return None
    res = certify_summability(o.weights)
    if isinstance(res, Summable):
        return res.total
    if isinstance(res, Divergent):
        return None
    raise UndecidedError(res.reason)


def check_sc(system: AtomicSystem):
    """Decide the summability condition by the per-atom orbit-sum criterion."""
    certs = []
    for k, o in enumerate(system.orbits):
        atom = Atom(k, 0, 0)
        if o.kind == CYCLE:
            return Fails(atom, f"orbit {k} is a cycle of length {o.length}: "
                               "its atoms return infinitely often")
        res = certify_summability(o.weights)
        if isinstance(res, Divergent):
            return Fails(atom, f"orbit sum of {atom} diverges: {res.witness}")
        if not isinstance(res, Summable):
            return Undecided(res.reason)
        certs.append((k, res.total))
    return Holds(tuple(certs))


def sc_window_sum(system: AtomicSystem, window: int) -> Real:
    """``sum_n mu(f^n B')`` for ``B'`` the atoms with indices (and copies) in ``[-L, L]``.

    Translates of one atom are disjoint from translates of another atom on a
    different orbit and coincide with them on the same orbit, so the total is
    the sum of orbit sums over ``B'``; on the same line shifts overlap and each
    atom is counted once per atom of ``B'`` it meets.
    """
    total: Real = Fraction(0)
    for atom in system.atoms_in_window(window):
        s = orbit_sum(system, atom)
        if s is None:
            raise UndecidedError(f"{atom} has a divergent orbit sum")
        total = total + s
    return total


# d_n -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class DnSequence:
    wandering_set: tuple
    profile: WeightProfile
    star_c: object
    forward: bool = False

    def value(self, n: int) -> Real:
        return self.profile.weight_at(n)

    def values(self, lo: int, hi: int) -> dict:
        if self.forward:
            lo = max(lo, 0)
        return {n: self.profile.weight_at(n) for n in range(lo, hi + 1)}

    def to_csv(self, lo: int, hi: int) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "d_n", "exact"])
        for n, v in self.values(lo, hi).items():
            w.writerow([n, repr(to_float(v)), fmt(v)])
        return buf.getvalue()


def _check_wandering(system: AtomicSystem, W: Sequence[Atom]):
    if not W:
        raise NotWandering("empty set")
    seen = {}
    for a in W:
        system.validate(a)
        if system.spec(a).kind == CYCLE:
            raise NotWandering(f"{a} lies on a cycle and returns to itself")
        if a.orbit_id in seen:
            d = a.index - seen[a.orbit_id].index
            raise NotWandering(f"{seen[a.orbit_id]} and {a} share an orbit: f^{d} maps one to the other")
        seen[a.orbit_id] = a


def compute_dn(system: AtomicSystem, W: Sequence[Atom]) -> DnSequence:
    """``d_n(W) = min_{x in W} mu(f^n x) / mu(x)`` as a certified profile."""
    W = tuple(W)
    _check_wandering(system, W)
    parts = tuple(Shifted(system.spec(x).weights, x.index, 1 / system.mu(x), forward=system.forward)
                  for x in W)
    prof = parts[0] if len(parts) == 1 else MinOf(parts)
    c = system.star_constant(strict=False)
    return DnSequence(W, prof, c, system.forward)


def default_wandering_atom(system: AtomicSystem) -> Atom:
    """Base atom of the heaviest line (first on ties)."""
    best = None
    for k, o in enumerate(system.orbits):
        if o.kind == CYCLE:
            continue
        a = Atom(k, 0, 0)
        m = system.mu(a)
        if best is None or lower(m) > upper(best[1]):
            best = (a, m)
    if best is None:
        raise NotDissipative("no line to take a wandering atom from")
    return best[0]


@dataclass(frozen=True)
class Passes:
    total: Real
    status = "passes"


@dataclass(frozen=True)
class FailsNecessary:
    witness: str
    status = "fails_necessary"


def check_necessary_fh(seq: DnSequence):
    """``sum_n d_n(W) < infinity`` is necessary for frequent hypercyclicity."""
    res = certify_summability(seq.profile)
    if isinstance(res, Summable):
        return Passes(res.total)
    if isinstance(res, Divergent):
        return FailsNecessary(res.witness)
    return Undecided(res.reason)


def check_dn_ratio(seq: DnSequence, window: int = DEFAULT_WINDOW) -> bool:
    """``d_{n+1} >= d_n / c`` on ``[-window, window]`` and, when possible, beyond."""
    c = seq.star_c
    if c == math.inf:
        return True
    lo = 0 if seq.forward else -window
    prev = seq.value(lo)
    for n in range(lo + 1, window + 1):
        cur = seq.value(n)
        if lower(prev) > upper(cur * c):
            return False
        prev = cur
    try:
        sup, _ = ratio_sup(seq.profile, -1)
    except (UnboundedRatio, UndecidedError):
        return True  # window check only
    return lower(sup) <= upper(c)


# bounded distortion ---------------------------------------------------------------------

@dataclass(frozen=True)
class DistortionCertificate:
    W: tuple
    K: object  # Real, or math.inf
    exact: bool
    witnesses: tuple = ()
    note: str = ""

    @property
    def bounded(self) -> bool:
        return self.K != math.inf


def _shape_key(reg: Optional[Regime]):
    if reg is None:
        return None
    if (reg.kind == "power" and reg.rate == 0) or (reg.kind == "gaussian" and reg.rate == 1):
        return ("geometric", Fraction(1), 0)
    if reg.kind == "gaussian":
        return (reg.kind, reg.rate, reg.lin)
    return (reg.kind, reg.rate, 0)


def _distortion_at(rs, weights, total_w):
    R = rsum(w * r for w, r in zip(weights, rs)) / total_w
    best, arg = Fraction(0), None
    for i, r in enumerate(rs):
        q = rmax([r / R, R / r])
        if best == 0 or upper(q) > upper(best):
            best, arg = q, i
    return best, arg, R


def check_bounded_distortion(system: AtomicSystem, W: Optional[Sequence[Atom]] = None,
                             window: int = DEFAULT_WINDOW) -> DistortionCertificate:
    """Distortion constant ``K`` of a generating wandering set (default: base atoms)."""
    if not system.dissipative:
        raise NotDissipative("bounded distortion is defined for dissipative systems")
    if system.has_countable_family:
        raise NotGenerating("a generating set would need countably many atoms of total "
                            "infinite measure; distortion is not evaluated")
    if W is None:
        W = system.base_atoms()
    W = tuple(W)
    _check_wandering(system, W)
    covered = {a.orbit_id for a in W}
    for k, o in enumerate(system.orbits):
        for c in range(o.copies):
            if (k, c) not in covered:
                raise NotGenerating(f"orbit ({k}, copy {c}) has no atom in W")
    if len(W) == 1:
        return DistortionCertificate(W, Fraction(1), True, note="single atom")
    mus = [system.mu(x) for x in W]
    total = rsum(mus)
    profs = [system.orbit_profile(x) for x in W]
    profs = [Shifted(p, 0, 1 / m, forward=system.forward) for p, m in zip(profs, mus)]
    sides = profs[0].sides()
    starts = []
    bounded_exact = True
    for side in sides:
        regs = [p.regime(side) for p in profs]
        keys = {_shape_key(r) for r in regs}
        if None in keys:
            raise UndecidedError("distortion needs closed-form profiles")
        if len(keys) > 1:
            return _unbounded_witness(W, profs, mus, total, side, regs)
        if regs[0].kind == "power" and regs[0].rate != 0:
            bounded_exact = False
        starts.append(max(r.start for r in regs))
    S = max(starts + [1])
    lo = 0 if system.forward else -S
    best, wit = Fraction(0), []
    for n in range(lo, S + 1):
        q, arg, _ = _distortion_at([p._value(n) for p in profs], mus, total)
        if upper(q) > upper(best):
            best = q
        wit.append((n, W[arg]))
    if bounded_exact:
        # every ratio is constant beyond the regime starts
        return DistortionCertificate(W, best, True, tuple(wit[:5]))
    # power regimes: pairwise ratios are monotone in |n|; bound by edge or limit
    edge = max(S, window)
    for n in range(max(lo, -edge), edge + 1):
        q, arg, _ = _distortion_at([p._value(n) for p in profs], mus, total)
        if upper(q) > upper(best):
            best = q
    tail_bound = Fraction(0)
    for side in sides:
        regs = [p.regime(side) for p in profs]
        m = edge
        for i, ri in enumerate(regs):
            s = Fraction(0)
            for j, rj in enumerate(regs):
                at_edge = upper(rj.value(m) / ri.value(m))
                limit = upper(rj.coef / ri.coef)
                s += upper(mus[j]) * max(at_edge, limit)
            up = s / lower(total)
            # R/r_i <= up and r_i/R <= 1/(min over j of the same pairwise bounds)
            inv = Fraction(0)
            for j, rj in enumerate(regs):
                at_edge = upper(ri.value(m) / rj.value(m))
                limit = upper(ri.coef / rj.coef)
                inv = max(inv, max(at_edge, limit))
            tail_bound = max(tail_bound, up, inv)
    K = max(upper(best), tail_bound)
    return DistortionCertificate(W, K, False, note="upper bound (power-law tails)")


def _unbounded_witness(W, profs, mus, total, side, regs):
    wit = []
    m = max(r.start for r in regs) + 1
    for step in range(6):
        n = side * (m + 8 * step)
        q, arg, _ = _distortion_at([p._value(n) for p in profs], mus, total)
        wit.append((n, float(upper(q))))
    desc = ", ".join(r.describe() for r in regs)
    return DistortionCertificate(W, math.inf, True, tuple(wit),
                                 note=f"orbit profiles decay at different rates ({desc})")


# shifted sums of alpha over a set ---------------------------------------------------------

@dataclass(frozen=True)
class BRReport:
    horizon: int
    max_beta: float
    argmax: int
    head_sum: float
    ratio_constant: Fraction
    alpha_summable: Optional[bool]
    betas_sample: tuple = ()


def _ratio_hypothesis(alpha: WeightProfile) -> Fraction:
    """Largest ``C`` with ``alpha_{n+1} >= C alpha_n`` for all n (or the mirrored form)."""
    out = []
    for step in (1, -1):
        try:
            sup, _ = ratio_sup(alpha, -step)  # sup alpha_{n-step}/alpha_n
            out.append(1 / upper(sup) if upper(sup) > 0 else None)
        except (UnboundedRatio, UndecidedError):
            out.append(None)
    good = [c for c in out if c is not None]
    if not good:
        raise RatioHypothesisViolated("no constant C with alpha_{n+1} >= C alpha_n "
                                      "(or alpha_n >= C alpha_{n+1}) for all n")
    return max(good)


def check_br_lemma(alpha: WeightProfile, A, horizon: int) -> BRReport:
    """``beta_n = sum_{m in A, m <= horizon} alpha_{m-n}`` for ``n in A`` up to ``horizon``.

    ``A`` is an iterable/generator of nonnegative integers or a callable
    ``A(horizon) -> sorted array``.  Computation is by FFT correlation in floats;
    it is evidence for the lemma, not a certificate.
    """
    C = _ratio_hypothesis(alpha)
    if callable(A):
        members = np.asarray(A(horizon), dtype=np.int64)
    else:
        members = np.fromiter((a for a in A if 0 <= a <= horizon), dtype=np.int64)
    members = members[(members >= 0) & (members <= horizon)]
    if members.size == 0:
        raise ValueError("A has no elements up to the horizon")
    ind = np.zeros(horizon + 1)
    ind[members] = 1.0
    # beta_n = sum_m ind[m] alpha[m - n]; lags m - n range over [-horizon, horizon]
    lags = alpha.float_values(-horizon, horizon)
    # correlation: beta[n] = sum_m ind[m] * lags[(m - n) + horizon]
    full = fftconvolve(ind, lags[::-1], mode="full")
    # full[k] = sum_m ind[m] * lags_rev[k - m] = sum_m ind[m] lags[2H - k + m]
    # want lags[m - n + H]  =>  2H - k = H - n  =>  k = H + n
    beta = full[horizon + members]
    i = int(np.argmax(beta))
    head = float(np.sum(lags))
    res = certify_summability(alpha)
    summable = True if isinstance(res, Summable) else False if isinstance(res, Divergent) else None
    sample = tuple((int(members[j]), float(beta[j]))
                   for j in np.linspace(0, members.size - 1, min(8, members.size)).astype(int))
    return BRReport(horizon, float(beta[i]), int(members[i]), head, C, summable, sample)


def br_max_beta_progression(alpha: WeightProfile, step: int, offset: int, horizon: int) -> float:
    """Max of ``beta_n`` for ``A = offset + step*N`` via prefix sums (no FFT).

    For an arithmetic progression ``beta_n = sum_j alpha_{step*j - n + offset}``,
    i.e. a sum of ``alpha`` over a residue class, so each ``beta_n`` is a window
    sum of the subsampled sequence; long-double prefix sums keep it accurate.
    """
    members = np.arange(offset, horizon + 1, step, dtype=np.int64)
    if members.size == 0:
        raise ValueError("empty progression")
    k = members.size
    # lags m - n = step*(j - i) for m = a_j, n = a_i; d = j - i in [-(k-1), k-1]
    d = np.arange(-(k - 1), k, dtype=np.int64)
    lo, hi = int(d[0] * step), int(d[-1] * step)
    dense = alpha.float_values(lo, hi).astype(np.longdouble)
    vals = dense[(d * step - lo)]
    pref = np.concatenate([[np.longdouble(0)], np.cumsum(vals)])
    # beta at member i: sum over j in [0, k) of vals[j - i + k - 1]
    i = np.arange(k)
    start = (k - 1) - i
    beta = pref[start + k] - pref[start]
    return float(beta.max())
