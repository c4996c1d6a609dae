"""Weighted backward shifts as composition operators on atomic spaces.

The shift ``(x_i) -> (w_{i+1} x_{i+1})`` on ``l_p`` is conjugate to
``phi -> phi o f`` with ``f(i) = i + 1`` once the points carry the masses

    mu_{i+1} = mu_i * w_{i+1}**(-p),

(conjugacy ``x -> (x_i mu_i**(-1/p))``).  On ``N`` this starts from the
empty product, ``mu_i = (w_0 ... w_i)**(-p)``; on ``Z`` we normalise
``mu_0 = 1``.  Weights are eventually constant on each side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .certified import fmt, frac, power
from .classifier import (NA, NO, UNKNOWN, YES, ClassificationReport, Verdict, classify)
from .errors import InvalidSystem
from .system import BIJECTIVE, FORWARD, Z_LINE, AtomicSystem, single_line
from .weights import ProductForm, Table, TwoSided

UNILATERAL, BILATERAL = "unilateral", "bilateral"
SHIFT_RULE = "weighted shift on l_p(N): FH iff chaotic iff the point masses are summable"


@dataclass(frozen=True)
class ShiftWeights:
    """``w_i = head[i]`` (then ``tail``) for ``i >= 0``; ``w_{-k} = neg_head[k-1]`` (then ``neg_tail``)."""

    mode: str
    head: tuple = ()
    tail: Fraction = Fraction(1)
    neg_head: tuple = ()
    neg_tail: Optional[Fraction] = None

    def __post_init__(self):
        if self.mode not in (UNILATERAL, BILATERAL):
            raise InvalidSystem(f"shift mode must be unilateral or bilateral, not {self.mode!r}")
        head = tuple(frac(v) for v in self.head)
        neg = tuple(frac(v) for v in self.neg_head)
        tail = frac(self.tail)
        neg_tail = tail if self.neg_tail is None else frac(self.neg_tail)
        if self.mode == UNILATERAL and neg:
            raise InvalidSystem("unilateral weights have no negative indices")
        if any(v <= 0 for v in head + neg + (tail, neg_tail)):
            raise InvalidSystem("shift weights must be positive")
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "neg_head", neg)
        object.__setattr__(self, "tail", tail)
        object.__setattr__(self, "neg_tail", neg_tail)

    @classmethod
    def const(cls, mode: str, value) -> "ShiftWeights":
        return cls(mode, (), value)

    def weight(self, i: int) -> Fraction:
        if i >= 0:
            return self.head[i] if i < len(self.head) else self.tail
        if self.mode == UNILATERAL:
            raise InvalidSystem("unilateral weights have no negative indices")
        k = -i
        return self.neg_head[k - 1] if k <= len(self.neg_head) else self.neg_tail

    def canonical(self) -> "ShiftWeights":
        """Drop head entries that repeat the tail value."""
        head, neg = list(self.head), list(self.neg_head)
        while head and head[-1] == self.tail:
            head.pop()
        while neg and neg[-1] == self.neg_tail:
            neg.pop()
        return ShiftWeights(self.mode, tuple(head), self.tail, tuple(neg),
                            self.neg_tail if self.mode == BILATERAL else None)

    def __eq__(self, other):
        if not isinstance(other, ShiftWeights):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (a.mode, a.head, a.tail, a.neg_head, a.neg_tail) == \
               (b.mode, b.head, b.tail, b.neg_head, b.neg_tail)

    def __hash__(self):
        c = self.canonical()
        return hash((c.mode, c.head, c.tail, c.neg_head, c.neg_tail))

    def descriptor(self) -> dict:
        d = {"mode": self.mode, "head": [fmt(v) for v in self.head], "tail": fmt(self.tail)}
        if self.mode == BILATERAL:
            d["neg_head"] = [fmt(v) for v in self.neg_head]
            d["neg_tail"] = fmt(self.neg_tail)
        return d


def _int_p(p) -> int:
    p = frac(p)
    if p.denominator != 1 or p < 1:
        raise InvalidSystem("shift correspondence needs an integer p >= 1 to keep masses rational")
    return int(p)


def shift_to_system(w: ShiftWeights, p=1) -> AtomicSystem:
    """The atomic system whose composition operator is conjugate to ``B_w`` on ``l_p``."""
    k = _int_p(p)
    if w.mode == UNILATERAL:
        return single_line(ProductForm(w.head, w.tail, k), k, FORWARD)
    # exact masses on the head window, geometric continuation outside
    K = max(len(w.head), 1)
    G = len(w.neg_head)
    masses = {0: Fraction(1)}
    for i in range(1, K):
        masses[i] = masses[i - 1] * w.weight(i) ** -k
    for j in range(1, G + 2):
        masses[-j] = masses[-j + 1] * w.weight(-j + 1) ** k
    r_pos = w.tail ** -k
    r_neg = w.neg_tail ** k
    a_pos = masses[K - 1] / r_pos ** (K - 1)
    a_neg = masses[-(G + 1)] / r_neg ** (G + 1)
    profile = TwoSided(a_pos, r_pos, a_neg, r_neg)
    if all(profile._value(i) == m for i, m in masses.items()):
        return single_line(profile, k, BIJECTIVE)
    return single_line(Table(tuple(masses.items()), profile), k, BIJECTIVE)


def system_to_shift(system: AtomicSystem, head_window: int = 64) -> ShiftWeights:
    """Recover the weights from a single-line system (masses normalised as above).

    The head is read off ``[-head_window, head_window]``; beyond it each side's
    geometric rate gives the tail weight, which must be an exact ``p``-th root.
    """
    if len(system.orbits) != 1 or system.orbits[0].kind != Z_LINE or system.orbits[0].copies != 1:
        raise InvalidSystem("only single-line systems correspond to a weighted shift")
    k = _int_p(system.p)
    prof = system.orbits[0].weights
    mu = prof.weight_at

    def ratio_root(q):
        r = power(q, Fraction(1, k))
        if not isinstance(r, Fraction):
            raise InvalidSystem("weight is not an exact p-th root of a mass ratio")
        return r

    if system.forward:
        prev, head = Fraction(1), []
        for i in range(head_window + 1):
            head.append(ratio_root(prev / mu(i)))
            prev = mu(i)
        reg = prof.regime(1)
        tail = ratio_root(1 / reg.rate) if reg is not None and reg.kind == "geometric" else head[-1]
        return ShiftWeights(UNILATERAL, tuple(head), tail).canonical()
    head = [ratio_root(mu(i - 1) / mu(i)) for i in range(head_window + 1)]
    # w_{-j} links mu_{-j-1} to mu_{-j}
    neg = [ratio_root(mu(-j - 1) / mu(-j)) for j in range(1, head_window + 1)]
    pos_reg, neg_reg = prof.regime(1), prof.regime(-1)
    tail = ratio_root(1 / pos_reg.rate) if pos_reg is not None and pos_reg.kind == "geometric" else head[-1]
    neg_tail = ratio_root(neg_reg.rate) if neg_reg is not None and neg_reg.kind == "geometric" else neg[-1]
    return ShiftWeights(BILATERAL, tuple(head), tail, tuple(neg), neg_tail).canonical()


@dataclass(frozen=True)
class ShiftReport:
    weights: ShiftWeights
    p: int
    system: AtomicSystem
    report: ClassificationReport
    frequently_hypercyclic: Verdict
    chaotic: Verdict
    notes: tuple = field(default=())

    def to_json(self) -> dict:
        return {"weights": self.weights.descriptor(), "p": self.p,
                "frequently_hypercyclic": self.frequently_hypercyclic.to_json(),
                "chaotic": self.chaotic.to_json(),
                "system_report": self.report.to_json(), "notes": list(self.notes)}


def classify_shift(w: ShiftWeights, p=1) -> ShiftReport:
    """Classify ``B_w`` on ``l_p`` through the composition-operator dictionary."""
    k = _int_p(p)
    system = shift_to_system(w, k)
    rep = classify(system)
    fh, ch = rep.frequently_hypercyclic, rep.chaotic
    notes = []
    if w.mode == UNILATERAL:
        # forward systems: the necessary condition can only say no; summable
        # masses give the classical chaotic (hence FH) unilateral shift
        finite = rep.mu_finite.value
        if finite == YES:
            fh = ch = Verdict(YES, SHIFT_RULE)
        elif finite == NO:
            ch = Verdict(NO, SHIFT_RULE)
            fh = fh if fh.value == NO else Verdict(NO, SHIFT_RULE)
        else:
            notes.append("mass sum undecided; only the forward necessary condition applies")
    elif fh.value in (UNKNOWN, NA):
        notes.append("no implemented rule decides this bilateral shift")
    return ShiftReport(w.canonical(), k, system, rep, fh, ch, tuple(notes))
