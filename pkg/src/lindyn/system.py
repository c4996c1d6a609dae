"""Countable atomic systems presented in orbit-normal form.

Every orbit of a bijection of a countable set is either a finite cycle or a copy
of ``Z`` (a *z_line*).  A system is a list of :class:`OrbitSpec` entries; each
entry may stand for several identical copies, or for countably many copies
indexed by ``Z`` (``copies=None``), which is how infinite-measure examples such
as the ``Z x Z`` grid stay finite to describe.

The map acts structurally: ``f(Atom(o, k, c)) = Atom(o, k + 1, c)``, with
indices taken mod ``L`` on cycles.  In ``forward`` mode lines are copies of
``N`` and the first atom of each line has no preimage.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Union

from .certified import Real, fmt, frac, rmax, rsum, upper
from .errors import (ForwardOnly, InvalidSystem, NotDissipative, OutOfDomain,
                     UnboundedRatio, UndecidedError)
from .weights import (Divergent, Geometric, Reversed, Shifted, Summable, Table,
                      WeightProfile, certify_summability, profile_from_json,
                      ratio_sup)

BIJECTIVE = "bijective"
FORWARD = "forward"
Z_LINE = "z_line"
CYCLE = "cycle"


class Atom(NamedTuple):
    """Atom ``index`` on copy ``copy`` of orbit spec ``orbit``."""

    orbit: int
    index: int
    copy: int = 0

    @property
    def orbit_id(self):
        return (self.orbit, self.copy)

    def __str__(self):
        if self.copy:
            return f"({self.orbit}:{self.copy}, {self.index})"
        return f"({self.orbit}, {self.index})"


@dataclass(frozen=True)
class OrbitSpec:
    kind: str
    weights: Union[WeightProfile, tuple]
    length: Optional[int] = None
    copies: Optional[int] = 1

    def __post_init__(self):
        if self.kind not in (Z_LINE, CYCLE):
            raise InvalidSystem(f"unknown orbit kind {self.kind!r}")
        if self.copies is not None and (not isinstance(self.copies, int) or self.copies < 1):
            raise InvalidSystem("copies must be a positive integer or None (countably many)")
        if self.kind == CYCLE:
            w = self.weights
            if isinstance(w, WeightProfile):
                if self.length is None:
                    raise InvalidSystem("cycle needs a length")
                vals = tuple(w.weight_at(k) for k in range(self.length))
            else:
                vals = tuple(frac(v) for v in w)
            L = len(vals) if self.length is None else self.length
            if L < 1 or len(vals) != L:
                raise InvalidSystem(f"cycle of length {L} needs {L} weights, got {len(vals)}")
            if any(upper(v) <= 0 or v <= 0 for v in vals):
                raise InvalidSystem("cycle weights must be positive")
            object.__setattr__(self, "weights", vals)
            object.__setattr__(self, "length", L)
        else:
            if not isinstance(self.weights, WeightProfile):
                raise InvalidSystem("z_line weights must be a WeightProfile")
            if self.weights.domain == "finite":
                raise InvalidSystem("z_line weights must be defined on an infinite index set")

    @property
    def countable(self) -> bool:
        return self.copies is None

    def copy_range(self, window: int) -> range:
        if self.copies is None:
            return range(-window, window + 1)
        return range(self.copies)


def cycle(weights: Sequence) -> OrbitSpec:
    return OrbitSpec(CYCLE, tuple(weights))


def z_line(profile: WeightProfile, copies: Optional[int] = 1) -> OrbitSpec:
    return OrbitSpec(Z_LINE, profile, copies=copies)


@dataclass(frozen=True)
class HopfDecomposition:
    """Orbit specs split into the conservative (cycles) and dissipative (lines) parts."""

    conservative_orbits: frozenset
    dissipative_orbits: frozenset

    def part_of(self, atom: Atom) -> str:
        return "conservative" if atom.orbit in self.conservative_orbits else "dissipative"


@dataclass(frozen=True)
class AtomicSystem:
    orbits: tuple
    p: Fraction = Fraction(1)
    mode: str = BIJECTIVE

    def __post_init__(self):
        orbits = tuple(self.orbits)
        if not orbits:
            raise InvalidSystem("a system needs at least one orbit")
        if self.mode not in (BIJECTIVE, FORWARD):
            raise InvalidSystem(f"unknown mode {self.mode!r}")
        p = frac(self.p)
        if p < 1:
            raise InvalidSystem("p must be at least 1")
        if self.mode == FORWARD:
            # lines become copies of N
            orbits = tuple(
                OrbitSpec(o.kind, _forward_profile(o.weights), copies=o.copies)
                if o.kind == Z_LINE else o for o in orbits)
        else:
            for o in orbits:
                if o.kind == Z_LINE and o.weights.domain != "Z":
                    raise InvalidSystem("bijective systems need z_line weights on all of Z")
        object.__setattr__(self, "orbits", orbits)
        object.__setattr__(self, "p", p)

    # structure ----------------------------------------------------------------
    @property
    def forward(self) -> bool:
        return self.mode == FORWARD

    @property
    def has_countable_family(self) -> bool:
        return any(o.countable for o in self.orbits)

    def spec(self, atom: Atom) -> OrbitSpec:
        try:
            return self.orbits[atom.orbit]
        except (IndexError, TypeError):
            raise InvalidSystem(f"no orbit {atom.orbit}") from None

    def validate(self, atom: Atom) -> Atom:
        o = self.spec(atom)
        if o.copies is not None and not 0 <= atom.copy < o.copies:
            raise InvalidSystem(f"orbit {atom.orbit} has no copy {atom.copy}")
        if o.kind == CYCLE:
            if not 0 <= atom.index < o.length:
                raise InvalidSystem(f"cycle index {atom.index} outside 0..{o.length - 1}")
        elif self.forward and atom.index < 0:
            raise OutOfDomain(f"negative index {atom.index} on a forward line")
        return atom

    def iterate(self, atom: Atom, n: int) -> Atom:
        """``f^n(atom)``; negative ``n`` means preimages."""
        o = self.spec(atom)
        if o.kind == CYCLE:
            return Atom(atom.orbit, (atom.index + n) % o.length, atom.copy)
        k = atom.index + n
        if self.forward and k < 0:
            raise ForwardOnly(f"{atom} has no {-n}-th preimage on a forward line")
        return Atom(atom.orbit, k, atom.copy)

    def f(self, atom: Atom) -> Atom:
        return self.iterate(atom, 1)

    def f_inv(self, atom: Atom) -> Atom:
        return self.iterate(atom, -1)

    def has_preimage(self, atom: Atom, n: int = 1) -> bool:
        o = self.spec(atom)
        return o.kind == CYCLE or not self.forward or atom.index >= n

    def mu(self, atom: Atom) -> Real:
        o = self.spec(atom)
        if o.kind == CYCLE:
            return o.weights[atom.index % o.length]
        return o.weights.weight_at(atom.index)

    def base_atoms(self, window: int = 0) -> List[Atom]:
        """Index-0 atoms of every orbit (countable families cut to ``|copy| <= window``)."""
        return [Atom(k, 0, c) for k, o in enumerate(self.orbits) for c in o.copy_range(window)]

    def atoms_in_window(self, window: int) -> List[Atom]:
        out = []
        for k, o in enumerate(self.orbits):
            if o.kind == CYCLE:
                idx = range(o.length)
            elif self.forward:
                idx = range(0, window + 1)
            else:
                idx = range(-window, window + 1)
            out.extend(Atom(k, i, c) for c in o.copy_range(window) for i in idx)
        return out

    def orbit_profile(self, atom: Atom) -> WeightProfile:
        """``n -> mu(f^n(atom))`` as a profile (lines only)."""
        o = self.spec(atom)
        if o.kind == CYCLE:
            raise NotDissipative(f"{atom} lies on a cycle")
        return Shifted(o.weights, atom.index, Fraction(1), forward=self.forward)

    # operations --------------------------------------------------------------
    def hopf_decompose(self) -> HopfDecomposition:
        cons = frozenset(k for k, o in enumerate(self.orbits) if o.kind == CYCLE)
        diss = frozenset(k for k, o in enumerate(self.orbits) if o.kind == Z_LINE)
        return HopfDecomposition(cons, diss)

    @property
    def dissipative(self) -> bool:
        return all(o.kind == Z_LINE for o in self.orbits)

    def star_constant(self, strict: bool = True):
        """Least ``c`` with ``mu(f^-1 A) <= c mu(A)`` for every atom set ``A``.

        Raises :class:`UnboundedRatio` (or returns ``math.inf`` if ``strict`` is
        False) when the ratios are unbounded.
        """
        vals = []
        for o in self.orbits:
            if o.kind == CYCLE:
                w = o.weights
                vals.append(rmax(w[k - 1] / w[k] for k in range(o.length)))
                continue
            try:
                vals.append(ratio_sup(o.weights, -1)[0])
            except UnboundedRatio:
                if strict:
                    raise
                return math.inf
        return rmax(vals)

    def total_measure(self):
        """Exact (or certified) total mass, ``math.inf`` when infinite."""
        total: Real = Fraction(0)
        for o in self.orbits:
            if o.kind == CYCLE:
                s = rsum(o.weights)
            else:
                res = certify_summability(o.weights)
                if isinstance(res, Divergent):
                    return math.inf
                if not isinstance(res, Summable):
                    raise UndecidedError(f"orbit sum undecided: {res.reason}")
                s = res.total
            if o.copies is None:
                return math.inf
            total = total + s * o.copies
        return total

    def is_ergodic_dissipative(self) -> bool:
        if not self.dissipative:
            raise NotDissipative("the system has a cycle")
        return len(self.orbits) == 1 and self.orbits[0].copies == 1

    def reversed(self) -> "AtomicSystem":
        """The same space with ``f^-1`` as the map; atom ``k`` becomes ``-k``."""
        if self.forward:
            from .errors import NotInvertibleSystem
            raise NotInvertibleSystem("forward-only systems have no inverse map")
        out = []
        for o in self.orbits:
            if o.kind == CYCLE:
                L = o.length
                out.append(OrbitSpec(CYCLE, tuple(o.weights[(-k) % L] for k in range(L)),
                                     copies=o.copies))
            else:
                out.append(OrbitSpec(Z_LINE, Reversed(o.weights), copies=o.copies))
        return AtomicSystem(tuple(out), self.p, self.mode)

    def mirror_atom(self, atom: Atom) -> Atom:
        """Image of ``atom`` in :meth:`reversed`."""
        o = self.spec(atom)
        k = (-atom.index) % o.length if o.kind == CYCLE else -atom.index
        return Atom(atom.orbit, k, atom.copy)

    # JSON ------------------------------------------------------------------------
    def to_json(self) -> dict:
        orbits = []
        for o in self.orbits:
            if o.kind == CYCLE:
                d = {"kind": CYCLE, "length": o.length,
                     "weights": {"family": "explicit_table",
                                 "values": {str(k): fmt(v) for k, v in enumerate(o.weights)}}}
            else:
                w = o.weights
                if self.forward and isinstance(w, Shifted) and w.forward and w.shift == 0 and w.scale == 1:
                    w = w.base
                d = {"kind": Z_LINE, "weights": w.descriptor()}
            if o.copies != 1:
                d["copies"] = "countable" if o.copies is None else o.copies
            orbits.append(d)
        return {"p": fmt(self.p), "mode": self.mode, "orbits": orbits}

    @classmethod
    def from_json(cls, data) -> "AtomicSystem":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            orbits = []
            for d in data["orbits"]:
                prof = profile_from_json(d["weights"])
                copies = d.get("copies", 1)
                copies = None if copies == "countable" else int(copies)
                if d["kind"] == CYCLE:
                    if "length" not in d:
                        raise InvalidSystem("cycle needs a length")
                    orbits.append(OrbitSpec(CYCLE, prof, length=int(d["length"]), copies=copies))
                else:
                    orbits.append(OrbitSpec(d["kind"], prof, copies=copies))
            p = data.get("p", 1)
            p = frac(str(p)) if isinstance(p, float) else frac(p)
            return cls(tuple(orbits), p, data.get("mode", BIJECTIVE))
        except KeyError as exc:
            raise InvalidSystem(f"system description is missing {exc}") from None


def _forward_profile(w: WeightProfile) -> WeightProfile:
    if w.domain == "N":
        return w
    return Shifted(w, 0, Fraction(1), forward=True)


def from_permutation(perm, weights, p=1) -> AtomicSystem:
    """Build a cycle-only system from a permutation of ``0..n-1``.

    ``perm`` maps ``i -> perm[i]``; ``weights[i]`` is the mass of point ``i``.
    Returns the system and the map point -> Atom.
    """
    perm = list(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise InvalidSystem("not a permutation of 0..n-1")
    seen, orbits, where = set(), [], {}
    for start in range(n):
        if start in seen:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            where[x] = Atom(len(orbits), len(cyc))
            cyc.append(x)
            x = perm[x]
        orbits.append(cycle([frac(weights[i]) for i in cyc]))
    return AtomicSystem(tuple(orbits), p), where


def grid_system(p=1) -> AtomicSystem:
    """``Z x Z`` with ``f(i, j) = (i, j + 1)`` and ``mu(i, j) = 2**-|j|``.

    Atom ``(i, j)`` is ``Atom(0, j, copy=i)``.
    """
    return AtomicSystem((z_line(Geometric(1, Fraction(1, 2)), copies=None),), p)


def grid_atom(i: int, j: int) -> Atom:
    return Atom(0, j, i)


def single_line(profile: WeightProfile, p=1, mode: str = BIJECTIVE) -> AtomicSystem:
    return AtomicSystem((z_line(profile),), p, mode)
