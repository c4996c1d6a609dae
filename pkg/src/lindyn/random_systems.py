"""Random atomic systems for property tests and demos.

Everything is driven by a ``random.Random`` so runs are reproducible from a
seed.  Profiles are drawn from the families with a finite (star) constant:
two-sided geometric, power law, and finite tables glued onto either.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .system import AtomicSystem, cycle, z_line
from .weights import Geometric, Power, Table, TwoSided, WeightProfile

RATES = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(3, 4), Fraction(1),
         Fraction(5, 4), Fraction(2)]


def _q(rng: random.Random, lo: int = 1, hi: int = 9, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_profile(rng: random.Random) -> WeightProfile:
    kind = rng.choice(["geometric", "two_sided", "power", "table"])
    if kind == "geometric":
        return Geometric(_q(rng), rng.choice(RATES))
    if kind == "two_sided":
        return TwoSided(_q(rng), rng.choice(RATES), _q(rng), rng.choice(RATES))
    if kind == "power":
        return Power(_q(rng), rng.randint(0, 3))
    base = TwoSided(_q(rng), rng.choice(RATES), _q(rng), rng.choice(RATES))
    span = rng.randint(1, 4)
    return Table(tuple((i, _q(rng)) for i in range(-span, span + 1)), base)


def random_system(rng: random.Random, max_orbits: int = 3, cycles: bool = True,
                  p: Optional[int] = None) -> AtomicSystem:
    orbits = []
    for _ in range(rng.randint(1, max_orbits)):
        if cycles and rng.random() < 0.2:
            orbits.append(cycle([_q(rng) for _ in range(rng.randint(1, 4))]))
        else:
            orbits.append(z_line(random_profile(rng)))
    return AtomicSystem(tuple(orbits), p if p is not None else rng.randint(1, 3))


def random_bounded_distortion_system(rng: random.Random, max_orbits: int = 3) -> AtomicSystem:
    """Dissipative system whose lines share one asymptotic shape (so ``K`` is finite)."""
    r_pos, r_neg = rng.choice(RATES), rng.choice(RATES)
    orbits = []
    for _ in range(rng.randint(1, max_orbits)):
        base = TwoSided(_q(rng), r_pos, _q(rng), r_neg)
        if rng.random() < 0.4:
            span = rng.randint(1, 3)
            base = Table(tuple((i, _q(rng)) for i in range(-span, span + 1)), base)
        orbits.append(z_line(base))
    return AtomicSystem(tuple(orbits), rng.randint(1, 3))
