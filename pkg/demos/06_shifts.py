"""Weighted backward shifts through the composition-operator dictionary.

A unilateral shift with weight 2 has summable point masses 2^-(i+1) and is
chaotic.  The bilateral shift with weight 2 is twice an invertible isometry:
it stretches every vector by 2^n, so nothing comes back and no orbit is dense.
Summable masses on both sides restore chaos.
"""
from fractions import Fraction

from lindyn.shifts import BILATERAL, UNILATERAL, ShiftWeights, classify_shift

cases = {
    "unilateral, w = 2": ShiftWeights.const(UNILATERAL, 2),
    "unilateral, w = 1/2": ShiftWeights.const(UNILATERAL, Fraction(1, 2)),
    "bilateral, w = 2": ShiftWeights.const(BILATERAL, 2),
    "bilateral, 2 ahead and 1/2 behind": ShiftWeights(BILATERAL, (Fraction(1, 2),), 2, (), Fraction(1, 2)),
}
for label, w in cases.items():
    rep = classify_shift(w)
    print(f"{label:36s} FH={rep.frequently_hypercyclic.value:4s} chaotic={rep.chaotic.value:4s} "
          f"({rep.chaotic.justification})")
