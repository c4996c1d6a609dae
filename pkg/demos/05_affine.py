"""Affine maps of the line against the measure exp(-|t|)/2.

The image of any interval keeps at least |a| e^-|b| of its mass, checked here
with directed rounding on random intervals.  For the translation t -> t + 1 the
orbit of [0, 1] tiles the line, so its orbit sum is exactly 1.
"""
from fractions import Fraction

from lindyn.affine import AffineMap, IntervalSet, sc_witness, star_bound_check

for a, b in [(1, 1), (Fraction(1, 2), 0), (Fraction(-3, 4), 2)]:
    rep = star_bound_check(AffineMap(a, b), trials=1000)
    print(f"a={a}, b={b}: {rep.violations} violations in {rep.trials} intervals, "
          f"smallest ratio {rep.min_ratio:.4f} vs bound {rep.bound:.4f}")

w = sc_witness(AffineMap(1, 1), IntervalSet([(Fraction(0), Fraction(1))]))
print(f"translation: head over |n| <= {w.N} = {float(w.head.mid):.15f}, tail <= {float(w.tail.hi):.2e}")
print(f"closed form = {float(w.closed_form.mid):.15f}")

w = sc_witness(AffineMap(Fraction(1, 2), 0), IntervalSet([(Fraction(-1), Fraction(2))]))
print(f"contraction: removed (-{w.delta}, {w.delta}) around the fixed point, "
      f"mass lost <= {float(w.removed.hi):.3g}, orbit sum of the rest <= {float(w.total_upper):.9f}")
