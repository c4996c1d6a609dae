"""The odometer: conservative, yet with plenty of periodic points.

Digits live in Z_{2j} at odd places and Z_2 at even places; the map adds one
with carry.  Every cylinder indicator is periodic with the product of the first
radices as period, and every cylinder returns to itself.
"""
from lindyn.odometer import (CylinderSet, conservativity_evidence, cylinder_measure,
                             cylinders_at_depth, image_ratio_bounds, period,
                             periodic_point_cylinder)

for d in range(1, 6):
    print(f"depth {d}: N = {period(d)}, total mass {sum(cylinder_measure(c) for c in cylinders_at_depth(d))}")

c = CylinderSet([(1, 0, 4)])
pp = periodic_point_cylinder(c)
print("least period of chi_[1,0,4]:", pp.period)
ev = conservativity_evidence(c)
print(f"first return after {ev.n} steps, overlap mass {ev.measure}")
for d in range(1, 5):
    lo, hi = image_ratio_bounds(d)
    print(f"  mu(fC)/mu(C) over depth-{d} cylinders lies in [{float(lo):.4g}, {float(hi):.4g}]")
