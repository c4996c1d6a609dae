"""A grid of lines where everything works.

Z x Z with f(i, j) = (i, j + 1) and mu(i, j) = 2^-|j|.  Every orbit carries
mass 1 + 2(1/2 + 1/4 + ...) = 3, so orbit sums are finite and the classifier
answers yes to chaos, frequent hypercyclicity and mixing.
"""
from lindyn import classify, grid_atom, grid_system
from lindyn.conditions import compute_dn, orbit_sum, sc_window_sum

g = grid_system()
print("orbit sum of (0, 0):", orbit_sum(g, grid_atom(0, 0)))
for L in (1, 2, 5):
    print(f"mass of all orbits through [-{L},{L}]^2: {sc_window_sum(g, L)}  (= 3 * {2 * L + 1}^2)")

dn = compute_dn(g, [grid_atom(0, 0)])
print("d_n for n = -3..3:", [str(dn.value(n)) for n in range(-3, 4)])

rep = classify(g)
for name in rep.VERDICT_FIELDS:
    v = getattr(rep, name)
    print(f"  {name:22s} {v.value:10s} {v.justification}")
