"""The measure-preserving shift fails the necessary condition.

With mu constant on Z, d_n(W) = 1 for every n, so sum d_n diverges and no
vector can be frequently hypercyclic.  The classifier reaches the same answer
through the single-line (ergodic) rule; the d_n test agrees.
"""
from lindyn import Atom, classify, compute_dn, check_necessary_fh, constant, single_line

line = single_line(constant(1))
dn = compute_dn(line, [Atom(0, 0)])
print("d_n on -5..5:", [str(dn.value(n)) for n in range(-5, 6)])
print("necessary condition:", type(check_necessary_fh(dn)).__name__)
fh = classify(line).frequently_hypercyclic
print("frequently hypercyclic:", fh.value, "--", fh.justification)
