"""Building a frequently hypercyclic vector by hand.

On the line with mu(n) = 2^-|n| we place translates of the first members of a
dense family on disjoint, well separated sets of positive density, then count
how often the orbit comes back near the first member.
"""
from fractions import Fraction

from lindyn import Geometric, hitting_density, single_line
from lindyn.fhc import FrequencySchedule, check_schedule, construct_fh_vector

line = single_line(Geometric(1, Fraction(1, 2)))
sched = FrequencySchedule(3, 3)
rep = check_schedule(sched, 10 ** 5)
print("slots disjoint:", rep.disjoint, " separated:", rep.separated)
for k, emp, designed in rep.densities:
    print(f"  slot {k}: density {emp:.5f} (designed {designed:.5f})")

res = construct_fh_vector(line, sched, 10 ** 5)
print("support size:", len(res.vector), " truncation error below 2^-%d" % (res.tail_bound.denominator.bit_length() - 1))
print("members:", [repr(m) for m in res.members])
curve = hitting_density(line, res.vector, res.members[0], Fraction(1, 10), 10 ** 5, exact=False)
for M in (10 ** 3, 10 ** 4, 10 ** 5):
    print(f"  share of n <= {M} with ||T^n x - y_1|| < 0.1: {curve.density(M):.4f}")
print("lower estimate:", round(curve.lower_estimate, 4), " half the designed density:", float(sched.density(1)) / 2)
