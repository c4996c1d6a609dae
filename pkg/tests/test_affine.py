import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from lindyn.affine import (AffineMap, IntervalSet, cdf, pushforward_quadrature, random_interval,
                           recurrent_set, sc_witness, star_bound_check, star_margin, total_measure)
from lindyn.errors import FixedPointCoversB, InvalidSystem

ends = st.fractions(min_value=-30, max_value=30, max_denominator=50)


def _contains(ball, x, slack=F(0)):
    return ball.lo - slack <= x <= ball.hi + slack


def _mp_fraction(x):
    return F(mpmath.nstr(x, 45, min_fixed=-10 ** 6, max_fixed=10 ** 6))


@given(ends, ends)
@settings(max_examples=60, deadline=None)
def test_interval_measure_matches_quadrature(x, y):
    lo, hi = min(x, y), max(x, y)
    if lo == hi:
        hi += F(1, 7)
    got = IntervalSet([(lo, hi)]).measure()
    truth = _mp_fraction(oracles.laplace_mass(lo, hi))
    assert _contains(got, truth, F(1, 10 ** 40))


def test_total_mass_and_cdf():
    assert total_measure() == 1
    assert cdf(0).value().lo <= F(1, 2) <= cdf(0).value().hi


def test_parse_union():
    s = IntervalSet.parse("[0,1] u [3/2, 2]")
    assert s.lebesgue() == F(3, 2)
    assert s.hull() == (0, 2)


@given(st.sampled_from([F(1, 2), F(-1, 3), F(1), F(-1), F(3, 4)]),
       st.fractions(min_value=-3, max_value=3, max_denominator=4), ends, ends)
@settings(max_examples=60, deadline=None)
def test_margin_matches_independent_quadrature(a, b, x, y):
    if a == 1 and b == 0:
        b = F(1)
    f = AffineMap(a, b)
    lo, hi = min(x, y), max(x, y) + F(1, 3)
    (plo, phi_), = f.image(IntervalSet([(lo, hi)])).intervals
    with mpmath.workdps(50):
        truth = oracles.laplace_mass(plo, phi_) - mpmath.mpf(abs(a.numerator)) / abs(a.denominator) \
            * mpmath.exp(-mpmath.mpf(abs(b.numerator)) / b.denominator) * oracles.laplace_mass(lo, hi)
    m = star_margin(f, IntervalSet([(lo, hi)])).value()
    assert _contains(m, _mp_fraction(truth), F(1, 10 ** 35))
    assert m.hi >= 0


def test_pushforward_quadrature_cross_check():
    f = AffineMap(F(1, 2), F(1))
    J = IntervalSet([(F(-2), F(3))])
    m = f.image(J).measure()
    assert abs(pushforward_quadrature(f, J) - float(m.mid)) < 1e-9


def test_star_bound_is_attained_by_translations():
    # for a translation the ratio on [t, t + 1] with t >= |b| tends to e^{-|b|} exactly
    f = AffineMap(1, 2)
    far = IntervalSet([(F(10), F(11))])
    rep = star_bound_check(f, intervals=[far])
    assert rep.violations == 0 and rep.exact_equalities == 1


def test_star_check_is_reproducible():
    f = AffineMap(F(2, 3), F(1, 5))
    a = star_bound_check(f, trials=50, seed=3)
    b = star_bound_check(f, trials=50, seed=3)
    assert a == b and a.violations == 0


def test_translation_witness():
    w = sc_witness(AffineMap(1, 1), IntervalSet([(F(0), F(1))]))
    assert w.delta is None and w.B_prime == IntervalSet([(F(0), F(1))])
    assert _contains(w.closed_form, F(1))
    assert w.head.lo <= 1 <= w.total_upper
    assert w.total_upper - 1 < F(1, 10 ** 12)


def test_contraction_witness_on_a_dyadic_block():
    w = sc_witness(AffineMap(F(1, 2), 0), IntervalSet([(F(1), F(2))]))
    # the images 2^n [1, 2] tile (0, oo), of mass 1/2
    assert w.head.lo <= F(1, 2) <= w.total_upper
    assert F(1, 2) - w.head.hi < F(1, 10 ** 9)


def test_contraction_witness_removes_a_neighbourhood():
    w = sc_witness(AffineMap(F(1, 2), 0), IntervalSet([(F(-1), F(2))]))
    assert w.delta == F(1, 256)
    assert w.B_prime == IntervalSet([(F(-1), F(-1, 256)), (F(1, 256), F(2))])
    assert w.removed.hi < F(1, 200)
    # dyadic dilates cover (0, oo) nine times and (-oo, 0) eight times
    assert w.head.lo <= F(17, 2) <= w.total_upper
    assert F(17, 2) - w.head.hi < F(1, 10 ** 9)
    sums = [s.mid for s in w.head_sums]
    assert sums == sorted(sums)


def test_witness_rejections():
    with pytest.raises(InvalidSystem):
        sc_witness(AffineMap(-1, 0), IntervalSet([(F(0), F(1))]))
    with pytest.raises(InvalidSystem):
        sc_witness(AffineMap(F(1, 2), 0), IntervalSet([(F(1), F(1))]))
    with pytest.raises(InvalidSystem):
        AffineMap(1, 0)
    with pytest.raises(InvalidSystem):
        AffineMap(2, 0)
    with pytest.raises(FixedPointCoversB):
        sc_witness(AffineMap(F(1, 2), 0), IntervalSet([(F(-1, 1000), F(1, 1000))]))


def test_recurrent_sets():
    assert recurrent_set(AffineMap(1, 3)) == ()
    assert recurrent_set(AffineMap(-1, 3)) == "R"
    assert recurrent_set(AffineMap(F(1, 2), 3)) == (6,)


def test_random_intervals_are_proper():
    rng = random.Random(1)
    for _ in range(100):
        (lo, hi), = random_interval(rng).intervals
        assert lo < hi
