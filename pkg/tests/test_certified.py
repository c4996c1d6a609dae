from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from lindyn.certified import (Ball, EXP_FLOOR, exp, fmt, frac, log, power, root, certainly_lt,
                              rsum)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=1000)


def _true(x, dps=60):
    with mpmath.workdps(dps):
        return mpmath.mpf(x.numerator) / x.denominator


@given(rationals)
@settings(max_examples=200, deadline=None)
def test_exp_encloses_high_precision_value(x):
    b = exp(x)
    with mpmath.workdps(80):
        truth = mpmath.exp(_true(x, 80))
        assert mpmath.mpf(b.lo.numerator) / b.lo.denominator <= truth
        assert truth <= mpmath.mpf(b.hi.numerator) / b.hi.denominator
    assert b.rad < abs(b.mid) * Fraction(1, 2 ** 100) + Fraction(1, 2 ** 200)


def test_exp_far_underflow_is_clamped_soundly():
    b = exp(Fraction(-10 ** 9))
    assert b.lo == 0 and b.hi == Fraction(1, 2 ** EXP_FLOOR)


@given(rationals, rationals)
@settings(max_examples=200, deadline=None)
def test_ball_arithmetic_contains_exact_result(x, y):
    bx, by = exp(x), exp(y)
    with mpmath.workdps(60):
        ex, ey = mpmath.exp(_true(x)), mpmath.exp(_true(y))
        cases = ((bx + by, ex + ey), (bx * by, ex * ey), (bx - by, ex - ey))
        for ball, truth in cases:
            t = Fraction(mpmath.nstr(truth, 55, min_fixed=-1000, max_fixed=1000))
            slack = Fraction(1, 10 ** 45) * (1 + abs(t))
            assert ball.lo - slack <= t <= ball.hi + slack


def test_exact_roots_stay_rational():
    assert power(Fraction(9, 4), Fraction(1, 2)) == Fraction(3, 2)
    assert root(Fraction(27, 8), 3) == Fraction(3, 2)
    assert isinstance(root(Fraction(2), 2), Ball)


def test_log_of_exp_round_trip_contains_argument():
    b = log(exp(Fraction(3, 7)))
    assert b.lo <= Fraction(3, 7) <= b.hi


def test_floats_are_refused():
    with pytest.raises(TypeError):
        frac(0.1)


def test_comparisons_need_certainty():
    assert certainly_lt(exp(Fraction(-1)), Fraction(1, 2))
    assert not certainly_lt(Ball.from_bounds(0, 1), Fraction(1, 2))


def test_fmt_exact_and_huge():
    assert fmt(Fraction(3, 7)) == "3/7"
    assert fmt(Fraction(1, 2 ** 20000)).startswith("~2.5123880576987")


def test_rsum_mixes_exact_and_balls():
    s = rsum([Fraction(1, 3), exp(Fraction(0))])
    assert s.lo <= Fraction(4, 3) <= s.hi
