from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from lindyn.errors import InvalidSystem, OutOfDomain, UnboundedRatio
from lindyn.weights import (Divergent, Gaussian, Geometric, Power, ProductForm, Reversed,
                            Shifted, Summable, Table, TwoSided, certify_summability,
                            constant, lattice_tail, partial_sum, profile_from_json,
                            ratio_sup, sum_beyond, table)

small_rates = st.sampled_from([F(1, 2), F(1, 3), F(2, 3), F(3, 4), F(1, 5)])
coefs = st.fractions(min_value=F(1, 8), max_value=8, max_denominator=8)


@given(coefs, small_rates)
def test_geometric_total_matches_closed_form(a, r):
    res = certify_summability(Geometric(a, r))
    assert isinstance(res, Summable)
    assert res.total == oracles.geometric_line_total(a, r)


@pytest.mark.parametrize("s", [2, 3, F(5, 2)])
def test_power_total_encloses_zeta_value(s):
    res = certify_summability(Power(1, s))
    assert isinstance(res, Summable)
    truth = oracles.power_line_total(1, s)
    lo, hi = res.total.lo, res.total.hi
    with mpmath.workdps(40):
        assert mpmath.mpf(lo.numerator) / lo.denominator <= truth <= mpmath.mpf(hi.numerator) / hi.denominator


@pytest.mark.parametrize("profile", [constant(1), Power(1, 1), TwoSided(1, F(1, 2), 1, 2),
                                     Geometric(1, F(5, 4))])
def test_non_summable_profiles_are_divergent(profile):
    assert isinstance(certify_summability(profile), Divergent)


def test_two_sided_side_sum_matches_direct_sum():
    p = TwoSided(F(3, 2), F(1, 3), F(1, 5), F(2, 3))
    assert partial_sum(p, -7, 9) == oracles.direct_sum(p.weight_at, -7, 9)


def test_long_heads_are_enclosed():
    p = Power(1, 2)
    exact = sum(F(1, (1 + abs(n)) ** 2) for n in range(-300, 301))
    b = partial_sum(p, -300, 300)
    assert b.lo <= exact <= b.hi


def test_table_with_fallback_total():
    t = table({0: 5, 1: 2}, Geometric(1, F(1, 2)))
    res = certify_summability(t)
    assert res.total == 3 - 1 - F(1, 2) + 5 + 2


def test_finite_table_domain():
    t = table({0: 1, 2: 3})
    with pytest.raises(OutOfDomain):
        t.weight_at(1)
    assert certify_summability(t).total == 4


def test_product_form_matches_definition():
    p = ProductForm((F(3), F(1, 2)), F(2), 2)
    v = [F(3), F(1, 2), F(2), F(2), F(2)]
    for n in range(5):
        prod = F(1)
        for x in v[:n + 1]:
            prod *= x
        assert p.weight_at(n) == prod ** -2
    with pytest.raises(OutOfDomain):
        p.weight_at(-1)


def test_shifted_and_reversed_profiles():
    g = TwoSided(1, F(1, 2), 2, F(1, 3))
    s = Shifted(g, 3, F(1, 7))
    r = Reversed(g)
    for n in range(-6, 7):
        assert s.weight_at(n) == g.weight_at(n + 3) / 7
        assert r.weight_at(n) == g.weight_at(-n)


@given(st.integers(-20, 20), st.sampled_from([1, -1]))
@settings(max_examples=60, deadline=None)
def test_sum_beyond_matches_long_direct_sum(i, direction):
    g = TwoSided(1, F(1, 2), F(1, 3), F(2, 3))
    got = sum_beyond(g, i, direction)
    rng = range(i + 1, i + 400) if direction == 1 else range(i - 400, i)
    approx = sum(float(g.weight_at(n)) for n in rng)
    assert abs(float(got) - approx) < 1e-12


@given(st.integers(-5, 5))
@settings(max_examples=30, deadline=None)
def test_lattice_tail_matches_direct_sum(i):
    g = Geometric(1, F(1, 2))
    P = 11
    got = lattice_tail(g, i, P)
    approx = sum(float(g.weight_at(i + k * P)) for k in range(-60, 61) if k)
    assert abs(float(got) - approx) < 1e-15


def test_ratio_sup_of_geometric_and_unbounded_gaussian():
    val, _ = ratio_sup(Geometric(1, F(1, 3)))
    assert val == 3
    with pytest.raises(UnboundedRatio) as exc:
        ratio_sup(Gaussian(1, F(1, 2)))
    assert exc.value.witness


def test_invalid_parameters():
    with pytest.raises(InvalidSystem):
        Geometric(0, F(1, 2))
    with pytest.raises(InvalidSystem):
        Power(1, -1)
    with pytest.raises(InvalidSystem):
        ProductForm((), F(2), F(1, 2))


profiles = st.one_of(
    st.builds(Geometric, coefs, small_rates),
    st.builds(TwoSided, coefs, small_rates, coefs, small_rates),
    st.builds(Power, coefs, st.integers(0, 4)),
)


@given(profiles)
@settings(max_examples=80, deadline=None)
def test_descriptor_round_trip(p):
    q = profile_from_json(p.descriptor())
    for n in range(-5, 6):
        assert q.weight_at(n) == p.weight_at(n)
