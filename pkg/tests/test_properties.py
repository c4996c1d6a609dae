"""Invariants checked on randomly generated inputs."""
import json
import random
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from lindyn.affine import AffineMap, IntervalSet, star_margin
from lindyn.certified import upper
from lindyn.classifier import classify
from lindyn.conditions import check_dn_ratio, compute_dn
from lindyn.engine import LpVector, apply_S, apply_T, lp_norm_p
from lindyn.fhc import FrequencySchedule, check_schedule
from lindyn.odometer import CylinderSet, StepFunction, cylinders_at_depth, image_ratio_bounds
from lindyn.random_systems import random_system
from lindyn.system import CYCLE, Atom, AtomicSystem

seeds = st.integers(0, 2 ** 32 - 1)


def _vector(rng, system):
    items = {}
    for _ in range(rng.randint(1, 4)):
        k = rng.randrange(len(system.orbits))
        o = system.orbits[k]
        idx = rng.randrange(o.length) if o.kind == CYCLE else rng.randint(-20, 20)
        items[Atom(k, idx)] = F(rng.randint(-9, 9), rng.randint(1, 9))
    return LpVector(items)


@given(seeds, st.integers(0, 60))
@settings(max_examples=150, deadline=None)
def test_S_is_a_two_sided_inverse(seed, n):
    rng = random.Random(seed)
    s = random_system(rng)
    phi = _vector(rng, s)
    assert apply_T(s, apply_S(s, phi, n), n) == phi
    assert apply_S(s, apply_T(s, phi, n), n) == phi


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_T_is_bounded_by_the_star_constant(seed):
    rng = random.Random(seed)
    s = random_system(rng, p=rng.randint(1, 3))
    phi = _vector(rng, s)
    c = s.star_constant()
    assert upper(lp_norm_p(s, apply_T(s, phi, 1))) <= upper(c * lp_norm_p(s, phi))


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_dn_starts_at_one_and_decays_at_most_by_c(seed):
    rng = random.Random(seed)
    s = random_system(rng, cycles=False)
    dn = compute_dn(s, [Atom(0, 0)])
    assert dn.value(0) == 1
    assert check_dn_ratio(dn, 30)


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_classification_respects_the_implication_rules(seed):
    rep = classify(random_system(random.Random(seed)))
    assert rep.violations() == []
    if rep.sc.value == "holds":
        assert rep.dissipative.value == "yes"


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_system_json_round_trip(seed):
    s = random_system(random.Random(seed))
    t = AtomicSystem.from_json(json.loads(json.dumps(s.to_json())))
    assert all(t.mu(a) == s.mu(a) for a in s.atoms_in_window(6))


@given(st.integers(1, 6), st.integers(1, 8))
@settings(max_examples=40, deadline=None)
def test_schedules_are_disjoint_and_separated_when_stretched(K, extra):
    rep = check_schedule(FrequencySchedule(K, K + extra - 1), 20000)
    assert rep.disjoint and rep.separated


@given(st.integers(-60, 60), st.integers(-60, 60), st.integers(1, 4), st.data())
@settings(max_examples=80, deadline=None)
def test_odometer_composition_is_additive(m, n, depth, data):
    cyls = list(cylinders_at_depth(depth))
    c = data.draw(st.sampled_from(cyls))
    g = StepFunction.indicator(CylinderSet([c]))
    assert g.compose(m).compose(n) == g.compose(m + n)
    s = CylinderSet([c])
    assert s.image(m).image(n) == s.image(m + n)


@given(st.integers(1, 4), st.data())
@settings(max_examples=40, deadline=None)
def test_odometer_image_ratios_within_bounds(depth, data):
    lo, hi = image_ratio_bounds(depth)
    c = data.draw(st.sampled_from(list(cylinders_at_depth(depth))))
    s = CylinderSet([c])
    assert lo <= s.image(1).measure() / s.measure() <= hi


@given(st.sampled_from([F(1, 2), F(-1, 3), F(1), F(-1), F(9, 10)]),
       st.fractions(min_value=-4, max_value=4, max_denominator=6),
       st.fractions(min_value=-15, max_value=15, max_denominator=20),
       st.fractions(min_value=F(1, 20), max_value=10, max_denominator=20))
@settings(max_examples=100, deadline=None)
def test_affine_star_margin_is_nonnegative(a, b, lo, width):
    if a == 1 and b == 0:
        b = F(1, 2)
    m = star_margin(AffineMap(a, b), IntervalSet([(lo, lo + width)]))
    assert m.is_zero or m.value().hi >= 0
    assert m.sign() >= 0
