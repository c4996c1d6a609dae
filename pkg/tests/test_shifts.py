import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from lindyn.classifier import NO, YES
from lindyn.engine import LpVector, apply_T, lp_norm_p
from lindyn.errors import InvalidSystem
from lindyn.shifts import (BILATERAL, SHIFT_RULE, UNILATERAL, ShiftWeights, classify_shift,
                           shift_to_system, system_to_shift)
from lindyn.system import Atom

weights = st.sampled_from([F(1, 2), F(2, 3), F(1), F(3, 2), F(2), F(3)])


def _shift(w, x):
    """Backward shift on a finitely supported sequence {i: x_i}: (B x)_i = w_{i+1} x_{i+1}."""
    return {i - 1: w.weight(i) * v for i, v in x.items()}


def _to_function(system, x):
    """x -> (x_i mu_i^{-1/p}) for p = 1."""
    return LpVector({Atom(0, i): v / system.mu(Atom(0, i)) for i, v in x.items()})


@given(st.lists(weights, max_size=4), weights, st.lists(weights, max_size=3), weights,
       st.dictionaries(st.integers(-6, 6), st.fractions(min_value=-5, max_value=5, max_denominator=5),
                       min_size=1, max_size=4))
@settings(max_examples=80, deadline=None)
def test_bilateral_shift_is_conjugate_to_composition(head, tail, neg, neg_tail, x):
    w = ShiftWeights(BILATERAL, tuple(head), tail, tuple(neg), neg_tail)
    s = shift_to_system(w, 1)
    x = {i: v for i, v in x.items() if v}
    lhs = _to_function(s, {i: v for i, v in _shift(w, x).items() if v})
    rhs = apply_T(s, _to_function(s, x), 1)
    assert lhs == rhs
    # the conjugacy is an isometry
    assert lp_norm_p(s, _to_function(s, x)) == sum(abs(v) for v in x.values())


def test_unilateral_masses_are_weight_products():
    w = ShiftWeights(UNILATERAL, (F(3), F(1, 2)), F(2))
    s = shift_to_system(w, 2)
    prod = F(1)
    for i in range(8):
        prod *= w.weight(i)
        assert s.mu(Atom(0, i)) == prod ** -2


@given(st.lists(weights, max_size=4), weights, st.lists(weights, max_size=3), weights,
       st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_weights_round_trip(head, tail, neg, neg_tail, p):
    w = ShiftWeights(BILATERAL, tuple(head), tail, tuple(neg), neg_tail)
    assert system_to_shift(shift_to_system(w, p)) == w
    u = ShiftWeights(UNILATERAL, tuple(head), tail)
    assert system_to_shift(shift_to_system(u, p)) == u


def test_canonical_form_and_equality():
    assert ShiftWeights(UNILATERAL, (F(2), F(2)), F(2)) == ShiftWeights.const(UNILATERAL, 2)
    assert ShiftWeights(BILATERAL, (), 2).neg_tail == 2
    with pytest.raises(InvalidSystem):
        ShiftWeights(UNILATERAL, (), 1, (F(2),))
    with pytest.raises(InvalidSystem):
        ShiftWeights(BILATERAL, (F(0),), 1)
    with pytest.raises(InvalidSystem):
        shift_to_system(ShiftWeights.const(UNILATERAL, 2), F(3, 2))


def test_unilateral_doubling_shift_is_chaotic():
    rep = classify_shift(ShiftWeights.const(UNILATERAL, 2))
    assert rep.frequently_hypercyclic.value == YES and rep.chaotic.value == YES
    assert rep.chaotic.justification == SHIFT_RULE


def test_unilateral_contraction_is_not():
    rep = classify_shift(ShiftWeights.const(UNILATERAL, F(1, 2)))
    assert rep.frequently_hypercyclic.value == NO and rep.chaotic.value == NO


@pytest.mark.parametrize("c", [F(1, 2), F(1), F(2), F(3)])
def test_bilateral_constant_shifts_are_not_hypercyclic(c):
    rep = classify_shift(ShiftWeights.const(BILATERAL, c))
    assert rep.frequently_hypercyclic.value == NO and rep.chaotic.value == NO


def test_bilateral_doubling_expands_every_vector():
    # ||(2B)^n x|| = 2^n ||x||: no orbit returns near its start, so no dense orbit
    w = ShiftWeights.const(BILATERAL, 2)
    rng = random.Random(0)
    for _ in range(50):
        x = {rng.randint(-10, 10): F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(3)}
        y = dict(x)
        for n in range(1, 20):
            y = _shift(w, y)
            assert sum(abs(v) for v in y.values()) == 2 ** n * sum(abs(v) for v in x.values())


def test_bilateral_with_summable_sides_is_chaotic():
    # w_i = 2 for i >= 1, w_i = 1/2 for i <= 0: masses 2^-|i|
    w = ShiftWeights(BILATERAL, (F(1, 2),), F(2), (), F(1, 2))
    rep = classify_shift(w)
    assert rep.frequently_hypercyclic.value == YES and rep.chaotic.value == YES
    assert rep.to_json()["chaotic"]["verdict"] == YES
