from fractions import Fraction as F

import pytest

from lindyn.classifier import (CYCLE_TAG, DISTORTION, ERGODIC, NECESSARY_FH, NO, SC_FINITE,
                               SC_GENERAL, UNKNOWN, YES, classify, classify_inverse_pair)
from lindyn.errors import NotInvertibleSystem, UnboundedRatio
from lindyn.system import FORWARD, Atom, AtomicSystem, cycle, grid_system, single_line, z_line
from lindyn.weights import Gaussian, Geometric, Power, Table, TwoSided, constant


def test_grid_is_everything():
    rep = classify(grid_system())
    assert rep.frequently_hypercyclic == rep.chaotic
    assert rep.chaotic.value == YES and rep.chaotic.justification == SC_GENERAL
    assert rep.mu_finite.value == NO
    assert rep.bounded_distortion.value == "n/a"
    assert rep.violations() == []


def test_finite_geometric_line():
    rep = classify(single_line(Geometric(1, F(1, 3))))
    assert rep.frequently_hypercyclic.justification == SC_FINITE
    assert rep.mu_finite.value == YES and rep.ergodic_dissipative.value == YES
    assert rep.star_constant == "3"


def test_cycles_are_never_hypercyclic():
    rep = classify(AtomicSystem((cycle([1, 2]), z_line(Geometric(1, F(1, 2))))))
    assert rep.dissipative.value == NO
    assert rep.frequently_hypercyclic.value == NO and rep.frequently_hypercyclic.justification == CYCLE_TAG


def test_flat_line_goes_through_ergodic_rule():
    rep = classify(single_line(constant(1)))
    assert rep.chaotic.value == NO
    assert rep.frequently_hypercyclic.justification == ERGODIC
    assert rep.necessary_fh.value == "fails"


def test_two_flat_lines_use_distortion():
    rep = classify(AtomicSystem((z_line(constant(1)), z_line(constant(2)))))
    assert rep.bounded_distortion.value == "1"
    assert rep.frequently_hypercyclic.justification == DISTORTION


def test_mixed_rates_without_a_rule_stay_unknown():
    # one summable line and one power line with divergent sum: distortion unbounded
    s = AtomicSystem((z_line(Geometric(1, F(1, 2))), z_line(Power(1, 1))))
    rep = classify(s)
    assert rep.sc.value == "fails"
    assert rep.frequently_hypercyclic.value in (NO, UNKNOWN)
    if rep.frequently_hypercyclic.value == NO:
        assert rep.frequently_hypercyclic.justification == NECESSARY_FH
    assert rep.violations() == []


def test_forward_systems_use_the_forward_rule():
    rep = classify(single_line(constant(1), mode=FORWARD))
    assert rep.frequently_hypercyclic.value == NO
    assert rep.dissipative.value == "n/a"


def test_non_systems_are_refused():
    with pytest.raises(UnboundedRatio):
        classify(single_line(Gaussian(1, F(1, 2))))


def test_inverse_pair_of_an_asymmetric_line():
    s = single_line(TwoSided(1, F(1, 2), 1, F(1, 3)))
    pair = classify_inverse_pair(s)
    assert pair.agree_fh and pair.agree_chaotic
    assert pair.forward.inverse_consistency.value == "agree"
    with pytest.raises(NotInvertibleSystem):
        classify_inverse_pair(single_line(constant(1), mode=FORWARD))


def test_report_json_has_every_field():
    d = classify(grid_system()).to_json()
    for k in ("dissipative", "sc", "mu_finite", "bounded_distortion", "ergodic_dissipative",
              "chaotic", "frequently_hypercyclic", "topologically_mixing", "star_constant"):
        assert k in d
