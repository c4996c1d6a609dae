from fractions import Fraction as F

import numpy as np
import pytest

from lindyn.engine import LpVector, apply_T, lp_norm_p
from lindyn.errors import OpenProblem, SCRequired
from lindyn.fhc import (DenseFamily, FrequencySchedule, check_schedule, construct_fh_vector,
                        converse_check, empirical_fh_check, schedule_frequencies,
                        support_collisions, verify_unconditional)
from lindyn.system import Atom, AtomicSystem, grid_atom, grid_system, single_line, z_line
from lindyn.weights import Geometric, constant

LINE = single_line(Geometric(1, F(1, 2)))


@pytest.mark.parametrize("K,stretch", [(1, 1), (2, 3), (3, 3), (4, 4)])
def test_schedule_against_brute_force(K, stretch):
    s = FrequencySchedule(K, stretch)
    H = 5000
    for k in range(1, K + 1):
        brute = [n for n in range(1, H + 1)
                 if n % stretch == 0 and (n // stretch) % 4 ** k == 4 ** (k - 1)]
        assert list(s.slot(k, H)) == brute
        assert all(s.contains(k, n) for n in brute)
        assert all(s.slot_of(n) == k for n in brute)
    rep = check_schedule(s, H)
    assert rep.disjoint
    assert rep.separated == (stretch >= K or K == 1)


def test_default_stretch_separates():
    assert check_schedule(schedule_frequencies(5), 10 ** 5).separated


def test_dense_family_enumerates_without_repeats():
    fam = DenseFamily(LINE)
    members = fam.members(200)
    assert len(set(members)) == 200
    assert members[0] == LpVector({Atom(0, 0): 1}) or fam.level_of(1) == 1
    assert fam.contains(LpVector({Atom(0, 9): F(-7, 3)}))
    assert [fam.level_of(k) for k in (1, 200)] == sorted([fam.level_of(k) for k in (1, 200)])


def test_construction_reproduces_members_on_their_slots():
    sched = FrequencySchedule(2, 3)
    res = construct_fh_vector(LINE, sched, 2000)
    # on a slot time the translate sits exactly on the member's support
    for k, y in enumerate(res.members, 1):
        n = int(sched.slot(k, 1000)[0])
        shifted = apply_T(LINE, res.vector, n)
        assert all(shifted[a] == v for a, v in y.items())
    assert support_collisions(LINE, sched, res.members, 2000) == {"within_slot": 0, "across_slots": 0}
    assert 0 < res.tail_bound < F(1, 2 ** 1000)


def test_construction_needs_summability():
    with pytest.raises(SCRequired):
        construct_fh_vector(single_line(constant(1)), FrequencySchedule(1, 1), 100)


def test_unconditional_series_on_the_grid():
    g = grid_system()
    cert = verify_unconditional(g, LpVector.indicator(grid_atom(1, 1)))
    # atoms before index 1 carry 1 + 1/2 + ... = 2, atoms after it 1/4 + 1/8 + ... = 1/2
    assert cert.forward_sum == 2 and cert.backward_sum == F(1, 2)
    assert not cert.orlicz


def test_converse_is_gated_below_p_two():
    with pytest.raises(OpenProblem):
        converse_check(LINE)
    assert converse_check(AtomicSystem(LINE.orbits, 2))


def test_empirical_lemma_sum_stays_below_two():
    sched = FrequencySchedule(3, 3)
    res = construct_fh_vector(LINE, sched, 20000)
    rep = empirical_fh_check(LINE, res.vector, [res.members[0]], F(1, 10), 20000)
    assert rep.lemma_ok and rep.lemma_max_sum < 2
    assert rep.curves[0].lower_estimate > 0


def test_unconditional_series_at_the_grid_origin():
    cert = verify_unconditional(grid_system(), LpVector.indicator(grid_atom(0, 0)))
    # sum over n >= 1 of 2^-n on either side
    assert cert.forward_sum == 1 and cert.backward_sum == 1
