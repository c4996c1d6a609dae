import math
from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest

from lindyn.conditions import (Fails, FailsNecessary, Holds, Passes, br_max_beta_progression,
                               check_br_lemma, check_bounded_distortion, check_dn_ratio,
                               check_necessary_fh, check_sc, compute_dn, orbit_sum, sc_window_sum)
from lindyn.errors import NotDissipative, NotGenerating, NotWandering, RatioHypothesisViolated
from lindyn.system import Atom, AtomicSystem, cycle, grid_atom, grid_system, single_line, z_line
from lindyn.weights import Gaussian, Geometric, Power, Table, TwoSided, constant


def test_grid_orbit_sum_is_three():
    g = grid_system()
    assert orbit_sum(g, grid_atom(0, 0)) == 3
    assert orbit_sum(g, grid_atom(-5, 9)) == 3
    assert isinstance(check_sc(g), Holds)


@pytest.mark.parametrize("L", [1, 2, 5])
def test_window_sum_counts_every_atom_once(L):
    g = grid_system()
    # brute force: each atom (i, j) in the window contributes sum_n 2^-|j+n|
    direct = sum(sum(F(1, 2 ** abs(j + n)) for n in range(-200, 201))
                 for i, j in product(range(-L, L + 1), repeat=2))
    got = sc_window_sum(g, L)
    assert got == 3 * (2 * L + 1) ** 2
    assert abs(float(got - direct)) < 1e-40 * (2 * L + 1) ** 2 + 1e-50


def test_sc_fails_on_cycles_and_flat_lines():
    assert isinstance(check_sc(AtomicSystem((cycle([1, 2]),))), Fails)
    res = check_sc(single_line(constant(1)))
    assert isinstance(res, Fails) and "diverges" in res.reason


def test_grid_dn_is_two_sided_geometric():
    dn = compute_dn(grid_system(), [grid_atom(0, 0)])
    for n in range(-30, 31):
        assert dn.value(n) == F(1, 2 ** abs(n))
    assert isinstance(check_necessary_fh(dn), Passes)
    assert check_dn_ratio(dn, 100)


def test_dn_of_several_atoms_is_the_minimum():
    s = AtomicSystem((z_line(Geometric(1, F(1, 2))), z_line(TwoSided(1, F(1, 3), 1, F(3, 4)))))
    dn = compute_dn(s, [Atom(0, 0), Atom(1, 0)])
    for n in range(-10, 11):
        assert dn.value(n) == min(F(1, 2) ** abs(n), (F(1, 3) if n > 0 else F(3, 4)) ** abs(n))


def test_flat_line_fails_necessary_condition():
    dn = compute_dn(single_line(constant(1)), [Atom(0, 0)])
    assert isinstance(check_necessary_fh(dn), FailsNecessary)
    assert "n,d_n,exact" in dn.to_csv(-2, 2)


def test_wandering_checks():
    s = AtomicSystem((z_line(constant(1)), cycle([1])))
    with pytest.raises(NotWandering):
        compute_dn(s, [Atom(0, 0), Atom(0, 3)])
    with pytest.raises(NotWandering):
        compute_dn(s, [Atom(1, 0)])
    with pytest.raises(NotWandering):
        compute_dn(s, [])


def _distortion_oracle(profiles, lo, hi):
    """K from the definition: sup_n max_x max(r_x / R, R / r_x) with Fractions."""
    mus = [p(0) for p in profiles]
    tot = sum(mus)
    K = F(0)
    for n in range(lo, hi + 1):
        rs = [p(n) / p(0) for p in profiles]
        R = sum(m * r for m, r in zip(mus, rs)) / tot
        K = max(K, *(max(r / R, R / r) for r in rs))
    return K


def test_distortion_of_a_perturbed_pair_matches_definition():
    base = Geometric(1, F(1, 2))
    bumped = Table(((0, F(2)),), base)
    s = AtomicSystem((z_line(base), z_line(bumped)))
    cert = check_bounded_distortion(s)
    assert cert.exact and cert.bounded
    assert cert.K == _distortion_oracle([base.weight_at, bumped.weight_at], -40, 40) == F(3, 2)


def test_distortion_is_unbounded_for_different_rates():
    s = AtomicSystem((z_line(Geometric(1, F(1, 2))), z_line(Geometric(1, F(1, 3)))))
    cert = check_bounded_distortion(s)
    assert not cert.bounded and cert.K == math.inf
    ratios = [q for _, q in cert.witnesses]
    assert ratios == sorted(ratios) and ratios[-1] > ratios[0]


def test_power_law_distortion_is_an_upper_bound():
    s = AtomicSystem((z_line(Power(1, 2)), z_line(Power(3, 2))))
    cert = check_bounded_distortion(s, window=50)
    assert not cert.exact
    assert cert.K >= _distortion_oracle([Power(1, 2).weight_at, Power(3, 2).weight_at], -50, 50)


def test_distortion_preconditions():
    with pytest.raises(NotDissipative):
        check_bounded_distortion(AtomicSystem((cycle([1]),)))
    with pytest.raises(NotGenerating):
        check_bounded_distortion(grid_system())
    two = AtomicSystem((z_line(constant(1)), z_line(constant(1))))
    with pytest.raises(NotGenerating):
        check_bounded_distortion(two, [Atom(0, 0)])


def _beta_oracle(alpha, members, n):
    return sum(alpha(m - n) for m in members)


def test_br_betas_match_direct_sums():
    geo = Geometric(1, F(1, 2))
    A = [0, 3, 4, 10, 11, 12, 40]
    rep = check_br_lemma(geo, A, 50)
    best = max(float(_beta_oracle(geo.weight_at, A, n)) for n in A)
    assert abs(rep.max_beta - best) < 1e-12
    assert rep.alpha_summable is True


def test_br_progression_matches_fft_path():
    geo = TwoSided(1, F(1, 2), 1, F(2, 3))
    fast = br_max_beta_progression(geo, 3, 1, 3000)
    fft = check_br_lemma(geo, lambda h: np.arange(1, h + 1, 3), 3000).max_beta
    assert abs(fast - fft) < 1e-9


def test_br_ratio_hypothesis():
    with pytest.raises(RatioHypothesisViolated):
        check_br_lemma(Gaussian(1, F(1, 2)), [0, 1], 10)
