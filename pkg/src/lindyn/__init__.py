"""Composition operators on atomic L^p spaces.

Exact (rational) and certified (interval) checks of the summability condition,
bounded distortion and the d_n necessary condition; a classifier built on them;
an explicit frequently hypercyclic vector construction; and three worked
families (the odometer, affine maps of the line, weighted shifts).
"""
from .errors import LindynError
from .system import Atom, AtomicSystem, cycle, grid_atom, grid_system, single_line, z_line
from .weights import Geometric, Power, TwoSided, constant, profile_from_json
from .engine import LpVector, apply_S, apply_T, hitting_density
from .conditions import check_bounded_distortion, check_necessary_fh, check_sc, compute_dn
from .classifier import classify, classify_inverse_pair

__all__ = [
    "LindynError", "Atom", "AtomicSystem", "cycle", "grid_atom", "grid_system", "single_line",
    "z_line", "Geometric", "Power", "TwoSided", "constant", "profile_from_json", "LpVector",
    "apply_S", "apply_T", "hitting_density", "check_bounded_distortion", "check_necessary_fh",
    "check_sc", "compute_dn", "classify", "classify_inverse_pair",
]
