"""Defaults for every command in one place.

Values can be overridden by a JSON file named in ``LINDYN_CONFIG`` and then by
command-line flags.  Rationals are written as ``"num/den"`` strings.
"""
from __future__ import annotations

import json
import os
from fractions import Fraction

ENV_VAR = "LINDYN_CONFIG"

DEFAULTS = {
    "window": 1000,          # atoms per side scanned by window checks
    "horizon": 100000,       # orbit length for density curves and constructions
    "eps_ladder": ["1/2", "1/4", "1/10"],
    "eps": "1/10",
    "seed": 0,
    "dn_range": 64,          # d_n rows written for |n| <= dn_range
    "slots": 3,
    "stretch": None,         # schedule stretch; None means max(slots, 3)
    "star_trials": 1000,
    "sc_eps": "1/100",
    "br_horizon": 10000,
    "cylinder_max_depth": 6,
}


class ConfigError(ValueError):
    pass


def load_config(env=None) -> dict:
    """Defaults merged with the file named by ``LINDYN_CONFIG`` (if any)."""
    env = os.environ if env is None else env
    cfg = dict(DEFAULTS)
    path = env.get(ENV_VAR)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                extra = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read {ENV_VAR}={path}: {exc}") from None
        unknown = set(extra) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys in {path}: {sorted(unknown)}")
        cfg.update(extra)
    return cfg


def rational(x) -> Fraction:
    if isinstance(x, float):
        raise ConfigError(f"write {x!r} as a 'num/den' string to keep it exact")
    try:
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a rational number: {x!r}") from None
