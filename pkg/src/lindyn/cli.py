"""Command-line front end.

Every command writes a JSON report (stdout unless ``--out``), embeds the run
manifest, and optionally writes CSV data and a small SVG plot.

Exit codes: 0 decided, 2 input error, 3 report contains unknowns,
4 a required certificate could not be produced.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import artifacts
from .certified import fmt, to_float
from .config import ConfigError, load_config, rational
from .errors import LindynError, UndecidedError

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN, EXIT_UNDECIDED = 0, 2, 3, 4
STATUS_EXIT = {"decided": EXIT_OK, "unknown": EXIT_UNKNOWN, "undecided": EXIT_UNDECIDED}


class InputError(Exception):
    pass


# helpers ------------------------------------------------------------------------------------

def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _load_system(path: str):
    from .system import AtomicSystem
    return AtomicSystem.from_json(_load_json(path))


def _load_vector(path: str):
    from .engine import LpVector
    return LpVector.from_json(_load_json(path))


def _parse_atom(text: Optional[str]):
    if text is None:
        return None
    from .system import Atom
    try:
        parts = [int(t) for t in text.split(":")]
    except ValueError:
        raise InputError(f"atom must look like orbit:index[:copy], got {text!r}") from None
    if len(parts) not in (2, 3):
        raise InputError(f"atom must look like orbit:index[:copy], got {text!r}")
    return Atom(*parts)


def _q(text, name="value") -> Fraction:
    try:
        return rational(text)
    except ConfigError:
        raise InputError(f"--{name} must be a rational like 3/2, got {text!r}") from None


def _verdict(v):
    return v.to_json()


# commands -----------------------------------------------------------------------------------
# each returns (status, result dict, manifest kwargs, extra artifacts)

def cmd_classify(args, cfg):
    from .classifier import classify
    system = _load_system(args.system)
    rep = classify(system, _parse_atom(args.W))
    status = "unknown" if rep.has_unknowns else "decided"
    if any(getattr(rep, f).value == "undecided" for f in rep.VERDICT_FIELDS):
        status = "undecided"
    return status, rep.to_json(), {}, {}


def cmd_classify_pair(args, cfg):
    from .classifier import classify_inverse_pair
    pair = classify_inverse_pair(_load_system(args.system))
    res = {"forward": pair.forward.to_json(), "inverse": pair.inverse.to_json(),
           "agree_fh": pair.agree_fh, "agree_chaotic": pair.agree_chaotic,
           "bounded_distortion": pair.bounded_distortion}
    status = "unknown" if pair.forward.has_unknowns or pair.inverse.has_unknowns else "decided"
    return status, res, {}, {}


def cmd_sc(args, cfg):
    from .conditions import Fails, Holds, check_sc, orbit_sum, sc_window_sum
    system = _load_system(args.system)
    res = check_sc(system)
    out = {"status": "holds" if isinstance(res, Holds) else "fails" if isinstance(res, Fails)
           else "undecided"}
    if isinstance(res, Fails):
        out["witness"] = {"atom": list(res.atom), "reason": res.reason}
    elif not isinstance(res, Holds):
        out["reason"] = res.reason
    sums = {}
    for a in system.base_atoms(0):
        try:
            sums[f"{a.orbit}:{a.index}:{a.copy}"] = fmt(orbit_sum(system, a))
        except LindynError as exc:
            sums[f"{a.orbit}:{a.index}:{a.copy}"] = f"diverges ({exc})"
    out["orbit_sums"] = sums
    if isinstance(res, Holds) and args.window is not None:
        out["window"] = args.window
        out["window_bound"] = fmt(sc_window_sum(system, args.window))
    status = "undecided" if out["status"] == "undecided" else "decided"
    return status, out, {}, {}


def cmd_distortion(args, cfg):
    from .conditions import check_bounded_distortion
    system = _load_system(args.system)
    cert = check_bounded_distortion(system, window=args.window or cfg["window"])
    out = {"bounded": cert.bounded, "K": "inf" if not cert.bounded else fmt(cert.K),
           "exact": cert.exact, "W": [list(a) for a in cert.W], "note": cert.note,
           "witnesses": [str(w) for w in cert.witnesses]}
    return "decided", out, {}, {}


def cmd_dn(args, cfg):
    from .conditions import FailsNecessary, Passes, check_necessary_fh, compute_dn, \
        default_wandering_atom
    system = _load_system(args.system)
    W = _parse_atom(args.W) or default_wandering_atom(system)
    seq = compute_dn(system, [W])
    R = args.range if args.range is not None else cfg["dn_range"]
    res = check_necessary_fh(seq)
    out = {"W": list(W), "range": R, "star_constant": fmt(seq.star_c)}
    if isinstance(res, Passes):
        out.update(status="passes", total=fmt(res.total))
    elif isinstance(res, FailsNecessary):
        out.update(status="fails_necessary", witness=res.witness)
    else:
        out.update(status="undecided", reason=res.reason)
    vals = seq.values(-R, R)
    extra = {"csv": seq.to_csv(-R, R),
             "svg": lambda: artifacts.svg_plot({"d_n": [(n, to_float(v)) for n, v in vals.items()]},
                                               f"d_n({W})", logy=True)}
    return ("undecided" if out["status"] == "undecided" else "decided"), out, {}, extra


def cmd_construct_fhc(args, cfg):
    from .conditions import default_wandering_atom
    from .engine import LpVector, hitting_density
    from .fhc import FrequencySchedule, check_schedule, construct_fh_vector
    system = _load_system(args.system)
    K = args.slots if args.slots is not None else cfg["slots"]
    horizon = args.horizon if args.horizon is not None else cfg["horizon"]
    stretch = args.stretch or cfg["stretch"] or max(K, 3)
    sched = FrequencySchedule(K, stretch)
    res = construct_fh_vector(system, sched, horizon)
    eps = _q(args.eps or cfg["eps"], "eps")
    if args.out:
        artifacts.atomic_write(args.out, artifacts.dumps(res.vector.to_json()))
    curve = hitting_density(system, res.vector, res.members[0], eps, horizon, exact=False)
    rep = check_schedule(sched, horizon)
    out = {"slots": K, "stretch": stretch, "horizon": horizon, "support_size": len(res.vector),
           "tail_bound": fmt(res.tail_bound), "members": [m.to_json() for m in res.members],
           "translates": [list(t) for t in res.translates],
           "slot1_designed_density": fmt(sched.density(1)),
           "slot1_lower_density_estimate": curve.lower_estimate,
           "schedule": {"disjoint": rep.disjoint, "separated": rep.separated,
                        "densities": [list(d) for d in rep.densities]},
           "vector_file": args.out, "label": "empirical densities are evidence, not proof"}
    step = max(1, horizon // 2000)
    extra = {"csv": curve.to_csv(step),
             "svg": lambda: artifacts.svg_plot(
                 {"slot 1": [(M, curve.density(M)) for M in range(step, horizon + 1, step)]},
                 "hitting density")}
    man = {"horizons": {"horizon": horizon}, "tolerances": {"eps": fmt(eps)}}
    return "decided", out, man, extra


def cmd_density(args, cfg):
    from .engine import hitting_density
    system = _load_system(args.system)
    x, t = _load_vector(args.vector), _load_vector(args.target)
    horizon = args.horizon if args.horizon is not None else cfg["horizon"]
    eps = _q(args.eps or cfg["eps"], "eps")
    curve = hitting_density(system, x, t, eps, horizon)
    out = {"horizon": horizon, "eps": fmt(eps), "hits": int(curve.hits.size),
           "final_density": curve.density(horizon), "lower_estimate": curve.lower_estimate,
           "exact": curve.exact}
    step = max(1, horizon // 2000)
    extra = {"csv": curve.to_csv(step),
             "svg": lambda: artifacts.svg_plot(
                 {"density": [(M, curve.density(M)) for M in range(step, horizon + 1, step)]},
                 "hitting density")}
    return "decided", out, {"horizons": {"horizon": horizon}, "tolerances": {"eps": fmt(eps)}}, extra


def cmd_odometer(args, cfg):
    from . import odometer as od
    try:
        digits = od.parse_cylinder(args.cylinder)
    except (ValueError, LindynError) as exc:
        raise InputError(f"bad --cylinder {args.cylinder!r}: {exc}") from None
    s = od.CylinderSet([digits])
    out = {"cylinder": od.format_cylinder(digits), "depth": len(digits),
           "measure": fmt(od.cylinder_measure(digits))}
    if args.action == "period":
        pp = od.periodic_point_cylinder(s)
        out.update(N=od.period(len(digits)), least_period=pp.period, verified=pp.verified)
    elif args.action == "measure":
        pass
    elif args.action == "returns":
        ev = od.conservativity_evidence(s)
        out.update(first_return=ev.n, return_measure=fmt(ev.measure))
    elif args.action == "image":
        img = od.cylinder_image(digits, args.n)
        out.update(n=args.n, image=od.format_cylinder(img), image_measure=fmt(od.cylinder_measure(img)))
    return "decided", out, {}, {}


def cmd_affine(args, cfg):
    from .affine import AffineMap, IntervalSet, sc_witness, star_bound_check
    f = AffineMap(_q(args.a, "a"), _q(args.b, "b"))
    if args.action == "verify-star":
        seed = args.seed if args.seed is not None else cfg["seed"]
        trials = args.trials or cfg["star_trials"]
        rep = star_bound_check(f, trials, seed)
        out = {"a": fmt(f.a), "b": fmt(f.b), "trials": rep.trials, "violations": rep.violations,
               "uncertified": rep.uncertified, "exact_equalities": rep.exact_equalities,
               "bound": rep.bound, "min_ratio": rep.min_ratio,
               "min_margin_lower": float(rep.min_margin_lower)}
        status = "decided" if rep.uncertified == 0 else "undecided"
        return status, out, {"seeds": {"intervals": seed}}, {}
    if args.B is None:
        raise InputError("sc-witness needs --B \"[lo,hi]\"")
    B = IntervalSet.parse(args.B)
    eps = _q(args.eps or cfg["sc_eps"], "eps")
    w = sc_witness(f, B, eps)
    out = {"a": fmt(f.a), "b": fmt(f.b), "B": repr(B), "B_prime": repr(w.B_prime),
           "delta": None if w.delta is None else fmt(w.delta), "removed_measure_upper": float(w.removed.hi),
           "N": w.N, "head": fmt(w.head), "tail_upper": float(w.tail.hi),
           "total_upper": float(w.total_upper),
           "closed_form": None if w.closed_form is None else fmt(w.closed_form)}
    rows = "N,partial_sum,radius\n" + "".join(
        f"{n},{float(s.mid)!r},{float(s.rad)!r}\n" for n, s in enumerate(w.head_sums))
    return "decided", out, {"tolerances": {"eps": fmt(eps)}}, {"csv": rows}


def cmd_shift(args, cfg):
    from .shifts import ShiftWeights, classify_shift
    p = _q(args.p, "p")
    if args.family == "const":
        if args.value is None:
            raise InputError("--family const needs --value")
        w = ShiftWeights.const(args.mode, _q(args.value))
    else:
        head = tuple(_q(v, "head") for v in args.head.split(",")) if args.head else ()
        neg = tuple(_q(v, "neg-head") for v in args.neg_head.split(",")) if args.neg_head else ()
        tail = _q(args.value if args.value is not None else "1")
        w = ShiftWeights(args.mode, head, tail, neg,
                         None if args.neg_tail is None else _q(args.neg_tail, "neg-tail"))
    rep = classify_shift(w, p)
    out = rep.to_json()
    status = "unknown" if UNKNOWN_VALUES & {rep.frequently_hypercyclic.value, rep.chaotic.value} else "decided"
    return status, out, {}, {}


UNKNOWN_VALUES = {"unknown", "undecided"}


def cmd_br_lemma(args, cfg):
    import numpy as np
    from .conditions import check_br_lemma
    from .weights import profile_from_json
    text = args.alpha
    try:
        desc = json.loads(text) if text.lstrip().startswith("{") else _load_json(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--alpha is not valid JSON: {exc}") from None
    alpha = profile_from_json(desc)
    horizon = args.horizon or cfg["br_horizon"]
    step, offset = args.step, args.offset
    rep = check_br_lemma(alpha, lambda H: np.arange(offset, H + 1, step), horizon)
    out = {"horizon": horizon, "A": f"{offset} + {step}N", "max_beta": rep.max_beta,
           "argmax": rep.argmax, "ratio_constant": fmt(rep.ratio_constant),
           "alpha_summable": rep.alpha_summable, "sample": [list(s) for s in rep.betas_sample],
           "label": "floating-point evidence, not proof"}
    return "decided", out, {"horizons": {"horizon": horizon}}, {}


# parser -------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lindyn", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, system=True):
        if system:
            p.add_argument("--system", required=True, help="system description (JSON)")
        p.add_argument("--out", help="JSON report path (default: stdout)")
        p.add_argument("--csv", help="CSV data path")
        p.add_argument("--svg", help="SVG plot path")
        return p

    p = common(sub.add_parser("classify", help="verdicts for every dynamical property"))
    p.add_argument("--W", help="wandering atom for d_n as orbit:index[:copy]")
    p.set_defaults(func=cmd_classify)
    p = common(sub.add_parser("classify-pair", help="classify f and its inverse"))
    p.set_defaults(func=cmd_classify_pair)
    p = common(sub.add_parser("sc", help="summability condition"))
    p.add_argument("--window", type=int, help="also bound the orbit mass of the window [-L, L]")
    p.set_defaults(func=cmd_sc)
    p = common(sub.add_parser("distortion", help="bounded distortion constant"))
    p.add_argument("--window", type=int)
    p.set_defaults(func=cmd_distortion)
    p = common(sub.add_parser("dn", help="d_n sequence and the necessary condition"))
    p.add_argument("--W", help="wandering atom as orbit:index[:copy]")
    p.add_argument("--range", type=int, help="write d_n for |n| <= range")
    p.set_defaults(func=cmd_dn)

    p = sub.add_parser("construct-fhc", help="build a frequently hypercyclic vector")
    p.add_argument("--system", required=True)
    p.add_argument("--slots", type=int)
    p.add_argument("--stretch", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--eps")
    p.add_argument("--out", help="vector JSON path")
    p.add_argument("--report", help="JSON summary path (default: stdout)")
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_construct_fhc)

    p = common(sub.add_parser("density", help="hitting density of an orbit near a target"))
    p.add_argument("--vector", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--eps")
    p.add_argument("--horizon", type=int)
    p.set_defaults(func=cmd_density)

    p = common(sub.add_parser("odometer", help="odometer cylinders"), system=False)
    p.add_argument("action", choices=["period", "measure", "returns", "image"])
    p.add_argument("--cylinder", required=True, help='digits such as "[0,1]"')
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_odometer)

    p = common(sub.add_parser("affine", help="affine maps with mu = exp(-|t|)/2"), system=False)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("action", choices=["verify-star", "sc-witness"])
    p.add_argument("--B")
    p.add_argument("--eps")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_affine)

    p = common(sub.add_parser("shift", help="weighted backward shifts"), system=False)
    p.add_argument("action", choices=["classify"])
    p.add_argument("--mode", choices=["unilateral", "bilateral"], required=True)
    p.add_argument("--family", choices=["const", "eventually_const"], default="const")
    p.add_argument("--value", help="constant weight, or the tail weight")
    p.add_argument("--head", help="comma separated w_0, w_1, ...")
    p.add_argument("--neg-head", help="comma separated w_-1, w_-2, ...")
    p.add_argument("--neg-tail")
    p.add_argument("--p", default="1")
    p.set_defaults(func=cmd_shift)

    p = common(sub.add_parser("br-lemma", help="sums of alpha over a set, shifted"), system=False)
    p.add_argument("--alpha", default='{"family": "geometric", "a": "1", "r": "1/2"}',
                   help="weight descriptor JSON or a path to one")
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--horizon", type=int)
    p.set_defaults(func=cmd_br_lemma)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = load_config()
        status, result, man_kw, extra = args.func(args, cfg)
    except (InputError, ConfigError) as exc:
        print(f"lindyn {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UndecidedError as exc:
        print(f"lindyn {args.command}: undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (LindynError, ValueError) as exc:
        print(f"lindyn {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    inputs = [getattr(args, k) for k in ("system", "vector", "target") if getattr(args, k, None)]
    manifest = artifacts.RunManifest.build(argv, inputs, **man_kw)
    report = {"command": args.command, "status": status, "manifest": manifest.to_json(),
              "result": result}
    target = getattr(args, "report", None) if args.command == "construct-fhc" else args.out
    artifacts.atomic_write(target or "-", artifacts.dumps(report))
    if args.csv and "csv" in extra:
        artifacts.atomic_write(args.csv, extra["csv"])
    if args.svg and "svg" in extra:
        artifacts.atomic_write(args.svg, extra["svg"]())
    return STATUS_EXIT[status]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
