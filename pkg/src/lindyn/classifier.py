"""Decision procedure turning the implemented criteria into per-property verdicts.

Each verdict is ``yes``/``no`` only when a named result applies; otherwise it is
``unknown``.  Justification tags name the result used.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

from .certified import fmt, upper
from .conditions import (FailsNecessary, Holds, Fails, Passes, check_bounded_distortion,
                         check_necessary_fh, check_sc, compute_dn)
from .errors import (NotGenerating, NotInvertibleSystem, UnboundedRatio,
                     UndecidedError)
from .system import CYCLE, Atom, AtomicSystem

YES, NO, UNKNOWN, NA = "yes", "no", "unknown", "n/a"

# justification tags
SC_GENERAL = "SC characterization (general case)"
SC_FINITE = "SC characterization (finite measure)"
SC_DISSIPATIVE = "SC characterization (dissipative case)"
NECESSARY_FH = "necessary condition for frequent hypercyclicity"
DISTORTION = "frequent hypercyclicity characterization (bounded distortion)"
ERGODIC = "ergodic atomic dissipative characterization"
FORWARD_NECESSARY = "forward necessary condition (injective maps)"
CYCLE_TAG = "cycle: T^L = identity on the conservative part, no dense orbit"
HOPF = "Hopf decomposition (orbit-normal form)"
SC_IMPLIES_DISSIPATIVE = "summability condition implies dissipative"
NO_RULE = "no implemented result applies"


@dataclass(frozen=True)
class Verdict:
    value: str
    justification: str

    def to_json(self):
        return {"verdict": self.value, "justification": self.justification}


@dataclass(frozen=True)
class ClassificationReport:
    dissipative: Verdict
    sc: Verdict
    mu_finite: Verdict
    bounded_distortion: Verdict
    ergodic_dissipative: Verdict
    chaotic: Verdict
    frequently_hypercyclic: Verdict
    topologically_mixing: Verdict
    star_constant: str = ""
    necessary_fh: Optional[Verdict] = None
    inverse_consistency: Optional[Verdict] = None

    VERDICT_FIELDS = ("dissipative", "sc", "mu_finite", "bounded_distortion",
                      "ergodic_dissipative", "chaotic", "frequently_hypercyclic",
                      "topologically_mixing")

    @property
    def has_unknowns(self) -> bool:
        return any(getattr(self, f).value in (UNKNOWN, "undecided") for f in self.VERDICT_FIELDS)

    def to_json(self) -> dict:
        out = {f: getattr(self, f).to_json() for f in self.VERDICT_FIELDS}
        out["star_constant"] = self.star_constant
        if self.necessary_fh is not None:
            out["necessary_fh"] = self.necessary_fh.to_json()
        if self.inverse_consistency is not None:
            out["inverse_consistency"] = self.inverse_consistency.to_json()
        return out

    def violations(self) -> list:
        """Combinations the implemented results forbid (empty on a sound report)."""
        bad = []
        v = {f: getattr(self, f).value for f in self.VERDICT_FIELDS}
        if v["sc"] == "holds":
            for f in ("chaotic", "frequently_hypercyclic", "topologically_mixing"):
                if v[f] != YES:
                    bad.append(f"sc holds but {f} = {v[f]}")
            if v["dissipative"] == NO:
                bad.append("sc holds on a non-dissipative system")
        if v["dissipative"] == YES and v["chaotic"] == YES and v["sc"] != "holds":
            bad.append("dissipative and chaotic without sc")
        if v["mu_finite"] == YES and v["dissipative"] == YES and v["sc"] != "holds":
            bad.append("finite dissipative system without sc")
        if v["dissipative"] == YES and v["bounded_distortion"] not in (NA, "unbounded", UNKNOWN):
            trio = {v["sc"] == "holds", v["frequently_hypercyclic"] == YES, v["chaotic"] == YES}
            decided = all(v[f] != UNKNOWN for f in ("frequently_hypercyclic", "chaotic"))
            if decided and len(trio) > 1:
                bad.append("bounded distortion but sc / FH / chaotic disagree")
        if v["ergodic_dissipative"] == YES:
            trio = {v["frequently_hypercyclic"], v["chaotic"],
                    YES if v["mu_finite"] == YES else NO}
            if UNKNOWN not in trio and "undecided" not in trio and len(trio) > 1:
                bad.append("ergodic dissipative but FH / chaotic / mu finite disagree")
        if self.necessary_fh is not None and self.necessary_fh.value == "fails" \
                and v["frequently_hypercyclic"] == YES:
            bad.append("d_n sum diverges but FH = yes")
        return bad


def _sc_verdict(res):
    if isinstance(res, Holds):
        return Verdict("holds", "orbit sums certified finite for every atom")
    if isinstance(res, Fails):
        return Verdict("fails", res.reason)
    return Verdict("undecided", res.reason)


def classify(system: AtomicSystem, W: Optional[Atom] = None) -> ClassificationReport:
    c = system.star_constant()  # raises UnboundedRatio for non-systems
    c_txt = fmt(c)
    try:
        total = system.total_measure()
        mu_finite = Verdict(NO if total == math.inf else YES,
                            "certified orbit sums" if total != math.inf else "divergent orbit sum or infinitely many orbits")
    except UndecidedError as exc:
        mu_finite = Verdict("undecided", str(exc))
    if system.forward:
        return _classify_forward(system, c_txt, mu_finite, W)

    hopf = system.hopf_decompose()
    dissipative = not hopf.conservative_orbits
    diss = Verdict(YES if dissipative else NO, HOPF)
    sc_res = check_sc(system)
    sc = _sc_verdict(sc_res)
    if sc.value == "undecided":
        raise UndecidedError(sc.justification)

    if not dissipative:
        no = Verdict(NO, CYCLE_TAG)
        return ClassificationReport(diss, Verdict("fails", SC_IMPLIES_DISSIPATIVE), mu_finite,
                                    Verdict(NA, "not dissipative"), Verdict(NA, "not dissipative"),
                                    no, no, no, c_txt)

    ergodic = system.is_ergodic_dissipative()
    erg = Verdict(YES if ergodic else NO, "single line" if ergodic else "several invariant orbits")
    try:
        cert = check_bounded_distortion(system)
        if not cert.bounded:
            bd = Verdict("unbounded", cert.note)
        elif cert.exact:
            bd = Verdict(fmt(cert.K), "exact")
        else:
            bd = Verdict(f"<= {float(cert.K):.6g}", "upper bound")
    except NotGenerating as exc:
        cert = None
        bd = Verdict(NA, str(exc))

    W = W or _default_W(system)
    dn = compute_dn(system, [W])
    nec = check_necessary_fh(dn)
    if isinstance(nec, Passes):
        nec_v = Verdict("passes", f"sum of d_n({W}) = {fmt(nec.total)}")
    elif isinstance(nec, FailsNecessary):
        nec_v = Verdict("fails", f"sum of d_n({W}) diverges: {nec.witness}")
    else:
        nec_v = Verdict("undecided", nec.reason)

    if isinstance(sc_res, Holds):
        tag = SC_FINITE if mu_finite.value == YES else SC_GENERAL
        yes = Verdict(YES, tag)
        return ClassificationReport(diss, sc, mu_finite, bd, erg, yes, yes, yes, c_txt, nec_v)

    # dissipative and sc fails
    chaotic = Verdict(NO, SC_DISSIPATIVE)
    if ergodic:
        fh = Verdict(NO, ERGODIC)
    elif cert is not None and cert.bounded:
        fh = Verdict(NO, DISTORTION)
    elif nec_v.value == "fails":
        fh = Verdict(NO, NECESSARY_FH)
    else:
        fh = Verdict(UNKNOWN, NO_RULE)
    if fh.value == UNKNOWN:
        fh = _try_other_atoms(system, fh)
    mixing = Verdict(UNKNOWN, NO_RULE)
    return ClassificationReport(diss, sc, mu_finite, bd, erg, chaotic, fh, mixing, c_txt, nec_v)


def _default_W(system: AtomicSystem) -> Atom:
    from .conditions import default_wandering_atom
    return default_wandering_atom(system)


def _try_other_atoms(system, fh):
    """Any line whose single-atom d_n sum diverges rules frequent hypercyclicity out."""
    for k, o in enumerate(system.orbits):
        if o.kind == CYCLE:
            continue
        res = check_necessary_fh(compute_dn(system, [Atom(k, 0, 0)]))
        if isinstance(res, FailsNecessary):
            return Verdict(NO, NECESSARY_FH)
    return fh


def _classify_forward(system, c_txt, mu_finite, W):
    na = Verdict(NA, "forward-only system: the Hopf decomposition needs a bijection")
    W = W or _default_W(system)
    nec = check_necessary_fh(compute_dn(system, [W]))
    if isinstance(nec, FailsNecessary):
        fh = Verdict(NO, FORWARD_NECESSARY)
        nec_v = Verdict("fails", nec.witness)
    elif isinstance(nec, Passes):
        fh = Verdict(UNKNOWN, "forward necessary condition passes; no sufficient condition "
                              "is implemented for forward-only systems")
        nec_v = Verdict("passes", f"sum of d_n = {fmt(nec.total)}")
    else:
        fh = Verdict(UNKNOWN, NO_RULE)
        nec_v = Verdict("undecided", nec.reason)
    unk = Verdict(UNKNOWN, NO_RULE)
    return ClassificationReport(na, Verdict(NA, "defined for bijective systems"), mu_finite, na, na,
                                unk, fh, unk, c_txt, nec_v)


# inverse pairs ------------------------------------------------------------------------------

@dataclass(frozen=True)
class InversePair:
    forward: ClassificationReport
    inverse: ClassificationReport
    agree_fh: bool
    agree_chaotic: bool
    bounded_distortion: bool


def classify_inverse_pair(system: AtomicSystem) -> InversePair:
    if system.forward:
        raise NotInvertibleSystem("forward-only systems have no inverse")
    twin = system.reversed()
    try:
        twin.star_constant()
    except UnboundedRatio as exc:
        raise NotInvertibleSystem(f"the inverse map violates the (star) bound: {exc}") from None
    a, b = classify(system), classify(twin)
    bd = a.bounded_distortion.value not in (NA, "unbounded")
    agree_fh = a.frequently_hypercyclic.value == b.frequently_hypercyclic.value
    agree_ch = a.chaotic.value == b.chaotic.value
    tag = "duality of f and its inverse under bounded distortion"
    if bd and not (agree_fh and agree_ch):
        raise AssertionError("inverse duality violated on a bounded-distortion system")
    pair_v = Verdict("agree" if agree_fh and agree_ch else "differ", tag)
    a = _with_inverse(a, pair_v)
    b = _with_inverse(b, pair_v)
    return InversePair(a, b, agree_fh, agree_ch, bd)


def _with_inverse(rep, v):
    d = {f.name: getattr(rep, f.name) for f in fields(rep)}
    d["inverse_consistency"] = v
    return ClassificationReport(**d)
