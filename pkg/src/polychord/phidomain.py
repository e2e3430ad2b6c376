"""Reduction of the pair inequalities to phi-interval sets.

At fixed r and t = cos(theta), each of the six comparisons between the four
moving lines (the "cases") constrains phi to a set whose endpoints are either
constants or arc bounds f + arcsin((A + B t)/sqrt(1-t^2)) /
pi + f - arcsin(...).  All sets live on the circle parametrized by
Phi0 = (-pi/2, 3*pi/2); raw intervals are wrapped into it, which is safe for
integration because the phi-antiderivatives are evaluated piecewise.

Four region sets assemble the cases:

    A = 13 * ~23 * 24 * II      integrand pair (a, b) = (2, 3)
    B = 13 * ~24 * II  [34 gate]                        (4, 3)
    C = ~13 * 12' * 24 * II                             (2, 1)
    D = ~13 * 14 * ~24 * II                             (4, 1)

where 12' is 12 or its complement by the sign of (b - B), and the 34 case is
a phi-free gate in (r, t).  Their disjoint union is exactly the set where the
x-overlap chain has a solution inside the y-window.

Within a t-subdomain between breakpoints the active bound expressions are
constant; the breakpoints are located by a signature scan plus bisection.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .integrand import ArcParams, lines_at
from .pairframe import TrianglePair

PHI_LO = -0.5 * math.pi
PHI_HI = 1.5 * math.pi
TWO_PI = 2.0 * math.pi
_TINY = 1e-13

EMPTY, INTERVAL, FULL = 0, 1, 2


class Degenerate12(ValueError):
    """Case 12 with b == B: the inequality is phi-free."""


@dataclass(frozen=True)
class ConstBound:
    value: float

    def __call__(self, t):
        return self.value

    @property
    def key(self):
        return ("const", round(self.value, 15))


@dataclass(frozen=True)
class ArcBound:
    """phi(t) = f + arcsin(w) (plus) or pi + f - arcsin(w) (minus),
    w = (A + B t)/sqrt(1 - t^2), clamped to +-1 outside its range."""

    f: float
    A: float
    B: float
    form: str  # "plus" | "minus"

    def canonical(self) -> ArcParams:
        """Rewrite the minus form as a plus form: pi+f-arcsin(w) equals
        (pi+f) + arcsin(-w), so (f, A, B) -> (pi + f, -A, -B)."""
        if self.form == "plus":
            return ArcParams(self.f, self.A, self.B)
        return ArcParams(math.pi + self.f, -self.A, -self.B)

    def __call__(self, t):
        st = math.sqrt(max(1.0 - t * t, 0.0))
        lin = self.A + self.B * t
        if lin >= st:
            asn = 0.5 * math.pi
        elif lin <= -st:
            asn = -0.5 * math.pi
        else:
            asn = math.asin(lin / st)
        if self.form == "plus":
            return self.f + asn
        return math.pi + self.f - asn

    @property
    def key(self):
        return ("arc", self.form, self.f, self.A, self.B)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_desc: object
    hi_desc: object


def full_set():
    return [Interval(PHI_LO, PHI_HI, ConstBound(PHI_LO), ConstBound(PHI_HI))]


def measure(s) -> float:
    return sum(iv.hi - iv.lo for iv in s)


def _normalize(lo, hi, lod, hid):
    """Wrap a raw interval onto Phi0, splitting at the cut when needed."""
    if hi - lo >= TWO_PI - _TINY:
        return full_set()
    k = math.floor((lo - PHI_LO) / TWO_PI)
    lo -= TWO_PI * k
    hi -= TWO_PI * k
    if hi <= PHI_HI + _TINY:
        hi = min(hi, PHI_HI)
        if hi - lo <= _TINY:
            return []
        return [Interval(lo, hi, lod, hid)]
    out = []
    if PHI_HI - lo > _TINY:
        out.append(Interval(lo, PHI_HI, lod, ConstBound(PHI_HI)))
    if hi - TWO_PI - PHI_LO > _TINY:
        out.append(Interval(PHI_LO, hi - TWO_PI, ConstBound(PHI_LO), hid))
    out.sort(key=lambda iv: iv.lo)
    return out


def intersect(sa, sb):
    out = []
    for ia in sa:
        for ib in sb:
            if ib.lo > ia.lo:
                lo, lod = ib.lo, ib.lo_desc
            else:
                lo, lod = ia.lo, ia.lo_desc
            if ib.hi < ia.hi:
                hi, hid = ib.hi, ib.hi_desc
            else:
                hi, hid = ia.hi, ia.hi_desc
            if hi - lo > _TINY:
                out.append(Interval(lo, hi, lod, hid))
    out.sort(key=lambda iv: iv.lo)
    return out


def complement(s):
    out = []
    cur, curd = PHI_LO, ConstBound(PHI_LO)
    for iv in sorted(s, key=lambda i: i.lo):
        if iv.lo - cur > _TINY:
            out.append(Interval(cur, iv.lo, curd, iv.lo_desc))
        cur, curd = iv.hi, iv.hi_desc
    if PHI_HI - cur > _TINY:
        out.append(Interval(cur, PHI_HI, curd, ConstBound(PHI_HI)))
    return out


@dataclass(frozen=True)
class CaseCoefficients:
    """Phase and arcsine-argument coefficients of one case inequality."""

    case_id: str
    f: float = math.nan
    A: float = math.nan
    B: float = math.nan
    # case II carries separate left/right numerators
    A_L: float = math.nan
    A_R: float = math.nan
    # case 34 is a phi-free gate: lhs * t > rhs
    gate_lhs: float = math.nan
    gate_rhs: float = math.nan


def case_coefficients(tp: TrianglePair, r: float, case_id: str) -> CaseCoefficients:
    sb, cb = tp.sin_beta, tp.cos_beta
    if case_id == "II":
        return CaseCoefficients(
            "II", f=0.0, B=cb / sb, A_L=-tp.y_M / r, A_R=-tp.y_m / r
        )
    if case_id == "34":
        return CaseCoefficients(
            "34", gate_lhs=r * (tp.Bp - tp.bp), gate_rhs=(tp.ap - tp.Ap) * sb
        )
    if case_id == "12":
        if abs(tp.b - tp.B) <= 1e-15 * (abs(tp.b) + abs(tp.B) + 1.0):
            raise Degenerate12("b == B; resolve by the sign of a - A")
        return CaseCoefficients(
            "12", f=0.0, A=(tp.a - tp.A) / (r * (tp.b - tp.B)), B=cb / sb
        )
    slope, da, dbp = {
        "13": (tp.b, tp.a - tp.ap, tp.bp),
        "23": (tp.B, tp.A - tp.ap, tp.bp),
        "14": (tp.b, tp.a - tp.Ap, tp.Bp),
        "24": (tp.B, tp.A - tp.Ap, tp.Bp),
    }[case_id]
    root = math.sqrt(1.0 + slope * slope)
    return CaseCoefficients(
        case_id,
        f=math.atan2(1.0, slope),
        A=da / (r * root),
        B=(slope * cb - dbp) / (sb * root),
    )


def _sin_gt_set(f, A, B, t):
    """Where sin(phi - f) > (A + B t)/sin(theta), as a Phi0 set."""
    st = math.sqrt(max(1.0 - t * t, 0.0))
    lin = A + B * t
    if lin >= st:
        return []
    if lin <= -st:
        return full_set()
    asn = math.asin(lin / st)
    return _normalize(
        f + asn,
        math.pi + f - asn,
        ArcBound(f, A, B, "plus"),
        ArcBound(f, A, B, "minus"),
    )


def phi_set(case_id: str, coeffs: CaseCoefficients, t: float):
    """Solution set of one case inequality at fixed t (sin(theta) > 0)."""
    if case_id == "II":
        ge_left = _sin_gt_set(0.0, coeffs.A_L, coeffs.B, t)
        gt_right = _sin_gt_set(0.0, coeffs.A_R, coeffs.B, t)
        return intersect(ge_left, complement(gt_right))
    if case_id == "34":
        return full_set() if coeffs.gate_lhs * t > coeffs.gate_rhs else []
    if case_id in ("13", "23", "14", "24", "12"):
        return _sin_gt_set(coeffs.f, coeffs.A, coeffs.B, t)
    raise ValueError(f"unknown case {case_id!r}")


def _constraint_12(tp, r, t):
    """Set where lbar < Lbar."""
    try:
        c2 = case_coefficients(tp, r, "12")
    except Degenerate12:
        return full_set() if tp.a < tp.A else []
    s = phi_set("12", c2, t)
    return s if tp.b > tp.B else complement(s)


REGION_INDICES = {"A": (2, 3), "B": (4, 3), "C": (2, 1), "D": (4, 1)}


def regions_at(tp: TrianglePair, r: float, t: float):
    """All four region sets at (r, t), with bound provenance."""
    cii = case_coefficients(tp, r, "II")
    s_ii = phi_set("II", cii, t)
    s13 = phi_set("13", case_coefficients(tp, r, "13"), t)
    s24 = phi_set("24", case_coefficients(tp, r, "24"), t)
    s23 = phi_set("23", case_coefficients(tp, r, "23"), t)
    s14 = phi_set("14", case_coefficients(tp, r, "14"), t)
    c34 = case_coefficients(tp, r, "34")
    gate34 = c34.gate_lhs * t > c34.gate_rhs
    c13, c24, c23 = complement(s13), complement(s24), complement(s23)
    con12 = _constraint_12(tp, r, t)
    out = {
        "A": intersect(intersect(s13, c23), intersect(s24, s_ii)),
        "B": intersect(intersect(s13, c24), s_ii) if gate34 else [],
        "C": intersect(intersect(c13, con12), intersect(s24, s_ii)),
        "D": intersect(intersect(c13, s14), intersect(c24, s_ii)),
    }
    return out


def region_phi_set(region: str, tp: TrianglePair, r: float, t: float):
    return regions_at(tp, r, t)[region]


def theta_window(r: float, tp: TrianglePair):
    """t-window from the primed ordinate reachability; None when empty."""
    if r <= 0.0:
        return None
    sb = tp.sin_beta
    t_lo = max(0.0, tp.Y_m * sb / r)
    t_hi = min(1.0, tp.Y_M * sb / r)
    if t_hi - t_lo <= 1e-14:
        return None
    return (t_lo, t_hi)


def chain_region(tp: TrianglePair, r: float, t: float, phi: float):
    """Brute-force region label straight from the line inequalities, the
    independent reference for the interval machinery; None when no overlap."""
    theta = math.acos(min(1.0, max(-1.0, t)))
    lb, Lb, lbp, Lbp = lines_at(tp, r, theta, phi)
    yb = r * (t * tp.cos_beta / tp.sin_beta - math.sin(theta) * math.sin(phi))
    if not (tp.y_m <= yb <= tp.y_M):
        return None
    if min(Lb, Lbp) <= max(lb, lbp):
        return None
    if lb < lbp:
        return "A" if Lb < Lbp else "B"
    return "C" if Lb < Lbp else "D"


# ----------------------------------------------------------------------
# signature scan: breakpoints of the subdomain structure in t


def _signature(tp, r, t, cc):
    """Discrete topology fingerprint at t: per-case clamp states, the gate
    sign, and the circular order of all active endpoint positions."""
    states = []
    endpoints = []
    st = math.sqrt(max(1.0 - t * t, 0.0))

    def classify(f, A, B, tag):
        lin = A + B * t
        if lin >= st:
            states.append(EMPTY)
        elif lin <= -st:
            states.append(FULL)
        else:
            states.append(INTERVAL)
            asn = math.asin(lin / st)
            lo = (f + asn - PHI_LO) % TWO_PI
            hi = (math.pi + f - asn - PHI_LO) % TWO_PI
            endpoints.append((lo, tag, 0))
            endpoints.append((hi, tag, 1))

    classify(0.0, cc["II"].A_L, cc["II"].B, 0)
    classify(0.0, cc["II"].A_R, cc["II"].B, 1)
    for i, cid in enumerate(("13", "23", "14", "24")):
        classify(cc[cid].f, cc[cid].A, cc[cid].B, 2 + i)
    c12 = cc.get("12")
    if c12 is None:
        states.append(3 if tp.a < tp.A else 4)
    else:
        classify(0.0, c12.A, c12.B, 6)
    g = cc["34"]
    states.append(g.gate_lhs * t > g.gate_rhs)
    endpoints.sort()
    return tuple(states), tuple(e[1] * 2 + e[2] for e in endpoints)


def _all_case_coefficients(tp, r):
    cc = {}
    for cid in ("II", "13", "23", "14", "24", "34"):
        cc[cid] = case_coefficients(tp, r, cid)
    try:
        cc["12"] = case_coefficients(tp, r, "12")
    except Degenerate12:
        cc["12"] = None
    return cc


def theta_breakpoints(tp: TrianglePair, r: float, samples: int = 256):
    """Interior t values where the phi-set topology changes, by a sampled
    signature scan refined by bisection to 1e-12."""
    win = theta_window(r, tp)
    if win is None:
        return []
    t_lo, t_hi = win
    cc = _all_case_coefficients(tp, r)
    width = t_hi - t_lo
    ts = [t_lo + width * (i + 0.5) / samples for i in range(samples)]
    sigs = [_signature(tp, r, t, cc) for t in ts]
    breaks = []
    for i in range(samples - 1):
        if sigs[i] == sigs[i + 1]:
            continue
        a, b = ts[i], ts[i + 1]
        sa = sigs[i]
        while b - a > 1e-12:
            m = 0.5 * (a + b)
            if _signature(tp, r, m, cc) == sa:
                a = m
            else:
                b = m
        breaks.append(0.5 * (a + b))
    return breaks


@dataclass(frozen=True)
class ThetaSubdomain:
    """One atomic piece of the reduced integral: a t-interval on which one
    region contributes one phi-interval with fixed bound expressions."""

    t_lo: float
    t_hi: float
    region: str
    a: int  # index of the upper line's J (2 or 4)
    b: int  # index of the lower line's J (1 or 3)
    lo: object  # phi lower bound descriptor
    hi: object


def subdomains(tp: TrianglePair, r: float):
    """Atomic (t-interval, region, phi-interval) records covering the pair's
    reduced domain at this r."""
    win = theta_window(r, tp)
    if win is None:
        return []
    edges = [win[0]] + theta_breakpoints(tp, r) + [win[1]]
    out = []
    for t1, t2 in zip(edges[:-1], edges[1:]):
        if t2 - t1 <= 1e-12:
            continue
        tm = 0.5 * (t1 + t2)
        for region, s in regions_at(tp, r, tm).items():
            aa, bb = REGION_INDICES[region]
            for iv in s:
                out.append(
                    ThetaSubdomain(t1, t2, region, aa, bb, iv.lo_desc, iv.hi_desc)
                )
    return out


def subdomain_table_json(tp: TrianglePair, r: float) -> str:
    """Diagnostic dump of the subdomain table."""
    rows = []
    for sd in subdomains(tp, r):
        rows.append(
            {
                "t_lo": sd.t_lo,
                "t_hi": sd.t_hi,
                "region": sd.region,
                "a": sd.a,
                "b": sd.b,
                "lo": list(map(str, sd.lo.key)),
                "hi": list(map(str, sd.hi.key)),
            }
        )
    return json.dumps(rows, sort_keys=True)
