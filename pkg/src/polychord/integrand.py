"""Integrand pieces of the non-parallel facet-pair reduction.

Everything is expressed in the pair's canonical frame.  With the direction
angles (theta, phi) and t = cos(theta):

  psi            (nu1.w)(nu2.w) = cos t [sin b sin th sin phi - cos b cos t]
  lbar, Lbar     left/right line of the unprimed triangle evaluated at the
                 ordinate forced by the Dirac constraint
  lbarp, Lbarp   the primed analogues
  F_k = psi * (lbar, Lbar, lbarp, Lbarp)[k-1]
  J_k = integral of F_k over phi, a trig polynomial, exact

The "substitution property": k = 2 (resp. 4) equals k = 1 (resp. 3) with the
lowercase side coefficients replaced by the capital ones.

For phi bounds of arc form phi(t) = f + arcsin((A + B t)/sqrt(1 - t^2)) the
J_k split into an A part (coefficient of phi) and a B part that collapses to
c1(t) + c2(t) * D1 with D1 = sqrt(1 - t^2 - (A + B t)^2); both are served
here for the analytic t-primitives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pairframe import TrianglePair

# substitution rules: which (intercept, slope) pair feeds F_k
_LOWER = ("a", "b")
_UPPER = ("A", "B")
_LOWER_P = ("ap", "bp")
_UPPER_P = ("Ap", "Bp")
_PAIR_FIELDS = {1: _LOWER, 2: _UPPER, 3: _LOWER_P, 4: _UPPER_P}

SUBSTITUTION_RULES = {
    "lower_to_capital": {"a": "A", "b": "B"},
    "primed_lower_to_capital": {"ap": "Ap", "bp": "Bp"},
    "combined": {"a": "A", "b": "B", "ap": "Ap", "bp": "Bp"},
}


def apply_substitution(record: dict, rule: str) -> dict:
    """Swap coefficient roles per the named rule (involution)."""
    mapping = SUBSTITUTION_RULES[rule]
    out = dict(record)
    for src, dst in mapping.items():
        out[src], out[dst] = record[dst], record[src]
    return out


def coeff_pair(tp: TrianglePair, k: int):
    """(intercept, slope) of the line behind F_k."""
    fa, fb = _PAIR_FIELDS[k]
    return getattr(tp, fa), getattr(tp, fb)


def psi(theta, phi, beta):
    """(nu1.w)(nu2.w) in the canonical frame."""
    return np.cos(theta) * (
        math.sin(beta) * np.sin(theta) * np.sin(phi)
        - math.cos(beta) * np.cos(theta)
    )


def ybar(r, theta, phi, beta):
    """Unprimed ordinate forced by the Dirac constraint."""
    return r * (np.cos(theta) / math.tan(beta) - np.sin(theta) * np.sin(phi))


def lines_at(tp: TrianglePair, r, theta, phi):
    """lbar, Lbar, lbarp, Lbarp of the pair at (r, theta, phi)."""
    sb, cb = tp.sin_beta, tp.cos_beta
    ct, st = np.cos(theta), np.sin(theta)
    yb = r * (ct * cb / sb - st * np.sin(phi))
    common_p = r * (ct / sb)
    shift = r * st * np.cos(phi)
    lb = tp.a + tp.b * yb
    Lb = tp.A + tp.B * yb
    lbp = tp.ap + tp.bp * common_p - shift
    Lbp = tp.Ap + tp.Bp * common_p - shift
    return lb, Lb, lbp, Lbp


def f_k(k: int, r, theta, phi, tp: TrianglePair):
    """F_k = psi * (line k)."""
    lb, Lb, lbp, Lbp = lines_at(tp, r, theta, phi)
    return psi(theta, phi, tp.beta) * (lb, Lb, lbp, Lbp)[k - 1]


def _fA_low(t, r, ca, cb, sb, cbeta):
    """phi-coefficient of J_1/J_2: -(a + b r t cot b) t^2 cos b - (b r t / 2)(1 - t^2) sin b."""
    return -(ca + cb * r * t * cbeta / sb) * t * t * cbeta - 0.5 * cb * r * t * (1.0 - t * t) * sb


def _fA_primed(t, r, ca, cb, sb, cbeta):
    """phi-coefficient of J_3/J_4: -t^2 (a' cos b + b' r t cot b)."""
    return -t * t * (ca * cbeta + cb * r * t * cbeta / sb)


def f_frak_A(k: int, r, t, tp: TrianglePair):
    """A part of the (t, u)-form integrand (phi-linear coefficient of J_k)."""
    ca, cb = coeff_pair(tp, k)
    if k in (1, 2):
        return _fA_low(t, r, ca, cb, tp.sin_beta, tp.cos_beta)
    return _fA_primed(t, r, ca, cb, tp.sin_beta, tp.cos_beta)


def f_frak_B(k: int, r, t, u, cosphi, tp: TrianglePair):
    """B part of J_k at explicit (u = sin phi, cos phi).

    Linear in cosphi against the k-side coefficients: evaluating with the
    opposite cosphi sign equals flipping the signs of that coefficient pair.
    """
    ca, cb = coeff_pair(tp, k)
    sb, cbeta = tp.sin_beta, tp.cos_beta
    st2 = 1.0 - t * t
    rt = np.sqrt(np.maximum(st2, 0.0))
    if k in (1, 2):
        return (
            0.5 * cb * r * t * st2 * u * cosphi * sb
            - t * rt * cosphi * (ca * sb + 2.0 * cb * r * t * cbeta)
        )
    return (
        r * t * t * u * rt * cbeta
        - 0.5 * r * t * st2 * u * u * sb
        - t * rt * cosphi * (ca * sb + cb * r * t)
    )


def j_k(k: int, r, theta, phi, tp: TrianglePair):
    """Exact phi-antiderivative of F_k (d j_k / d phi = F_k)."""
    t = np.cos(theta)
    u, cp = np.sin(phi), np.cos(phi)
    return phi * f_frak_A(k, r, t, tp) + f_frak_B(k, r, t, u, cp, tp)


@dataclass(frozen=True)
class ArcParams:
    """Canonical arc bound phi(t) = f + arcsin((A + B t) / sqrt(1 - t^2))."""

    f: float
    A: float
    B: float

    def w(self, t):
        return (self.A + self.B * t) / np.sqrt(1.0 - t * t)

    def phi(self, t):
        w = np.clip(self.w(t), -1.0, 1.0)
        return self.f + np.arcsin(w)

    def delta1_sq(self, t):
        lin = self.A + self.B * t
        return 1.0 - t * t - lin * lin


def arc_u_cos(arc: ArcParams, t):
    """sin and cos of the arc bound, rational in the two radicals."""
    d = np.sqrt(1.0 - t * t)
    d1 = np.sqrt(np.maximum(arc.delta1_sq(t), 0.0))
    w = (arc.A + arc.B * t) / d
    sf, cf = math.sin(arc.f), math.cos(arc.f)
    u = sf * d1 / d + cf * w
    cphi = cf * d1 / d - sf * w
    return u, cphi


def c_parts_B(k: int, r, t, tp: TrianglePair, arc: ArcParams):
    """B part of J_k at an arc bound, collapsed to (c1, c2) with value
    c1(t) + c2(t) * Delta1; only the single radical Delta1 survives."""
    ca, cb = coeff_pair(tp, k)
    sb, cbeta = tp.sin_beta, tp.cos_beta
    sf, cf = math.sin(arc.f), math.cos(arc.f)
    c2f = math.cos(2.0 * arc.f)
    W = arc.A + arc.B * t
    if k in (1, 2):
        c1 = 0.5 * t * sf * (
            4.0 * cb * r * t * W * cbeta
            + (2.0 * ca * W - cb * r * (2.0 * arc.A**2 - 1.0 + 4.0 * arc.A * arc.B * t + (1.0 + 2.0 * arc.B**2) * t * t) * cf) * sb
        )
        c2 = 0.5 * t * (cb * r * W * c2f * sb - 2.0 * cf * (2.0 * cb * r * t * cbeta + ca * sb))
        return c1, c2
    c1 = 0.5 * t * (
        2.0 * r * t * W * cf * cbeta
        - r * W * W * cf * cf * sb
        + sf * (2.0 * cb * r * t * W + (2.0 * ca * W + r * (arc.A**2 - 1.0 + 2.0 * arc.A * arc.B * t + (1.0 + arc.B**2) * t * t) * sf) * sb)
    )
    c2 = -t * (-r * t * cbeta * sf + cf * (cb * r * t + sb * (ca + r * W * sf)))
    return c1, c2


def f_frak(k: int, r, t, u, tp: TrianglePair, bound):
    """(A-part coefficient, B-part value) of J_k at a bound.

    bound is an ArcParams (B part collapses onto the radical Delta1) or a
    constant phi (u then must equal sin of it).
    """
    fa = f_frak_A(k, r, t, tp)
    if isinstance(bound, ArcParams):
        if np.any(bound.delta1_sq(t) < -1e-12):
            raise DomainError("t outside the radical domain of the arc bound")
        c1, c2 = c_parts_B(k, r, t, tp, bound)
        d1 = math.sqrt(max(bound.delta1_sq(t), 0.0))
        return fa, c1 + c2 * d1
    phi_c = float(bound)
    return fa, f_frak_B(k, r, t, math.sin(phi_c), math.cos(phi_c), tp)


class DomainError(ValueError):
    """Evaluation outside the real domain of the radical Delta1."""
