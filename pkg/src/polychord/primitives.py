"""Closed-form t-primitives of the reduced integrands.

For an arc bound phi(t) = f + arcsin((A + B t)/Delta), Delta = sqrt(1 - t^2),
the integral of J_k over t splits into the primitive of phi(t) * FA_k(t)
(the "A" part) and the primitive of FB_k(t, u(t)) (the "B" part, which
collapses onto the single radical Delta1 = sqrt(1 - t^2 - (A + B t)^2)).
Both are explicit: polynomials, Delta1 times polynomials, an arcsin term and
arctangent terms whose arguments are rational in t and Delta1.

Every arctangent is evaluated through the two-argument form on its printed
(numerator, denominator) pair: the denominators can cross zero inside the
radical domain and the two-argument form is the continuous antiderivative
branch there, while off the crossing it differs from the printed arctan only
by a piecewise constant that cancels in differences.

Transcription of the printed coefficient tables is the dominant risk here;
each block is a named function and the test suite holds every sum to a
finite-difference derivative check and a quadrature check.

k = 2 and k = 4 use the k = 1 and k = 3 forms with the capital side
coefficients, per the substitution property.

The parallel-facet path needs only one primitive: the phi-antiderivative of
the y-antiderivative of A + B cos(phi) + C sin(phi) + D y evaluated at a
bound y = c + d sin(phi) (+ e cos(phi) in the general variant used when the
active y-bound comes from a case boundary rather than the y-window).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .integrand import ArcParams, DomainError, coeff_pair
from .pairframe import TrianglePair

EPS_EDGE_REL = 1e-9
EPS_BETA = 1e-8


class EdgeError(ValueError):
    """Evaluation within eps_edge of a radical-domain endpoint."""


@dataclass(frozen=True)
class RadicalFrame:
    """Radicals and roots attached to one arc bound."""

    arc: ArcParams
    lam1: float
    lam1sq: float
    lam2: float
    lam2sq: float
    mu1: float
    mu2: float

    @classmethod
    def from_arc(cls, arc: ArcParams) -> "RadicalFrame":
        A, B = arc.A, arc.B
        lam1sq = 1.0 + B * B
        lam2sq = 1.0 - A * A + B * B
        if lam2sq <= 0.0:
            raise DomainError("empty radical domain (Lambda2^2 <= 0)")
        lam2 = math.sqrt(lam2sq)
        # roots (-A*B -+ lam2) / lam1sq of Delta1^2 = 0: compute the
        # well-conditioned one directly, the other from the root product
        # -(1 - A^2)/lam1sq (cancellation when A^2 is near 1)
        if A * B >= 0.0:
            mu1 = -(A * B + lam2) / lam1sq  # strictly negative
            mu2 = -(1.0 - A * A) / (lam1sq * mu1)
        else:
            mu2 = (lam2 - A * B) / lam1sq  # strictly positive
            mu1 = -(1.0 - A * A) / (lam1sq * mu2)
        return cls(
            arc=arc,
            lam1=math.sqrt(lam1sq),
            lam1sq=lam1sq,
            lam2=lam2,
            lam2sq=lam2sq,
            mu1=mu1,
            mu2=mu2,
        )

    def delta1(self, t: float) -> float:
        d2 = self.arc.delta1_sq(t)
        if d2 < -1e-12:
            raise DomainError(f"t = {t} outside radical domain [{self.mu1}, {self.mu2}]")
        return math.sqrt(max(d2, 0.0))


def _atan_branch(coef: float, delta1: float, den: float) -> float:
    """Continuous arctan(coef * Delta1 / den); Delta1 >= 0 carries no sign,
    so the branch is fixed by (sign of coef, sign of den)."""
    if coef == 0.0:
        return 0.0
    return math.atan2(math.copysign(delta1, coef), den)


def _arcsin_w(arc: ArcParams, t: float) -> float:
    st = math.sqrt(max(1.0 - t * t, 0.0))
    lin = arc.A + arc.B * t
    if lin >= st:
        return 0.5 * math.pi
    if lin <= -st:
        return -0.5 * math.pi
    return math.asin(lin / st)


# ----------------------------------------------------------------------
# k in {1, 2}: primitive of phi(t) * FA(t)  (six printed blocks)


def _poly_1A(t, r, ca, cb, sb, cbeta):
    """t-polynomial primitive of FA_1; shared by the f and arcsin blocks."""
    c2b = cbeta * cbeta - sb * sb
    c1 = -0.25 * cb * r * sb
    c2 = -ca * cbeta / 3.0
    c3 = -cb * r * (1.0 + 3.0 * c2b) / (16.0 * sb)
    return (c1 + (c2 + c3 * t) * t) * t * t


def p1A_sum(t, r, ca, cb, sb, cbeta, rad: RadicalFrame):
    arc = rad.arc
    A, B = arc.A, arc.B
    L1s, L1 = rad.lam1sq, rad.lam1
    L14 = L1s * L1s
    L16 = L14 * L1s
    L17 = L16 * L1
    L2, L2s = rad.lam2, rad.lam2sq
    c2b = cbeta * cbeta - sb * sb
    s2b = 2.0 * sb * cbeta
    csc = 1.0 / sb
    d1 = rad.delta1(t)

    poly = _poly_1A(t, r, ca, cb, sb, cbeta)
    p_a = arc.f * poly
    p_bI = _arcsin_w(arc, t) * poly

    c0_11 = 8.0 * ca * B * L1s * (2.0 + 2.0 * B * B - 3.0 * L1s + 3.0 * L2s) * cbeta
    c0_12 = A * cb * (
        2.0 * (8.0 * L14 + 15.0 * L2s - L1s * (2.0 + 11.0 * L2s)) * csc
        + 3.0 * (L1s * (2.0 + 11.0 * L2s) - 4.0 * L14 - 15.0 * L2s) * sb
    )
    c0_21 = 8.0 * ca * A * L14 * cbeta
    c0_22 = cb * B * L1s * (5.0 * L2s - 2.0 * L1s) * (2.0 * csc - 3.0 * sb)
    c0_32 = A * cb * L14 * (1.0 + 3.0 * c2b) * csc
    p_b0 = (
        d1
        / (48.0 * L16)
        * (
            (c0_11 + c0_12 * r)
            + (c0_21 + c0_22 * r) * t
            + (c0_32 * r) * t * t
        )
    )

    c1_1 = 16.0 * ca * A * (3.0 - A * A + (3.0 + 2.0 * A * A) * B * B) * L1s * cbeta
    c1_2 = (
        3.0
        * cb
        * B
        * (L1s - A * A)
        * (
            7.0
            - 3.0 * A * A
            + (13.0 + 2.0 * A * A) * B * B
            + 6.0 * B**4
            + (5.0 - 9.0 * A * A + (7.0 + 6.0 * A * A) * B * B + 2.0 * B**4) * c2b
        )
        * csc
    )
    p_b1 = (
        _atan_branch(L1, d1, A * B + L2 + L1s * t)
        / (48.0 * L17)
        * (c1_1 + c1_2 * r)
    )

    den2 = 1.0 - A * B - A * A - L2 - (1.0 + A * B + B * B - L2) * t
    p_b2 = (
        _atan_branch(A + B, d1, den2)
        * csc
        / 48.0
        * (8.0 * ca * s2b + 3.0 * cb * r * (3.0 + c2b))
    )

    den3 = 1.0 - A * A + A * B + L2 + (1.0 - A * B + B * B + L2) * t
    p_b3 = (
        -_atan_branch(A - B, d1, den3)
        * csc
        / 48.0
        * (8.0 * ca * s2b - 3.0 * cb * r * (3.0 + c2b))
    )

    return p_a + p_bI + p_b0 + p_b1 + p_b2 + p_b3


# ----------------------------------------------------------------------
# k in {1, 2}: primitive of FB(t, u(t))  (three printed blocks)


def p1B_sum(t, r, ca, cb, sb, cbeta, rad: RadicalFrame):
    arc = rad.arc
    A, B = arc.A, arc.B
    sf, cf = math.sin(arc.f), math.cos(arc.f)
    c2f = math.cos(2.0 * arc.f)
    L1s, L1 = rad.lam1sq, rad.lam1
    L14 = L1s * L1s
    L16 = L14 * L1s
    L17 = L16 * L1
    L2, L2s = rad.lam2, rad.lam2sq
    d1 = rad.delta1(t)

    ca1 = 0.25 * sf * sb * (2.0 * ca * A + (1.0 - 2.0 * A * A) * cb * r * cf)
    ca2 = sf / 3.0 * (2.0 * A * cb * r * cbeta + B * (ca - 2.0 * A * cb * r * cf) * sb)
    ca3 = -cb * r * sf / 8.0 * ((1.0 + 2.0 * B * B) * cf * sb - 4.0 * B * cbeta)
    p_a = (ca1 + (ca2 + ca3 * t) * t) * t * t

    cA11 = 8.0 * ca * (2.0 - 2.0 * A * A + (2.0 + A * A) * B * B) * L1s * cf * sb
    cA12 = -A * cb * (
        4.0 * B * (A * A * (2.0 * B * B - 13.0) + 13.0 * L1s) * cf * cbeta
        + (8.0 + 3.0 * B * B - 5.0 * B**4 + A * A * (9.0 * B * B + 2.0 * B**4 - 8.0)) * sb * c2f
    )
    cA21 = -8.0 * ca * A * B * L14 * cf * sb
    cA22 = cb * L1s * (
        4.0 * (A * A * (2.0 * B * B - 3.0) + 3.0 * L1s) * cf * cbeta
        + B * (A * A * (7.0 + 2.0 * B * B) - 3.0 * L1s) * c2f * sb
    )
    cA31 = -16.0 * ca * L16 * cf * sb
    cA32 = 2.0 * A * cb * L14 * ((4.0 + 5.0 * B * B) * c2f * sb - 4.0 * B * cf * cbeta)
    cA42 = 6.0 * cb * L16 * (B * c2f * sb - 4.0 * cf * cbeta)
    p_A = (
        d1
        / (48.0 * L16)
        * (
            (cA11 + cA12 * r)
            + (cA21 + cA22 * r) * t
            + (cA31 + cA32 * r) * t * t
            + (cA42 * r) * t * t * t
        )
    )

    cB1 = -8.0 * ca * A * B * L1s * cf * sb
    cB2 = (
        4.0 * cb * (4.0 * L14 + 5.0 * L2s - 4.0 * L1s * (1.0 + L2s)) * cf * cbeta
        + cb * B * (4.0 * L1s - 5.0 * L2s) * c2f * sb
    )
    p_B = (
        L2s
        / (8.0 * L17)
        * _atan_branch(L1, d1, A * B + L2 + t * L1s)
        * (cB1 + cB2 * r)
    )

    return p_a + p_A + p_B


# ----------------------------------------------------------------------
# k in {3, 4}: primitive of phi(t) * FA(t)


def _poly_3A(t, r, ca, cb, sb, cbeta):
    return -(t**3) * cbeta / 12.0 * (4.0 * ca + 3.0 * cb * r * t / sb)


def p3A_sum(t, r, ca, cb, sb, cbeta, rad: RadicalFrame):
    arc = rad.arc
    A, B = arc.A, arc.B
    L1s, L1 = rad.lam1sq, rad.lam1
    L14 = L1s * L1s
    L16 = L14 * L1s
    L17 = L16 * L1
    L2, L2s = rad.lam2, rad.lam2sq
    d1 = rad.delta1(t)

    p_a = arc.f * _poly_3A(t, r, ca, cb, sb, cbeta)
    p_bI = _arcsin_w(arc, t) * _poly_3A(t, r, ca, cb, sb, cbeta)

    cb1 = A * (8.0 * L14 - 2.0 * L1s + 15.0 * L2s - 11.0 * L1s * L2s)
    cb2 = -B * L1s * (2.0 * L1s - 5.0 * L2s)
    cb3 = 2.0 * A * L14
    p_b0 = (
        d1
        * cbeta
        / (24.0 * L16)
        * (
            r * cb * (cb1 + (cb2 + cb3 * t) * t) / sb
            + 4.0 * ca * L1s * (B * (2.0 * L1s - 3.0 * A * A) + A * L1s * t)
        )
    )

    c1 = 4.0 * A * ca * L1s * (2.0 * L14 + 3.0 * L2s - 2.0 * L1s * L2s)
    c2 = 3.0 * B * cb * r * L2s * (4.0 * L14 + 5.0 * L2s - 2.0 * L1s * (2.0 + L2s))
    p_1 = (
        _atan_branch(L1, d1, A * B + L2 + t * L1s)
        * cbeta
        / (12.0 * L17)
        * (c1 + c2 / sb)
    )

    den2 = A * B + L1s + L2 - L2s - 1.0 + t * (A * B + L1s - L2)
    p_2 = (
        -_atan_branch(A + B, d1, den2)
        * cbeta
        / 12.0
        * (4.0 * ca + 3.0 * cb * r / sb)
    )

    den3 = 1.0 + A * B - L1s + L2 + L2s + t * (L1s + L2 - A * B)
    p_3 = (
        -_atan_branch(A - B, d1, den3)
        * cbeta
        / 12.0
        * (4.0 * ca - 3.0 * cb * r / sb)
    )

    return p_a + p_bI + p_b0 + p_1 + p_2 + p_3


# ----------------------------------------------------------------------
# k in {3, 4}: primitive of FB(t, u(t))


def p3B_sum(t, r, ca, cb, sb, cbeta, rad: RadicalFrame):
    arc = rad.arc
    A, B = arc.A, arc.B
    sf, cf = math.sin(arc.f), math.cos(arc.f)
    c2f = math.cos(2.0 * arc.f)
    L1s, L1 = rad.lam1sq, rad.lam1
    L14 = L1s * L1s
    L16 = L14 * L1s
    L17 = L16 * L1
    L2, L2s = rad.lam2, rad.lam2sq
    d1 = rad.delta1(t)

    ca1 = sb / 8.0 * (4.0 * A * ca * sf - r * (1.0 - c2f + 2.0 * A * A * c2f))
    ca2 = (
        r * A * (cf * cbeta + cb * sf - B * c2f * sb) + ca * B * sf * sb
    ) / 3.0
    ca3 = r / 16.0 * (
        4.0 * B * cf * cbeta + 4.0 * B * cb * sf + sb * (1.0 - (1.0 + 2.0 * B * B) * c2f)
    )
    p_a = (ca1 + (ca2 + ca3 * t) * t) * t * t

    cA11 = 4.0 * ca * L1s * (A * A * (B * B - 2.0) + 2.0 * L1s) * cf * sb
    cA12 = (
        A * B * (A * A * (2.0 * B * B - 13.0) + 13.0 * L1s) * (cbeta * sf - cb * cf)
        + A * (8.0 + 3.0 * B * B - 5.0 * B**4 + A * A * (9.0 * B * B + 2.0 * B**4 - 8.0)) * cf * sf * sb
    )
    cA21 = -4.0 * A * ca * B * L14 * cf * sb
    cA22 = L1s * (
        (A * A * (2.0 * B * B - 3.0) + 3.0 * L1s) * (cb * cf - cbeta * sf)
        + B * (3.0 * L1s - A * A * (7.0 + 2.0 * B * B)) * cf * sf * sb
    )
    cA31 = -8.0 * ca * L16 * cf * sb
    cA32 = -2.0 * A * L14 * (
        cf * (B * cb + (4.0 + 5.0 * B * B) * sf * sb) - B * cbeta * sf
    )
    cA42 = -6.0 * L16 * ((cb + B * sf * sb) * cf - cbeta * sf)
    p_A = (
        d1
        / (24.0 * L16)
        * (
            (cA11 + cA12 * r)
            + (cA21 + cA22 * r) * t
            + (cA31 + cA32 * r) * t * t
            + (cA42 * r) * t * t * t
        )
    )

    cB1 = -4.0 * A * ca * B * L1s * cf * sb
    cB2 = (
        B * (5.0 * L2s - 4.0 * L1s) * cf * sf * sb
        + (4.0 * L14 + 5.0 * L2s - 4.0 * L1s * (1.0 + L2s)) * (cb * cf - cbeta * sf)
    )
    p_B = (
        L2s
        / (4.0 * L17)
        * _atan_branch(L1, d1, A * B + L2 + L1s * t)
        * (cB1 + cB2 * r)
    )

    return p_a + p_A + p_B


# ----------------------------------------------------------------------
# public surface

_PART_FUNCS = {
    (1, "A"): p1A_sum,
    (1, "B"): p1B_sum,
    (3, "A"): p3A_sum,
    (3, "B"): p3B_sum,
}


def primitive_nonparallel(k: int, part: str, t: float, r: float,
                          tp: TrianglePair, arc: ArcParams) -> float:
    """Value of the named primitive sum at t.

    Strict interior evaluation: raises EdgeError within eps_edge of the
    radical-domain endpoints (use primitive_nonparallel_limit there) and
    DomainError outside the domain.
    """
    if tp.sin_beta <= EPS_BETA:
        raise DomainError("sin(beta) below the analytic-path floor")
    rad = RadicalFrame.from_arc(arc)
    eps = EPS_EDGE_REL * (rad.mu2 - rad.mu1)
    if t < rad.mu1 - 1e-12 or t > rad.mu2 + 1e-12:
        raise DomainError(f"t = {t} outside radical domain")
    if t - rad.mu1 < eps or rad.mu2 - t < eps:
        raise EdgeError(f"t = {t} within eps_edge of a radical endpoint")
    base = 1 if k in (1, 2) else 3
    ca, cb = coeff_pair(tp, k)
    return _PART_FUNCS[(base, part)](t, r, ca, cb, tp.sin_beta, tp.cos_beta, rad)


def primitive_nonparallel_limit(k: int, part: str, t: float, r: float,
                                tp: TrianglePair, arc: ArcParams) -> float:
    """Edge-tolerant evaluation: inside the strict interior it delegates;
    within eps_edge of mu1/mu2 it extrapolates from three interior points
    (the primitive behaves like f0 + c sqrt(d) + e d in the distance d)."""
    rad = RadicalFrame.from_arc(arc)
    eps = EPS_EDGE_REL * (rad.mu2 - rad.mu1)
    base = 1 if k in (1, 2) else 3
    ca, cb = coeff_pair(tp, k)
    func = _PART_FUNCS[(base, part)]

    def val(tt):
        return func(tt, r, ca, cb, tp.sin_beta, tp.cos_beta, rad)

    near_lo = t - rad.mu1 < eps
    near_hi = rad.mu2 - t < eps
    if not (near_lo or near_hi):
        return val(t)
    h = 1e-6 * (rad.mu2 - rad.mu1)
    edge = rad.mu1 if near_lo else rad.mu2
    sgn = 1.0 if near_lo else -1.0
    f1 = val(edge + sgn * h)
    f2 = val(edge + sgn * h / 4.0)
    f3 = val(edge + sgn * h / 16.0)
    e1 = 2.0 * f2 - f1
    e2 = 2.0 * f3 - f2
    return (4.0 * e2 - e1) / 3.0


def _int_tn_delta(n: int, t: float) -> float:
    """Antiderivative of t^n * sqrt(1 - t^2), n = 0..3."""
    d = math.sqrt(max(1.0 - t * t, 0.0))
    if n == 0:
        return 0.5 * (t * d + math.asin(max(-1.0, min(1.0, t))))
    if n == 1:
        return -(d**3) / 3.0
    if n == 2:
        return -t * d**3 / 4.0 + 0.125 * (t * d + math.asin(max(-1.0, min(1.0, t))))
    if n == 3:
        return d**5 / 5.0 - d**3 / 3.0
    raise ValueError(n)


def primitive_const_phi(k: int, t: float, r: float, tp: TrianglePair,
                        phi_const: float) -> float:
    """Antiderivative of J_k(t, phi_const) in t: a polynomial plus
    t^n sqrt(1 - t^2) reductions."""
    if tp.sin_beta <= EPS_BETA:
        raise DomainError("sin(beta) below the analytic-path floor")
    ca, cb = coeff_pair(tp, k)
    sb, cbeta = tp.sin_beta, tp.cos_beta
    u, cp = math.sin(phi_const), math.cos(phi_const)
    quart = 0.5 * t * t - 0.25 * t**4
    if k in (1, 2):
        poly = _poly_1A(t, r, ca, cb, sb, cbeta)
        val = phi_const * poly
        val += 0.5 * cb * r * sb * u * cp * quart
        val -= cp * (ca * sb * _int_tn_delta(1, t) + 2.0 * cb * r * cbeta * _int_tn_delta(2, t))
        return val
    poly = _poly_3A(t, r, ca, cb, sb, cbeta)
    val = phi_const * poly
    val += r * cbeta * u * _int_tn_delta(2, t)
    val -= cp * (ca * sb * _int_tn_delta(1, t) + cb * r * _int_tn_delta(2, t))
    val -= 0.5 * r * sb * u * u * quart
    return val


# ----------------------------------------------------------------------
# parallel case


def primitive_parallel_general(phi: float, cA: float, cB: float, cC: float,
                               cD: float, c: float, d: float, e: float = 0.0) -> float:
    """phi-antiderivative of Fp(y_B(phi), phi) with
    Fp(y, phi) = (A + B cos phi + C sin phi) y + D y^2 / 2 and the bound
    y_B(phi) = c + d sin phi + e cos phi."""
    s, co = math.sin(phi), math.cos(phi)
    s2, c2 = math.sin(2.0 * phi), math.cos(2.0 * phi)
    # coefficients of 1, sin, cos, sin^2, cos^2, sin*cos in the integrand
    k0 = cA * c + 0.5 * cD * c * c
    ks = cA * d + cC * c + cD * c * d
    kc = cA * e + cB * c + cD * c * e
    kss = cC * d + 0.5 * cD * d * d
    kcc = cB * e + 0.5 * cD * e * e
    ksc = cB * d + cC * e + cD * d * e
    return (
        k0 * phi
        - ks * co
        + kc * s
        + kss * (0.5 * phi - 0.25 * s2)
        + kcc * (0.5 * phi + 0.25 * s2)
        - ksc * 0.25 * c2
    )


def primitive_parallel(phi: float, coeffs, bound) -> float:
    """Printed parallel-case primitive: coeffs = (A, B, C, D) of the linear
    integrand, bound = (c, d) of y_B = c + d sin(phi)."""
    cA, cB, cC, cD = coeffs
    c, d = bound
    return primitive_parallel_general(phi, cA, cB, cC, cD, c, d, 0.0)
