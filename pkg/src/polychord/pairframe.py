"""Canonical frames and triangle decomposition for facet pairs.

For a non-parallel facet pair the frame has x along the plane intersection
line, the first facet in the half-plane {z = 0, y >= 0}, and the second
facet's half-plane reached by rotating the first anticlockwise about x by the
dihedral beta in (0, pi).  Effective normals are nu1 = (0,0,1) and
nu2 = (0, sin b, -cos b); whenever a true outward normal had to be flipped to
match, the pair's sign factor records it (result flips iff exactly one flip).

For a parallel pair the frame has z orthogonal to both planes, the first
facet at z = 0, the second at z = h > 0, and nu1 = nu2 = (0,0,1) with the
same flip bookkeeping.

Both facets are then cut by lines parallel to the frame x axis through every
vertex; each resulting trapezium is bisected by a diagonal.  Every triangle
ends up with one side parallel to x, which is what the side-line reduction
needs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .mesh import Polyhedron

# |n_i x n_j| below this is a parallel pair; above it but with tiny sin(beta)
# the pair is non-parallel yet flagged, the 1/sin(beta) prefactor being an
# error amplifier.
EPS_PARALLEL = 1e-12
EPS_BETA_FLAG = 1e-8


class DegenerateTriangle(ValueError):
    """Triangle with zero height in the frame."""


@dataclass(frozen=True)
class PairFrame:
    """Canonical frame of one ordered facet pair (facet_i, facet_j)."""

    kind: str  # "nonparallel" | "parallel"
    facet_i: int
    facet_j: int
    origin: np.ndarray
    ex: np.ndarray
    ey: np.ndarray
    ez: np.ndarray
    beta: float  # dihedral, nonparallel only
    h: float  # plane separation, parallel only
    sigma: int
    degenerate: bool  # coplanar pair: contributes identically zero
    near_parallel: bool  # sin(beta) < EPS_BETA_FLAG

    @property
    def eY(self) -> np.ndarray:
        """In-plane ordinate direction of the second facet."""
        if self.kind == "parallel":
            return self.ey
        return math.cos(self.beta) * self.ey + math.sin(self.beta) * self.ez

    def to_2d(self, points: np.ndarray, primed: bool) -> np.ndarray:
        rel = np.atleast_2d(points) - self.origin
        ay = self.eY if primed else self.ey
        return np.stack([rel @ self.ex, rel @ ay], axis=-1)

    def to_3d(self, xy: np.ndarray, primed: bool) -> np.ndarray:
        xy = np.atleast_2d(xy)
        ay = self.eY if primed else self.ey
        out = self.origin + np.outer(xy[:, 0], self.ex) + np.outer(xy[:, 1], ay)
        if primed and self.kind == "parallel":
            out = out + self.h * self.ez
        return out


@dataclass(frozen=True)
class SideCoeffs:
    """x = a + b*y left side, x = A + B*y right side, for y in [y_m, y_M]."""

    a: float
    b: float
    A: float
    B: float
    y_m: float
    y_M: float


@dataclass(frozen=True)
class TrianglePair:
    """One triangle from each facet of a pair, in the pair's canonical frame."""

    kind: str
    beta: float
    h: float
    sigma: int
    # unprimed triangle (facet i): x = a + b y and x = A + B y on [y_m, y_M]
    a: float
    b: float
    A: float
    B: float
    y_m: float
    y_M: float
    # primed triangle (facet j)
    ap: float
    bp: float
    Ap: float
    Bp: float
    Y_m: float
    Y_M: float
    sin_beta: float
    cos_beta: float
    tri_xy: tuple  # 3 (x, y) vertices, frame coords of the unprimed triangle
    tri_XY: tuple
    near_parallel: bool = False

    def to_json(self) -> str:
        d = asdict(self)
        return json.dumps(d, sort_keys=True)


def _plane_point(n1, d1, n2, d2):
    """Minimum-norm point on the intersection of two planes n.x = d."""
    g11, g12, g22 = n1 @ n1, n1 @ n2, n2 @ n2
    det = g11 * g22 - g12 * g12
    alpha = (d1 * g22 - d2 * g12) / det
    beta = (d2 * g11 - d1 * g12) / det
    return alpha * n1 + beta * n2


def _side_of(points_2d_y: np.ndarray) -> float:
    """Dominant sign of a coordinate set; the farthest point decides."""
    k = int(np.argmax(np.abs(points_2d_y)))
    return 1.0 if points_2d_y[k] >= 0.0 else -1.0


def classify_pair(p: Polyhedron, i: int, j: int) -> PairFrame:
    """Build the canonical frame of the ordered facet pair (i, j)."""
    if i == j:
        raise ValueError("a facet is never paired with itself (g_ii = 0)")
    n1, n2 = p.normals[i], p.normals[j]
    d1, d2 = p.offsets[i], p.offsets[j]
    cr = np.cross(n1, n2)
    sin_planes = float(np.linalg.norm(cr))

    if sin_planes <= EPS_PARALLEL:
        # Parallel planes: z from plane i towards plane j.
        ci, cj = p.facet_centroid(i), p.facet_centroid(j)
        sep = float((cj - ci) @ n1)
        ez = n1 if sep >= 0.0 else -n1
        h = abs(sep)
        degenerate = h <= 1e-12 * p.diameter
        loop_i = p.facet_vertices(i)
        e0 = loop_i[1] - loop_i[0]  # deterministic x: first edge of facet i
        e0 = e0 - (e0 @ ez) * ez
        ex = e0 / np.linalg.norm(e0)
        ey = np.cross(ez, ex)
        flips = int(n1 @ ez < 0.0) + int(n2 @ ez < 0.0)
        return PairFrame(
            kind="parallel",
            facet_i=i,
            facet_j=j,
            origin=loop_i[0].copy(),
            ex=ex,
            ey=ey,
            ez=ez,
            beta=math.nan,
            h=h,
            sigma=-1 if flips % 2 else 1,
            degenerate=degenerate,
            near_parallel=False,
        )

    ex = cr / sin_planes
    origin = _plane_point(n1, d1, n2, d2)
    u1 = np.cross(n1, ex)  # in plane i, orthogonal to the intersection line
    s1 = _side_of((p.facet_vertices(i) - origin) @ u1)
    ey = s1 * u1
    ez = np.cross(ex, ey)
    u2 = np.cross(n2, ex)
    s2 = _side_of((p.facet_vertices(j) - origin) @ u2)
    eY = s2 * u2
    beta = math.atan2(float(eY @ ez), float(eY @ ey))
    if beta < 0.0:
        ex, ez = -ex, -ez
        beta = -beta
    nu2 = math.sin(beta) * ey - math.cos(beta) * ez
    flips = int(n1 @ ez < 0.0) + int(n2 @ nu2 < 0.0)
    return PairFrame(
        kind="nonparallel",
        facet_i=i,
        facet_j=j,
        origin=origin,
        ex=ex,
        ey=ey,
        ez=ez,
        beta=beta,
        h=math.nan,
        sigma=-1 if flips % 2 else 1,
        degenerate=False,
        near_parallel=math.sin(beta) < EPS_BETA_FLAG,
    )


def _merge_collinear(loop: np.ndarray) -> np.ndarray:
    """Drop repeated points and vertices lying on the segment of their
    neighbours; zero-area slivers would otherwise create degenerate pairs."""
    out = []
    n = len(loop)
    for k in range(n):
        prev, cur, nxt = loop[k - 1], loop[k], loop[(k + 1) % n]
        e1, e2 = cur - prev, nxt - cur
        l1, l2 = np.hypot(*e1), np.hypot(*e2)
        if l2 <= 1e-14 * max(l1, 1e-300):
            continue
        cross = e1[0] * e2[1] - e1[1] * e2[0]
        if abs(cross) <= 1e-12 * l1 * l2:
            continue
        out.append(cur)
    return np.array(out) if len(out) >= 3 else loop


def triangulate_polygon_2d(loop: np.ndarray, diagonal_rule: str = "lex"):
    """Cut a simple polygon by horizontal lines through every vertex and
    bisect each trapezium by one diagonal.

    Returns triangles as (3, 2) arrays, each with one horizontal side.  The
    diagonal connects the lexicographically smallest trapezium corner to its
    opposite ("lex"); "antilex" picks the other diagonal.  Either choice is
    valid, the integral being additive over any decomposition; fixing one
    makes output reproducible.
    """
    loop = _merge_collinear(np.asarray(loop, dtype=float))
    ys_raw = np.sort(loop[:, 1])
    scale = max(np.ptp(loop[:, 0]), np.ptp(loop[:, 1]), 1e-300)
    levels = [ys_raw[0]]
    for y in ys_raw[1:]:
        if y - levels[-1] > 1e-12 * scale:
            levels.append(y)
    triangles = []
    n = len(loop)
    edges = [(loop[k], loop[(k + 1) % n]) for k in range(n)]
    for y0, y1 in zip(levels[:-1], levels[1:]):
        span = []
        for a, b in edges:
            lo, hi = (a, b) if a[1] <= b[1] else (b, a)
            if lo[1] <= y0 + 1e-12 * scale and hi[1] >= y1 - 1e-12 * scale:
                dy = hi[1] - lo[1]
                if dy <= 0:
                    continue
                x0 = lo[0] + (hi[0] - lo[0]) * (y0 - lo[1]) / dy
                x1 = lo[0] + (hi[0] - lo[0]) * (y1 - lo[1]) / dy
                span.append((0.5 * (x0 + x1), x0, x1))
        span.sort(key=lambda e: e[0])
        # even-odd pairing: inside runs between consecutive crossings
        for k in range(0, len(span) - 1, 2):
            _, xl0, xl1 = span[k]
            _, xr0, xr1 = span[k + 1]
            bl, br = (xl0, y0), (xr0, y0)
            tl, tr = (xl1, y1), (xr1, y1)
            if xr0 - xl0 <= 1e-12 * scale:  # bottom side degenerate
                triangles.append(np.array([tl, tr, bl]))
                continue
            if xr1 - xl1 <= 1e-12 * scale:  # top side degenerate
                triangles.append(np.array([bl, br, tl]))
                continue
            corners = [bl, br, tl, tr]
            k_min = min(range(4), key=lambda q: (corners[q][0], corners[q][1]))
            use_bl_tr = k_min in (0, 3)
            if diagonal_rule == "antilex":
                use_bl_tr = not use_bl_tr
            if use_bl_tr:
                triangles.append(np.array([bl, br, tr]))
                triangles.append(np.array([bl, tr, tl]))
            else:
                triangles.append(np.array([br, tr, tl]))
                triangles.append(np.array([br, tl, bl]))
    area = abs(_polygon_area(loop))
    out = []
    for t in triangles:
        a2 = abs(
            (t[1, 0] - t[0, 0]) * (t[2, 1] - t[0, 1])
            - (t[2, 0] - t[0, 0]) * (t[1, 1] - t[0, 1])
        )
        if a2 > 2e-14 * max(area, scale * scale):
            out.append(t)
    return out


def _polygon_area(loop: np.ndarray) -> float:
    x, y = loop[:, 0], loop[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def triangulate_for_pair(p: Polyhedron, facet: int, frame: PairFrame, diagonal_rule="lex"):
    """Decompose one facet of the pair into x-parallel-sided triangles, in
    the frame's 2D coordinates of that facet's plane."""
    if facet == frame.facet_i:
        primed = False
    elif facet == frame.facet_j:
        primed = True
    else:
        raise ValueError("facet does not belong to this frame's pair")
    loop2d = frame.to_2d(p.facet_vertices(facet), primed=primed)
    return triangulate_polygon_2d(loop2d, diagonal_rule=diagonal_rule)


def side_coefficients(tri: np.ndarray, primed: bool = False) -> SideCoeffs:
    """Side-line coefficients of a triangle having one horizontal side.

    The horizontal side's endpoints and the apex define the left line
    x = a + b*y (through the left base vertex) and the right line
    x = A + B*y; when the apex sits below the base the roles of y_m and y_M
    exchange automatically.
    """
    tri = np.asarray(tri, dtype=float)
    ys = tri[:, 1]
    scale = max(np.ptp(tri[:, 0]), np.ptp(ys), 1e-300)
    pairs = [(0, 1, 2), (1, 2, 0), (0, 2, 1)]
    base = None
    for i, j, k in pairs:
        if abs(ys[i] - ys[j]) <= 1e-12 * scale:
            base = (i, j, k)
            break
    if base is None:
        raise DegenerateTriangle("no side parallel to the x axis")
    i, j, k = base
    if abs(ys[k] - ys[i]) <= 1e-12 * scale:
        raise DegenerateTriangle("zero height")
    left, right = (i, j) if tri[i, 0] <= tri[j, 0] else (j, i)
    apex = tri[k]
    y_base, y_apex = float(ys[i]), float(ys[k])
    bl = (apex[0] - tri[left, 0]) / (y_apex - y_base)
    al = tri[left, 0] - bl * y_base
    br_ = (apex[0] - tri[right, 0]) / (y_apex - y_base)
    ar = tri[right, 0] - br_ * y_base
    return SideCoeffs(
        a=float(al),
        b=float(bl),
        A=float(ar),
        B=float(br_),
        y_m=min(y_base, y_apex),
        y_M=max(y_base, y_apex),
    )


def _flip_x(v):
    return np.stack([-v[..., 0], v[..., 1]], axis=-1)


def _flip_y(v):
    return np.stack([v[..., 0], -v[..., 1]], axis=-1)


def _subframe_variants(frame: PairFrame):
    """Sign variants handling triangles that fall on the negative side of the
    intersection line (possible only for facets of non-convex solids that
    straddle the other plane).  Keyed by (sign_y, sign_Y); each entry maps
    2D coords of both facets into a right-handed frame where both triangles
    sit at positive ordinate, with the adjusted dihedral and the sign-factor
    flip (flipping one half-plane flips one effective normal)."""
    b = frame.beta
    return {
        (1, 1): (lambda xy: xy, lambda XY: XY, b, 1),
        (-1, 1): (lambda xy: -xy, _flip_x, math.pi - b, -1),
        (1, -1): (_flip_x, lambda XY: -XY, math.pi - b, -1),
        (-1, -1): (_flip_y, _flip_y, b, 1),
    }


def build_triangle_pairs(p: Polyhedron, i: int, j: int, diagonal_rule="lex"):
    """Frame plus all TrianglePair records for the unordered facet pair."""
    frame = classify_pair(p, i, j)
    pairs = []
    if frame.degenerate:
        return frame, pairs
    tris_i = triangulate_for_pair(p, i, frame, diagonal_rule)
    tris_j = triangulate_for_pair(p, j, frame, diagonal_rule)

    for t_u in tris_i:
        for t_p in tris_j:
            if frame.kind == "parallel":
                # Per-pair normalization: apex of the unprimed triangle up,
                # its base on y = 0.  A y-flip is a rotation by pi about z,
                # so x flips too and both triangles transform together; h and
                # the sign factor are untouched.
                lo, hi = float(t_u[:, 1].min()), float(t_u[:, 1].max())
                tol = 1e-12 * max(hi - lo, 1e-300)
                base_is_low = int(np.sum(t_u[:, 1] <= lo + tol)) == 2
                if base_is_low:
                    tu2, tp2 = t_u.copy(), t_p.copy()
                    y0 = lo
                else:
                    tu2, tp2 = -t_u, -t_p
                    y0 = float(tu2[:, 1].min())
                tu2 = tu2 - [0.0, y0]
                tp2 = tp2 - [0.0, y0]
                cu = side_coefficients(tu2)
                cp = side_coefficients(tp2, primed=True)
                pairs.append(
                    TrianglePair(
                        kind="parallel",
                        beta=math.nan,
                        h=frame.h,
                        sigma=frame.sigma,
                        a=cu.a, b=cu.b, A=cu.A, B=cu.B, y_m=cu.y_m, y_M=cu.y_M,
                        ap=cp.a, bp=cp.b, Ap=cp.A, Bp=cp.B, Y_m=cp.y_m, Y_M=cp.y_M,
                        sin_beta=0.0, cos_beta=0.0,
                        tri_xy=tuple(map(tuple, tu2)),
                        tri_XY=tuple(map(tuple, tp2)),
                    )
                )
                continue
            sy = 1 if t_u[:, 1].sum() >= 0 else -1
            sY = 1 if t_p[:, 1].sum() >= 0 else -1
            fu, fp, beta_v, flip = _subframe_variants(frame)[(sy, sY)]
            sig = frame.sigma * flip
            tu2, tp2 = fu(t_u), fp(t_p)
            cu = side_coefficients(tu2)
            cp = side_coefficients(tp2, primed=True)
            pairs.append(
                TrianglePair(
                    kind="nonparallel",
                    beta=beta_v,
                    h=math.nan,
                    sigma=sig,
                    a=cu.a, b=cu.b, A=cu.A, B=cu.B, y_m=cu.y_m, y_M=cu.y_M,
                    ap=cp.a, bp=cp.b, Ap=cp.A, Bp=cp.B, Y_m=cp.y_m, Y_M=cp.y_M,
                    sin_beta=math.sin(beta_v), cos_beta=math.cos(beta_v),
                    tri_xy=tuple(map(tuple, tu2)),
                    tri_XY=tuple(map(tuple, tp2)),
                    near_parallel=frame.near_parallel,
                )
            )
    return frame, pairs
