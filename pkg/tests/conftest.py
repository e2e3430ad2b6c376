import math

import numpy as np
import pytest

from polychord.mesh import build_polyhedron
from polychord.pairframe import TrianglePair, side_coefficients

CUBE_OFF = """OFF
8 6 12
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
4 0 3 2 1
4 4 5 6 7
4 0 1 5 4
4 1 2 6 5
4 2 3 7 6
4 3 0 4 7
"""

def regular_tetrahedron():
    v = np.array(
        [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ]
    ) / (2.0 * math.sqrt(2.0))  # edge length 1
    facets = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]
    return build_polyhedron(v, facets)


def regular_octahedron():
    v = np.array(
        [
            [1, 0, 0],
            [-1, 0, 0],
            [0, 1, 0],
            [0, -1, 0],
            [0, 0, 1],
            [0, 0, -1],
        ],
        dtype=float,
    )
    facets = [
        (0, 2, 4),
        (2, 1, 4),
        (1, 3, 4),
        (3, 0, 4),
        (2, 0, 5),
        (1, 2, 5),
        (3, 1, 5),
        (0, 3, 5),
    ]
    return build_polyhedron(v, facets)


def icosahedron():
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    v = np.array(
        [
            [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
            [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
            [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
        ],
        dtype=float,
    )
    facets = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    return build_polyhedron(v, facets)


@pytest.fixture(scope="session")
def cube():
    from polychord.mesh import parse_off

    return parse_off(CUBE_OFF)


@pytest.fixture(scope="session")
def tetra():
    return regular_tetrahedron()


@pytest.fixture(scope="session")
def octa():
    return regular_octahedron()


@pytest.fixture
def cube_off_text():
    return CUBE_OFF


def random_hull(rng, n_points=20, scale=1.0):
    """Convex hull of random points as a Polyhedron with polygon facets."""
    from scipy.spatial import ConvexHull

    pts = rng.standard_normal((n_points, 3)) * scale
    hull = ConvexHull(pts)
    # qhull triangulates facets; merge coplanar triangles is unnecessary for
    # our purposes, triangle facets are valid polygons.  Re-orient each
    # simplex outward.
    center = pts[hull.vertices].mean(axis=0)
    facets = []
    for simplex, eq in zip(hull.simplices, hull.equations):
        tri = list(simplex)
        n = eq[:3]
        v0, v1, v2 = pts[tri]
        if np.dot(np.cross(v1 - v0, v2 - v0), n) < 0:
            tri = tri[::-1]
        facets.append(tuple(tri))
    return build_polyhedron(pts, facets)


def random_triangle_pair(rng, kind="nonparallel"):
    """Random TrianglePair record, built through side_coefficients so the
    become-canonical invariants hold by construction."""

    def tri(y_lo, y_hi, apex_up):
        xs = np.sort(rng.uniform(-1.2, 1.2, size=2))
        if xs[1] - xs[0] < 0.1:
            xs[1] = xs[0] + 0.1
        apex_x = rng.uniform(-1.2, 1.2)
        if apex_up:
            return np.array([[xs[0], y_lo], [xs[1], y_lo], [apex_x, y_hi]])
        return np.array([[xs[0], y_hi], [xs[1], y_hi], [apex_x, y_lo]])

    if kind == "parallel":
        y_M = rng.uniform(0.3, 1.2)
        t_u = tri(0.0, y_M, apex_up=bool(rng.integers(2)))
        # normalize base to y=0 apex up as the builder does
        if np.sum(np.isclose(t_u[:, 1], 0.0)) != 2:
            t_u = np.array([[v[0], y_M - v[1]] for v in t_u])
        Ylo = rng.uniform(-0.8, 0.4)
        Yhi = Ylo + rng.uniform(0.3, 1.0)
        t_p = tri(Ylo, Yhi, apex_up=bool(rng.integers(2)))
        cu = side_coefficients(t_u)
        cp = side_coefficients(t_p, primed=True)
        h = rng.uniform(0.2, 1.0)
        return TrianglePair(
            kind="parallel", beta=math.nan, h=h, sigma=1,
            a=cu.a, b=cu.b, A=cu.A, B=cu.B, y_m=cu.y_m, y_M=cu.y_M,
            ap=cp.a, bp=cp.b, Ap=cp.A, Bp=cp.B, Y_m=cp.y_m, Y_M=cp.y_M,
            sin_beta=0.0, cos_beta=0.0,
            tri_xy=tuple(map(tuple, t_u)), tri_XY=tuple(map(tuple, t_p)),
        )

    beta = rng.uniform(0.25, math.pi - 0.25)
    y_lo = rng.uniform(0.0, 0.5)
    y_hi = y_lo + rng.uniform(0.3, 1.0)
    t_u = tri(y_lo, y_hi, apex_up=bool(rng.integers(2)))
    Y_lo = rng.uniform(0.0, 0.5)
    Y_hi = Y_lo + rng.uniform(0.3, 1.0)
    t_p = tri(Y_lo, Y_hi, apex_up=bool(rng.integers(2)))
    cu = side_coefficients(t_u)
    cp = side_coefficients(t_p, primed=True)
    return TrianglePair(
        kind="nonparallel", beta=beta, h=math.nan, sigma=1,
        a=cu.a, b=cu.b, A=cu.A, B=cu.B, y_m=cu.y_m, y_M=cu.y_M,
        ap=cp.a, bp=cp.b, Ap=cp.A, Bp=cp.B, Y_m=cp.y_m, Y_M=cp.y_M,
        sin_beta=math.sin(beta), cos_beta=math.cos(beta),
        tri_xy=tuple(map(tuple, t_u)), tri_XY=tuple(map(tuple, t_p)),
    )
