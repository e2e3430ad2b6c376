"""Chord-length distributions of polyhedra.

The boundary of a polyhedron is split into facet pairs; each pair contributes
an integral that reduces, facet pair by facet pair, to closed-form primitives.
The package computes the chord-length distribution gamma''(r) by three
mutually checking routes (direct 2D quadrature, reduced 1D quadrature, fully
analytic primitives) plus parallel-facet handling, and validates the result
against Monte Carlo oracles.
"""

__version__ = "0.1.0"

from .mesh import (
    Polyhedron,
    MeshStats,
    ParseError,
    TopologyError,
    PlanarityError,
    load_mesh,
    measure,
)
from .pairframe import PairFrame, TrianglePair, classify_pair, build_triangle_pairs

__all__ = [
    "Polyhedron",
    "MeshStats",
    "ParseError",
    "TopologyError",
    "PlanarityError",
    "load_mesh",
    "measure",
    "PairFrame",
    "TrianglePair",
    "classify_pair",
    "build_triangle_pairs",
    "CLDCurve",
    "cld",
    "gamma_reconstruct",
    "__version__",
]
