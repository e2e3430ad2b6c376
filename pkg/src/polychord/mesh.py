"""Polyhedron ingestion, validation and global measures.

A mesh is a closed, orientable surface made of planar polygonal facets with
outward normals.  Facets are kept as polygons; triangulation happens later,
per facet pair, because the cutting direction depends on the pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# Facet planarity tolerance, relative to the diameter.  Out-of-plane facets
# are rejected, never repaired: a silent repair would corrupt the side-line
# coefficients of every pair the facet participates in.
EPS_PLANAR = 1e-9


class ParseError(ValueError):
    """Malformed mesh file."""


class TopologyError(ValueError):
    """Surface is not closed/orientable or normals do not point outward."""


class PlanarityError(ValueError):
    """A facet deviates from its best plane beyond tolerance."""


@dataclass(frozen=True)
class MeshStats:
    volume: float
    area: float
    diameter: float


@dataclass(frozen=True)
class Polyhedron:
    """Immutable watertight polyhedron with per-facet planes.

    vertices   : (N, 3) float array
    facets     : tuple of vertex-index loops, counter-clockwise seen from
                 outside
    normals    : (F, 3) outward unit normals
    offsets    : (F,) plane offsets, n . x = d on facet f
    convex     : True when every vertex lies inside every facet half-space
                 (the chord-tossing oracle is only valid for convex bodies)
    diameter   : max pairwise vertex distance
    """

    vertices: np.ndarray
    facets: tuple
    normals: np.ndarray
    offsets: np.ndarray
    convex: bool
    diameter: float

    def facet_vertices(self, i: int) -> np.ndarray:
        return self.vertices[list(self.facets[i])]

    def facet_area(self, i: int) -> float:
        loop = self.facet_vertices(i)
        s = np.zeros(3)
        for k in range(len(loop)):
            s += np.cross(loop[k], loop[(k + 1) % len(loop)])
        return 0.5 * float(np.linalg.norm(s))

    def facet_centroid(self, i: int) -> np.ndarray:
        return self.facet_vertices(i).mean(axis=0)

    def transformed(self, rotation=None, translation=None) -> "Polyhedron":
        """Rigid motion; rotation is a 3x3 orthogonal matrix."""
        v = self.vertices
        if rotation is not None:
            v = v @ np.asarray(rotation, dtype=float).T
        if translation is not None:
            v = v + np.asarray(translation, dtype=float)
        return build_polyhedron(v, self.facets)

    def scaled(self, s: float) -> "Polyhedron":
        return build_polyhedron(self.vertices * float(s), self.facets)


def _newell_normal(loop: np.ndarray) -> np.ndarray:
    s = np.zeros(3)
    for k in range(len(loop)):
        a, b = loop[k], loop[(k + 1) % len(loop)]
        s += np.cross(a, b)
    return s


def build_polyhedron(vertices, facets) -> Polyhedron:
    """Validate raw vertex/facet data and derive facet planes.

    Raises ParseError / TopologyError / PlanarityError per the failure mode.
    """
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 3:
        raise ParseError("vertices must be an (N, 3) array")
    if not np.all(np.isfinite(v)):
        raise ParseError("non-finite vertex coordinate")
    facets = tuple(tuple(int(i) for i in f) for f in facets)
    if len(facets) < 4:
        raise TopologyError("a closed polyhedron needs at least 4 facets")
    n_v = len(v)
    for f in facets:
        if len(f) < 3:
            raise ParseError("facet with fewer than 3 vertices")
        if len(set(f)) != len(f):
            raise ParseError("facet repeats a vertex")
        if min(f) < 0 or max(f) >= n_v:
            raise ParseError("vertex index out of range")

    # Diameter before any tolerance work: every epsilon below is relative.
    diff = v[:, None, :] - v[None, :, :]
    diameter = float(np.sqrt((diff * diff).sum(axis=2).max()))
    if diameter <= 0.0:
        raise TopologyError("degenerate vertex set (zero diameter)")

    # Closed orientable surface: every directed edge used exactly once and
    # its reverse exactly once.
    edges = {}
    for fi, f in enumerate(facets):
        for k in range(len(f)):
            e = (f[k], f[(k + 1) % len(f)])
            if e in edges:
                raise TopologyError(f"directed edge {e} used twice")
            edges[e] = fi
    for a, b in edges:
        if (b, a) not in edges:
            raise TopologyError(
                f"edge ({a}, {b}) has no opposing twin; surface open or misoriented"
            )

    normals = np.zeros((len(facets), 3))
    offsets = np.zeros(len(facets))
    for fi, f in enumerate(facets):
        loop = v[list(f)]
        nrm = _newell_normal(loop)
        ln = np.linalg.norm(nrm)
        if ln <= 1e-14 * diameter * diameter:
            raise TopologyError(f"facet {fi} has zero area")
        nrm = nrm / ln
        d = float(np.mean(loop @ nrm))
        dev = float(np.max(np.abs(loop @ nrm - d)))
        if dev > EPS_PLANAR * diameter:
            raise PlanarityError(
                f"facet {fi} out of plane by {dev:.3e} (> {EPS_PLANAR:g} * D)"
            )
        normals[fi] = nrm
        offsets[fi] = d

    # Outward orientation: divergence theorem volume must be positive.
    vol = 0.0
    for fi, f in enumerate(facets):
        loop = v[list(f)]
        s = _newell_normal(loop)
        vol += offsets[fi] * 0.5 * float(np.linalg.norm(s))
    vol /= 3.0
    if vol <= 0.0:
        raise TopologyError("signed volume is not positive; normals point inward")

    tol = 1e-9 * diameter
    convex = True
    for fi in range(len(facets)):
        if np.any(v @ normals[fi] > offsets[fi] + tol):
            convex = False
            break

    return Polyhedron(
        vertices=v,
        facets=facets,
        normals=normals,
        offsets=offsets,
        convex=convex,
        diameter=diameter,
    )


def parse_off(text: str) -> Polyhedron:
    """ASCII OFF: 'OFF' header, counts line, vertex lines, facet lines."""
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    if not tokens:
        raise ParseError("empty OFF file")
    pos = 0
    if tokens[0].upper() == "OFF":
        pos = 1
    try:
        n_v, n_f = int(tokens[pos]), int(tokens[pos + 1])
        int(tokens[pos + 2])  # edge count, unused
        pos += 3
        verts = []
        for _ in range(n_v):
            verts.append([float(tokens[pos]), float(tokens[pos + 1]), float(tokens[pos + 2])])
            pos += 3
        facets = []
        for _ in range(n_f):
            k = int(tokens[pos])
            pos += 1
            facets.append([int(tokens[pos + j]) for j in range(k)])
            pos += k
    except (IndexError, ValueError) as exc:
        raise ParseError(f"truncated or malformed OFF data: {exc}") from exc
    return build_polyhedron(np.array(verts), facets)


def parse_obj(text: str) -> Polyhedron:
    """OBJ subset: only 'v' and 'f' records; 1-based indices, 'v/vt/vn' split."""
    verts, facets = [], []
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v":
            if len(parts) < 4:
                raise ParseError(f"line {ln}: vertex needs 3 coordinates")
            try:
                verts.append([float(x) for x in parts[1:4]])
            except ValueError as exc:
                raise ParseError(f"line {ln}: bad vertex coordinate") from exc
        elif parts[0] == "f":
            try:
                idx = [int(tok.split("/")[0]) for tok in parts[1:]]
            except ValueError as exc:
                raise ParseError(f"line {ln}: bad facet index") from exc
            if any(i == 0 for i in idx):
                raise ParseError(f"line {ln}: OBJ indices are 1-based")
            idx = [i - 1 if i > 0 else len(verts) + i for i in idx]
            facets.append(idx)
        # all other record types ignored
    if not verts or not facets:
        raise ParseError("OBJ subset needs both v and f records")
    return build_polyhedron(np.array(verts), facets)


def load_mesh(path, fmt: str | None = None) -> Polyhedron:
    """Load an OFF or OBJ-subset mesh file and validate it."""
    path = Path(path)
    if fmt is None:
        fmt = path.suffix.lower().lstrip(".")
    fmt = fmt.lower()
    text = path.read_text()
    if fmt == "off":
        return parse_off(text)
    if fmt == "obj":
        return parse_obj(text)
    raise ParseError(f"unsupported mesh format {fmt!r} (expected off or obj)")


def measure(p: Polyhedron) -> MeshStats:
    """Volume by divergence theorem, area by polygon sums, max vertex span."""
    vol = 0.0
    area = 0.0
    for fi in range(len(p.facets)):
        a = p.facet_area(fi)
        area += a
        vol += p.offsets[fi] * a
    vol /= 3.0
    return MeshStats(volume=vol, area=area, diameter=p.diameter)


def sanity_bounds(stats: MeshStats) -> bool:
    """D >= (6V/pi)^(1/3): a body fits no more volume than a ball of its span."""
    return stats.diameter >= (6.0 * stats.volume / math.pi) ** (1.0 / 3.0) - 1e-12
