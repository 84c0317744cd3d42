"""Exact geometric primitives: points, tetrahedra, orientation and
incidence predicates.

Everything here is pure and exact. Coordinates are ints, Fractions or
:class:`~tetrabeacon.exact.QSqrt3` values; predicates return signs or
enum classifications, never floats. Floating point appears only in the
attraction tracer, behind an explicit conversion.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .exact import Scalar, sign


class Point3(NamedTuple):
    x: Scalar
    y: Scalar
    z: Scalar

    def to_floats(self) -> tuple[float, float, float]:
        return (float(self.x), float(self.y), float(self.z))


class GeometryError(ValueError):
    """Invalid geometric input (degenerate tetrahedron, bad index, ...)."""


@dataclass(frozen=True)
class Tetrahedron:
    """Four vertex indices into a shared vertex table.

    The indices must be pairwise distinct for the tetrahedron to be
    usable; the decomposition validator reports violations rather than
    this constructor, so malformed input files can be diagnosed.
    """

    v: tuple[int, int, int, int]

    def well_formed(self) -> bool:
        return len(set(self.v)) == 4

    def index_set(self) -> frozenset[int]:
        return frozenset(self.v)

    def facets(self) -> list[tuple[int, int, int]]:
        """The four facets as sorted index triples."""
        a, b, c, d = self.v
        return [tri_facet(b, c, d), tri_facet(a, c, d),
                tri_facet(a, b, d), tri_facet(a, b, c)]

    def edges(self) -> list[tuple[int, int]]:
        """All six edges as sorted index pairs (every vertex pair is one)."""
        out = []
        for i in range(4):
            for j in range(i + 1, 4):
                u, w = self.v[i], self.v[j]
                out.append((u, w) if u < w else (w, u))
        return out


def tri_facet(i: int, j: int, k: int) -> tuple[int, int, int]:
    """Canonical (sorted) form of a triangular facet's index triple."""
    if i == j or j == k or i == k:
        raise GeometryError(f"facet has repeated vertex index: {(i, j, k)}")
    return tuple(sorted((i, j, k)))


class Containment(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class FeatureKind(enum.Enum):
    FACET = "facet"
    EDGE = "edge"
    VERTEX = "vertex"
    NONE = "none"


@dataclass(frozen=True)
class SharedFeature:
    """Highest-dimensional vertex-set feature common to two tetrahedra."""

    kind: FeatureKind
    indices: tuple[int, ...]


# -- vector helpers (exact) ---------------------------------------------


def vsub(p: Point3, q: Point3) -> Point3:
    return Point3(p.x - q.x, p.y - q.y, p.z - q.z)


def vdot(p: Point3, q: Point3) -> Scalar:
    return p.x * q.x + p.y * q.y + p.z * q.z


def vcross(p: Point3, q: Point3) -> Point3:
    return Point3(p.y * q.z - p.z * q.y,
                  p.z * q.x - p.x * q.z,
                  p.x * q.y - p.y * q.x)


# -- predicates ----------------------------------------------------------


def orient3d(a: Point3, b: Point3, c: Point3, d: Point3) -> int:
    """Sign of det[b-a, c-a, d-a], computed exactly.

    +1 when d lies on the side of plane abc toward which (b-a)x(c-a)
    points, -1 on the other side, 0 when the four points are coplanar.
    """
    return sign(vdot(vcross(vsub(b, a), vsub(c, a)), vsub(d, a)))


def orient3d_float(a, b, c, d) -> tuple[float, float]:
    """Floating evaluation of the orientation determinant.

    Returns ``(det, errbound)``. The sign of ``det`` is trustworthy only
    when ``abs(det) > errbound``; the bound is deliberately conservative.
    """
    ax, ay, az = (float(a.x), float(a.y), float(a.z))
    bx, by, bz = (float(b.x) - ax, float(b.y) - ay, float(b.z) - az)
    cx, cy, cz = (float(c.x) - ax, float(c.y) - ay, float(c.z) - az)
    dx, dy, dz = (float(d.x) - ax, float(d.y) - ay, float(d.z) - az)
    t1 = cy * dz - cz * dy
    t2 = cz * dx - cx * dz
    t3 = cx * dy - cy * dx
    det = bx * t1 + by * t2 + bz * t3
    permanent = abs(bx) * (abs(cy * dz) + abs(cz * dy)) \
        + abs(by) * (abs(cz * dx) + abs(cx * dz)) \
        + abs(bz) * (abs(cx * dy) + abs(cy * dx))
    return det, 1e-14 * permanent


def point_in_tetrahedron(p: Point3, tet: Tetrahedron,
                         vertices: Sequence[Point3]) -> Containment:
    """Classify p against a tetrahedron by the four orientation signs."""
    a, b, c, d = (vertices[i] for i in tet.v)
    ref = orient3d(a, b, c, d)
    if ref == 0:
        raise GeometryError(f"degenerate tetrahedron {tet.v}")
    signs = (
        orient3d(p, b, c, d),
        orient3d(a, p, c, d),
        orient3d(a, b, p, d),
        orient3d(a, b, c, p),
    )
    if any(s == -ref for s in signs):
        return Containment.OUTSIDE
    if any(s == 0 for s in signs):
        return Containment.BOUNDARY
    return Containment.INTERIOR


def shared_feature(t1: Tetrahedron, t2: Tetrahedron) -> SharedFeature:
    """Common vertex-index feature of two tetrahedra.

    Sharing is by index identity, not coordinate coincidence: the
    decomposition validator rejects inputs where distinct indices carry
    equal coordinates, which makes this exact and symmetric.
    """
    common = tuple(sorted(t1.index_set() & t2.index_set()))
    n = len(common)
    if n >= 4:
        raise GeometryError(f"tetrahedra share all four vertices: {t1.v} / {t2.v}")
    if n == 3:
        return SharedFeature(FeatureKind.FACET, common)
    if n == 2:
        return SharedFeature(FeatureKind.EDGE, common)
    if n == 1:
        return SharedFeature(FeatureKind.VERTEX, common)
    return SharedFeature(FeatureKind.NONE, ())


# -- exact tetrahedron overlap test (separating axis) --------------------


def _projection_range(axis: Point3, pts: list[Point3]):
    values = [vdot(axis, p) for p in pts]
    return min(values), max(values)


def tet_interiors_disjoint(t1_pts: list[Point3], t2_pts: list[Point3]) -> bool:
    """Exact test that two non-degenerate tetrahedra have disjoint interiors.

    Separating-axis test over facet normals and edge-pair cross products;
    touching along shared boundary counts as disjoint. Exact for any
    Scalar coordinates.
    """
    axes: list[Point3] = []
    for pts in (t1_pts, t2_pts):
        a, b, c, d = pts
        axes.append(vcross(vsub(b, a), vsub(c, a)))
        axes.append(vcross(vsub(b, a), vsub(d, a)))
        axes.append(vcross(vsub(c, a), vsub(d, a)))
        axes.append(vcross(vsub(c, b), vsub(d, b)))
    edges1 = [vsub(t1_pts[j], t1_pts[i]) for i in range(4) for j in range(i + 1, 4)]
    edges2 = [vsub(t2_pts[j], t2_pts[i]) for i in range(4) for j in range(i + 1, 4)]
    for e1 in edges1:
        for e2 in edges2:
            axes.append(vcross(e1, e2))
    zero = (0, 0, 0)
    for axis in axes:
        if (sign(axis.x), sign(axis.y), sign(axis.z)) == zero:
            continue
        lo1, hi1 = _projection_range(axis, t1_pts)
        lo2, hi2 = _projection_range(axis, t2_pts)
        if hi1 <= lo2 or hi2 <= lo1:
            return True
    return False


def bounding_box(pts: Sequence[Point3]):
    """Exact axis-aligned bounding box: ((minx,miny,minz),(maxx,maxy,maxz))."""
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    zs = [p.z for p in pts]
    return (min(xs), min(ys), min(zs)), (max(xs), max(ys), max(zs))


def boxes_overlap(b1, b2) -> bool:
    """Open-interval overlap of two exact boxes (touching is no overlap)."""
    (lo1, hi1), (lo2, hi2) = b1, b2
    for k in range(3):
        if hi1[k] <= lo2[k] or hi2[k] <= lo1[k]:
            return False
    return True
