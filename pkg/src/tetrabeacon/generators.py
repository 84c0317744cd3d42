"""Instance generators with exact coordinates.

Four families:

* c-corner spiral polygons (2D) and spiral polyhedra (3D), the tight
  lower-bound family. Their vertices sit at angles that are multiples of
  2*pi/3, so exact coordinates live in Q(sqrt3): x stays rational and y is
  a rational multiple of sqrt(3).
* the three four-tetrahedra configurations (star, line, line sharing an
  edge) used as small structured corpus members,
* stacked-hallway stress towers: levels of three-tetrahedra hallways
  between laterally sheared copies of a triangle, optionally capped and
  refined by interior-point splits. Seeded and fully rational.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .decomposition import DecompositionError, TetDecomposition
from .exact import QSqrt3, Scalar
from .geometry import Point3, Tetrahedron

Point2 = tuple  # (Scalar, Scalar)


@dataclass(frozen=True)
class SpiralParams:
    """Corner count and wall offset of a spiral instance."""

    c: int
    delta: Fraction = Fraction(2, 5)

    def __post_init__(self):
        if self.c < 1:
            raise ValueError(f"corner count must be >= 1, got {self.c}")
        d = Fraction(self.delta)
        if not 0 < d < 1:
            raise ValueError(f"delta must be in (0, 1), got {d}")
        object.__setattr__(self, "delta", d)


def _polar(rho: Fraction, k: int) -> tuple[Scalar, Scalar]:
    """Exact (x, y) of the point at radius rho and angle k * 2pi/3.

    cos is 1 or -1/2 and sin is 0 or +-sqrt(3)/2, so x is rational and y
    is a pure sqrt(3) multiple.
    """
    rho = Fraction(rho)
    r = k % 3
    if r == 0:
        return rho, Fraction(0)
    if r == 1:
        return -rho / 2, QSqrt3(0, rho / 2)
    return -rho / 2, QSqrt3(0, -rho / 2)


def _ring_radius(k: int) -> Fraction:
    return Fraction(k // 3 + 1)


def spiral_polygon(params: SpiralParams) -> list[Point2]:
    """Vertices of the c-corner spiral polygon, counterclockwise.

    Order: s, q_1..q_c, t, r_c..r_1 with s at radius 1 angle 0, q_k and
    r_k at angle k*2pi/3 on radii floor(k/3)+1+delta and floor(k/3)+1,
    and t one step past the last corner.
    """
    c, delta = params.c, params.delta
    s = _polar(Fraction(1), 0)
    t = _polar(_ring_radius(c + 1), c + 1)
    qs = [_polar(_ring_radius(k) + delta, k) for k in range(1, c + 1)]
    rs = [_polar(_ring_radius(k), k) for k in range(1, c + 1)]
    return [s] + qs + [t] + rs[::-1]


def spiral_polyhedron(params: SpiralParams) -> TetDecomposition:
    """The c-corner spiral polyhedron as a tetrahedral decomposition.

    Vertices are s, t, and per corner k the triple (q_k, r_k, z_k) with
    z_k one unit above r_k. Tetrahedra are listed in dual-path order:
    start tet, three per hallway, end tet; m = 3c - 1.
    """
    c, delta = params.c, params.delta
    zero = Fraction(0)
    one = Fraction(1)

    def lift(p: Point2, z) -> Point3:
        return Point3(p[0], p[1], z)

    vertices: list[Point3] = [
        lift(_polar(Fraction(1), 0), zero),              # s
        lift(_polar(_ring_radius(c + 1), c + 1), zero),  # t
    ]
    q_index, r_index, z_index = {}, {}, {}
    for k in range(1, c + 1):
        q = _polar(_ring_radius(k) + delta, k)
        r = _polar(_ring_radius(k), k)
        q_index[k] = len(vertices)
        vertices.append(lift(q, zero))
        r_index[k] = len(vertices)
        vertices.append(lift(r, zero))
        z_index[k] = len(vertices)
        vertices.append(lift(r, one))

    tets: list[tuple[int, int, int, int]] = []
    tets.append((r_index[1], q_index[1], z_index[1], 0))  # start, apex s
    for k in range(1, c):
        tets.append((r_index[k], q_index[k], z_index[k], r_index[k + 1]))
        tets.append((q_index[k], z_index[k], r_index[k + 1], z_index[k + 1]))
        tets.append((r_index[k + 1], q_index[k + 1], z_index[k + 1], q_index[k]))
    tets.append((r_index[c], q_index[c], z_index[c], 1))  # end, apex t

    label = f"spiral3d c={c} delta={delta}"
    return TetDecomposition(vertices, [Tetrahedron(t) for t in tets], label)


def project_to_plane(d: TetDecomposition) -> list[Point2]:
    """Project a spiral polyhedron to the xy-plane: drop z, merge each z_k
    with its r_k, and return exactly the spiral polygon of the same params.

    Rejects inputs that are not structurally a generated spiral polyhedron.
    """
    m = d.m
    if m < 2 or (m + 1) % 3 != 0:
        raise DecompositionError(f"not a spiral polyhedron: m={m}")
    c = (m + 1) // 3
    if len(d.vertices) != 3 * c + 2:
        raise DecompositionError(
            f"not a spiral polyhedron: n={len(d.vertices)}, expected {3 * c + 2}")
    # recover delta from the first corner: radius(q_1) - radius(r_1); both
    # sit at angle 2pi/3 where x = -radius/2.
    q1, r1 = d.vertices[2], d.vertices[3]
    delta = -2 * (_as_fraction(q1.x) - _as_fraction(r1.x))
    reference = spiral_polyhedron(SpiralParams(c, Fraction(delta)))
    if d.vertices != reference.vertices or \
            [t.v for t in d.tets] != [t.v for t in reference.tets]:
        raise DecompositionError("input does not match the spiral construction")
    return spiral_polygon(SpiralParams(c, Fraction(delta)))


def _as_fraction(x: Scalar) -> Fraction:
    if isinstance(x, QSqrt3):
        if x.b != 0:
            raise DecompositionError("expected a rational coordinate")
        return x.a
    return Fraction(x)


FIGURE_NAMES = ("star", "line", "lineSharedEdge")


def figure_configuration(name: str) -> TetDecomposition:
    """Concrete four-tetrahedra decompositions with prescribed dual shape.

    star:            one central tetrahedron, the other three glued on its
                     facets (dual K_{1,3}); all four share one vertex.
    line:            path dual; all four share one vertex.
    lineSharedEdge:  path dual; all four share one edge.
    """
    f = Fraction
    if name == "star":
        vertices = [
            Point3(f(0), f(0), f(0)),    # 0 A, the common vertex is D below
            Point3(f(1), f(0), f(0)),    # 1 B
            Point3(f(0), f(1), f(0)),    # 2 C
            Point3(f(0), f(0), f(1)),    # 3 D
            Point3(f(1, 3), f(1, 3), f(-1)),   # 4 below facet ABC
            Point3(f(1, 3), f(-1), f(1, 3)),   # 5 beyond facet ABD
            Point3(f(-1), f(1, 3), f(1, 3)),   # 6 beyond facet ACD
        ]
        tets = [(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 3, 5), (0, 2, 3, 6)]
    elif name == "line":
        # cones from an apex over a planar triangle strip; the apex is the
        # vertex shared by all four
        vertices = [
            Point3(f(0), f(0), f(1)),   # 0 apex
            Point3(f(0), f(0), f(0)),   # 1
            Point3(f(1), f(1), f(0)),   # 2
            Point3(f(2), f(0), f(0)),   # 3
            Point3(f(3), f(1), f(0)),   # 4
            Point3(f(4), f(0), f(0)),   # 5
            Point3(f(5), f(1), f(0)),   # 6
        ]
        tets = [(0, 1, 2, 3), (0, 2, 3, 4), (0, 3, 4, 5), (0, 4, 5, 6)]
    elif name == "lineSharedEdge":
        # fan of four tetrahedra around the vertical edge 0-1
        vertices = [
            Point3(f(0), f(0), f(0)),   # 0
            Point3(f(0), f(0), f(1)),   # 1
            Point3(f(1), f(0), f(0)),   # 2
            Point3(f(1), f(1), f(0)),   # 3
            Point3(f(0), f(1), f(0)),   # 4
            Point3(f(-1), f(1), f(0)),  # 5
            Point3(f(-1), f(0), f(0)),  # 6
        ]
        tets = [(0, 1, 2, 3), (0, 1, 3, 4), (0, 1, 4, 5), (0, 1, 5, 6)]
    else:
        raise ValueError(f"unknown figure {name!r}; choose from {FIGURE_NAMES}")
    return TetDecomposition([Point3(*v) for v in vertices],
                            [Tetrahedron(t) for t in tets],
                            label=f"figure {name}")


def stacked_hallways(levels: int, seed: int = 0,
                     caps: Optional[int] = None,
                     splits: Optional[int] = None) -> TetDecomposition:
    """Seeded stress instance: a tower of three-tetrahedra hallway levels.

    Level k spans the sheared triangle copies at heights k and k+1; the
    lateral shear is a seeded rational jitter, so levels stay in disjoint
    z-slabs and the decomposition is valid by construction. ``caps`` glues
    0..2 extra tetrahedra on the bottom/top triangles and ``splits``
    refines seeded tetrahedra at their centroid (one tet becomes four).
    Both default to seeded small values.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    rng = random.Random(seed)
    if caps is None:
        caps = rng.randrange(3)
    if splits is None:
        splits = rng.randrange(3)
    if not 0 <= caps <= 2:
        raise ValueError("caps must be 0, 1 or 2")
    if splits < 0:
        raise ValueError("splits must be >= 0")

    f = Fraction
    base = [(f(0), f(0)), (f(2), f(0)), (f(0), f(2))]
    vertices: list[Point3] = []
    level_ids: list[list[int]] = []
    ox, oy = f(0), f(0)
    for k in range(levels + 1):
        ids = []
        for (bx, by) in base:
            ids.append(len(vertices))
            vertices.append(Point3(bx + ox, by + oy, f(k)))
        level_ids.append(ids)
        ox += f(rng.randrange(-8, 9), 16)
        oy += f(rng.randrange(-8, 9), 16)

    tets: list[tuple[int, int, int, int]] = []
    for k in range(levels):
        lo, hi = level_ids[k], level_ids[k + 1]
        rot = rng.randrange(3)
        a0, b0, c0 = (lo[rot], lo[(rot + 1) % 3], lo[(rot + 2) % 3])
        a1, b1, c1 = (hi[rot], hi[(rot + 1) % 3], hi[(rot + 2) % 3])
        tets.append((a0, b0, c0, a1))
        tets.append((b0, c0, a1, b1))
        tets.append((c0, a1, b1, c1))

    if caps >= 1:
        lo = level_ids[0]
        apex = len(vertices)
        pts = [vertices[i] for i in lo]
        vertices.append(Point3(sum(p.x for p in pts) / 3,
                               sum(p.y for p in pts) / 3, f(-1)))
        tets.append((lo[0], lo[1], lo[2], apex))
    if caps == 2:
        hi = level_ids[levels]
        apex = len(vertices)
        pts = [vertices[i] for i in hi]
        vertices.append(Point3(sum(p.x for p in pts) / 3,
                               sum(p.y for p in pts) / 3, f(levels + 1)))
        tets.append((hi[0], hi[1], hi[2], apex))

    for _ in range(splits):
        i = rng.randrange(len(tets))
        a, b, c, dd = tets.pop(i)
        g = len(vertices)
        pa, pb, pc, pd = (vertices[j] for j in (a, b, c, dd))
        vertices.append(Point3((pa.x + pb.x + pc.x + pd.x) / 4,
                               (pa.y + pb.y + pc.y + pd.y) / 4,
                               (pa.z + pb.z + pc.z + pd.z) / 4))
        tets.extend([(a, b, c, g), (a, b, dd, g), (a, c, dd, g), (b, c, dd, g)])

    label = f"tower levels={levels} seed={seed} caps={caps} splits={splits}"
    return TetDecomposition(vertices, [Tetrahedron(t) for t in tets], label)
