"""Hand-built decompositions exercising specific placement shapes.

Most are cones over planar triangle patches: two cone tets share a facet
exactly when their base triangles share an edge, so any tree of triangles
realizes the same tree as a dual graph, and every tet contains the apex.
The fan and double-chain fixtures are genuinely 3D so the six-tetrahedra
analysis sees nontrivial shared features.
"""

from __future__ import annotations

from fractions import Fraction as F

from tetrabeacon.decomposition import TetDecomposition
from tetrabeacon.geometry import Point3, Tetrahedron


def build(verts, tets, label):
    return TetDecomposition([Point3(*map(F, v)) for v in verts],
                            [Tetrahedron(tuple(t)) for t in tets], label)


def single_tet():
    return build([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)],
                 [(0, 1, 2, 3)], "single")


def two_tets():
    """Two tetrahedra sharing the facet {1,2,3}."""
    return build([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
                  (1, 1, 1)],
                 [(0, 1, 2, 3), (1, 2, 3, 4)], "pair")


def star5():
    """Central tetrahedron with neighbors on all four facets (m=5).

    Selecting the deepest leaf puts three leaf siblings under the center:
    the single-beacon rule (a).
    """
    third = F(1, 3)
    verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
             (third, third, -1), (third, -1, third), (-1, third, third),
             (1, 1, 1)]
    tets = [(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 3, 5), (0, 2, 3, 6),
            (1, 2, 3, 7)]
    return build(verts, tets, "star5")


def strip_with_fork():
    """Cone over a triangle strip ending in two leaves: rule (b)."""
    apex = (1, 1, 2)
    planar = [(0, 0), (2, 0), (1, 2), (3, 2), (2, 4), (4, 4), (0, 4)]
    verts = [(x, y, 0) for x, y in planar] + [apex]
    tets = [(0, 1, 2, 7), (1, 2, 3, 7), (2, 3, 4, 7), (3, 4, 5, 7),
            (2, 4, 6, 7)]
    return build(verts, tets, "strip-fork")


def chain5():
    """Cone over a plain 5-triangle strip: a path dual, rule (c)."""
    apex = (2, 1, 2)
    planar = [(0, 0), (1, 1), (2, 0), (3, 1), (4, 0), (5, 1)]
    verts = [(x, y, 0) for x, y in planar] + [apex]
    tets = [(0, 1, 2, 6), (1, 2, 3, 6), (2, 3, 4, 6), (3, 4, 5, 6)]
    return build(verts, tets, "chain5")


def leaf_plus_chain():
    """Center triangle with a leaf child and a two-chain: rule (d)."""
    apex = (1, F(7, 10), 2)
    planar = [(0, 0), (2, 0), (1, 2), (1, -2), (3, 2), (3, 4), (-1, 2)]
    verts = [(x, y, 0) for x, y in planar] + [apex]
    tets = [(0, 2, 6, 7),   # root triangle on edge P1-P3
            (0, 1, 2, 7),   # center
            (0, 1, 3, 7),   # leaf child
            (1, 2, 4, 7),   # chain
            (2, 4, 5, 7)]   # chain leaf
    return build(verts, tets, "leaf-plus-chain")


def triple_chains():
    """Central tetrahedron with three two-chains and a root leaf (m=8):
    three triples each share an edge of the center, rule (e)."""
    third = F(1, 3)
    a, b, c, d = (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)
    e = (third, third, -1)
    f = (third, -1, third)
    g = (-1, third, third)
    h = (1, 1, 1)

    def beyond(p1, p2, p3, opposite):
        return tuple((F(x1) + F(x2) + F(x3)) * F(2, 3) - F(xo)
                     for x1, x2, x3, xo in zip(p1, p2, p3, opposite))

    verts = [a, b, c, d, e, f, g, h,
             beyond(b, d, f, a), beyond(c, d, g, a), beyond(c, d, h, b)]
    tets = [(0, 1, 2, 4),    # root leaf
            (0, 1, 2, 3),    # center
            (0, 1, 3, 5), (0, 2, 3, 6), (1, 2, 3, 7),    # three branches
            (1, 3, 5, 8), (2, 3, 6, 9), (2, 3, 7, 10)]   # their leaves
    return build(verts, tets, "triple-chains")


def _qfan_points():
    u, w = (0, 0, 0), (0, 0, 1)
    qs = [(1, 0, 0), (1, 1, 0), (0, 1, 0), (-1, 1, 0), (-1, 0, 0)]
    x = (F(-2, 3), F(4, 3), -1)
    y = (F(-10, 9), F(20, 9), F(-2, 3))
    return u, w, qs, x, y


def double_chain():
    """The one shape the single-beacon step cannot handle (m=6).

    A fan around a vertical edge carries the selected chain; a branch
    hangs below the base plane. The six-tetrahedra analysis yields the
    vertex-plus-edge case: one branch four-set shares the fan edge, the
    other shares a vertex off it.
    """
    u, w, qs, x, y = _qfan_points()
    verts = [u, w] + qs + [x, y]
    tets = [(0, 1, 5, 6),   # rear (root)
            (0, 1, 2, 3), (0, 1, 3, 4), (0, 1, 4, 5),   # fan chain
            (0, 4, 5, 7), (4, 5, 7, 8)]                 # lower branch
    return build(verts, tets, "double-chain")


def double_chain_anchored():
    """Same shape with a parent behind the rear tetrahedron (m=7), so the
    multi-beacon step must leave an anchored tetrahedron behind."""
    u, w, qs, x, y = _qfan_points()
    z = (F(-4, 3), F(2, 3), -1)
    verts = [u, w] + qs + [x, y, z]
    tets = [(0, 5, 6, 9),   # parent of the rear (root)
            (0, 1, 2, 3), (0, 1, 3, 4), (0, 1, 4, 5),
            (0, 4, 5, 7), (4, 5, 7, 8),
            (0, 1, 5, 6)]   # rear
    return build(verts, tets, "double-chain-anchored")


def _cone_patch(triangles, planar, label, apex=(1, F(7, 10), 2)):
    verts = [(x, y, 0) for x, y in planar] + [apex]
    apex_id = len(planar)
    tets = [tuple(sorted(t)) + (apex_id,) for t in triangles]
    return build(verts, tets, label)


_PATCH = {1: (0, 0), 2: (2, 0), 3: (1, 2), 4: (1, -2), 5: (3, -2),
          6: (3, 2), 7: (3, 4), 8: (-1, 2), 9: (4, 0), 10: (-1, -2)}


def double_chain_edge_meets_vertex():
    """Double chain where one branch four-set shares an edge containing
    the other's shared vertex: resolves to a five-way shared vertex."""
    p = {k: tuple(map(F, v)) for k, v in _PATCH.items()}
    planar = [p[i] for i in range(1, 9)]
    # ids: P1..P8 -> 0..7, apex -> 8
    tris = [(0, 2, 7),    # rear (P1,P3,P8), root
            (1, 3, 4),    # outer leaf (P2,P4,P5)
            (0, 1, 3),    # (P1,P2,P4)
            (0, 1, 2),    # center (P1,P2,P3)
            (1, 2, 5),    # (P2,P3,P6)
            (2, 5, 6)]    # outer leaf (P3,P6,P7)
    return _cone_patch(tris, planar, "double-chain-edge-meets-vertex")


def double_chain_two_vertices():
    """Double chain where both branch four-sets share only single
    vertices: the off-facet vertex of the center is common to all five."""
    p = {k: tuple(map(F, v)) for k, v in _PATCH.items()}
    planar = [p[i] for i in range(1, 9)] + [p[9]]
    tris = [(0, 2, 7),
            (1, 3, 4),
            (0, 1, 3),
            (0, 1, 2),
            (1, 2, 5),
            (1, 5, 8)]    # second branch leaf rehung on (P2,P6)
    return _cone_patch(tris, planar, "double-chain-two-vertices")


def double_chain_two_edges():
    """Double chain where both branch four-sets share edges; the edges
    meet inside the rear facet."""
    p = {k: tuple(map(F, v)) for k, v in _PATCH.items()}
    planar = [p[i] for i in range(1, 9)] + [p[10]]
    tris = [(0, 2, 7),
            (0, 3, 8),    # first branch leaf rehung on (P1,P4)
            (0, 1, 3),
            (0, 1, 2),
            (1, 2, 5),
            (2, 5, 6)]
    return _cone_patch(tris, planar, "double-chain-two-edges")


def edge_ring():
    """Four tetrahedra wrapping fully around an interior edge: the dual
    graph is a 4-cycle, so any spanning tree drops one edge."""
    verts = [(0, 0, 0), (0, 0, 1),
             (1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)]
    tets = [(0, 1, 2, 3), (0, 1, 3, 4), (0, 1, 4, 5), (0, 1, 5, 2)]
    return build(verts, tets, "edge-ring")


def all_fixtures():
    return [single_tet(), two_tets(), star5(), strip_with_fork(), chain5(),
            leaf_plus_chain(), triple_chains(), double_chain(),
            double_chain_anchored(), double_chain_edge_meets_vertex(),
            double_chain_two_vertices(), double_chain_two_edges(),
            edge_ring()]
