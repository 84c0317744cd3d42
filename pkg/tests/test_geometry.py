from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tetrabeacon.geometry import (Containment, FeatureKind, GeometryError,
                                  Point3, Tetrahedron, orient3d,
                                  orient3d_float, point_in_tetrahedron,
                                  shared_feature, tet_interiors_disjoint)

UNIT = [Point3(F(0), F(0), F(0)), Point3(F(1), F(0), F(0)),
        Point3(F(0), F(1), F(0)), Point3(F(0), F(0), F(1))]

coords = st.fractions(min_value=-20, max_value=20)
points = st.builds(Point3, coords, coords, coords)


def test_orient3d_unit_positive():
    assert orient3d(*UNIT) == 1


def test_orient3d_coplanar():
    a = Point3(F(0), F(0), F(0))
    b = Point3(F(1), F(0), F(0))
    c = Point3(F(0), F(1), F(0))
    d = Point3(F(2), F(3), F(0))
    assert orient3d(a, b, c, d) == 0


def test_orient3d_swap_negates():
    a, b, c, d = UNIT
    assert orient3d(a, c, b, d) == -1


@given(points, points, points, points)
def test_orient3d_antisymmetry(a, b, c, d):
    base = orient3d(a, b, c, d)
    assert orient3d(b, a, c, d) == -base
    assert orient3d(a, c, b, d) == -base
    assert orient3d(a, b, d, c) == -base


@given(points, points, points, points)
def test_orient3d_float_filter_agrees(a, b, c, d):
    det, errbound = orient3d_float(a, b, c, d)
    if abs(det) > errbound:
        expected = 1 if det > 0 else -1
        assert orient3d(a, b, c, d) == expected


def test_point_in_tetrahedron_centroid():
    centroid = Point3(F(1, 4), F(1, 4), F(1, 4))
    assert point_in_tetrahedron(centroid, Tetrahedron((0, 1, 2, 3)),
                                UNIT) is Containment.INTERIOR


def test_point_in_tetrahedron_vertex_is_boundary():
    tet = Tetrahedron((0, 1, 2, 3))
    for v in UNIT:
        assert point_in_tetrahedron(v, tet, UNIT) is Containment.BOUNDARY


def test_point_in_tetrahedron_outside():
    far = Point3(F(5), F(5), F(5))
    assert point_in_tetrahedron(far, Tetrahedron((0, 1, 2, 3)),
                                UNIT) is Containment.OUTSIDE


def test_point_in_degenerate_raises():
    flat = UNIT[:3] + [Point3(F(2), F(3), F(0))]
    with pytest.raises(GeometryError):
        point_in_tetrahedron(Point3(F(0), F(0), F(0)),
                             Tetrahedron((0, 1, 2, 3)), flat)


def test_repeated_index_detected():
    assert not Tetrahedron((0, 1, 2, 2)).well_formed()
    assert Tetrahedron((0, 1, 2, 3)).well_formed()


def test_shared_feature_facet():
    f = shared_feature(Tetrahedron((0, 1, 2, 3)), Tetrahedron((0, 1, 2, 4)))
    assert f.kind is FeatureKind.FACET
    assert f.indices == (0, 1, 2)


def test_shared_feature_edge_vertex_none():
    t = Tetrahedron((0, 1, 2, 3))
    assert shared_feature(t, Tetrahedron((0, 1, 4, 5))).kind is FeatureKind.EDGE
    assert shared_feature(t, Tetrahedron((0, 4, 5, 6))).kind is FeatureKind.VERTEX
    assert shared_feature(t, Tetrahedron((4, 5, 6, 7))).kind is FeatureKind.NONE


@given(st.permutations(range(4)), st.permutations(range(8)))
def test_shared_feature_symmetric(perm, pool):
    t1 = Tetrahedron(tuple(pool[i] for i in range(4)))
    t2 = Tetrahedron(tuple(pool[perm[i] + 2] for i in range(4)))
    assert shared_feature(t1, t2) == shared_feature(t2, t1)


def test_interiors_disjoint_touching():
    shifted = [Point3(p.x + 1, p.y, p.z) for p in UNIT]
    assert tet_interiors_disjoint(UNIT, shifted)


def test_interiors_overlap_detected():
    eps = F(1, 10)
    nudged = [Point3(p.x + eps, p.y + eps, p.z + eps) for p in UNIT]
    assert not tet_interiors_disjoint(UNIT, nudged)


def test_interiors_disjoint_shared_facet():
    mirror = [UNIT[1], UNIT[2], UNIT[3], Point3(F(1), F(1), F(1))]
    assert tet_interiors_disjoint(UNIT, mirror)
