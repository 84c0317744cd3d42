from fractions import Fraction as F

import pytest

import fixtures
from tetrabeacon.decomposition import (DecompositionError, TetDecomposition,
                                       connected_subsets, dual_graph,
                                       leaf_rooted_spanning_tree,
                                       shared_feature_of_set, validate)
from tetrabeacon.generators import SpiralParams, spiral_polyhedron
from tetrabeacon.geometry import FeatureKind, Point3, Tetrahedron


def test_validate_generated_spiral_is_clean():
    assert validate(spiral_polyhedron(SpiralParams(3))).ok


def test_validate_duplicate_tetrahedron():
    d = fixtures.two_tets()
    dd = TetDecomposition(d.vertices, d.tets + [d.tets[1]], "dup")
    report = validate(dd)
    assert not report.ok
    assert any("duplicate" in v for v in report.violations)


def test_validate_repeated_vertex_index():
    verts = [Point3(F(0), F(0), F(0)), Point3(F(1), F(0), F(0)),
             Point3(F(0), F(1), F(0)), Point3(F(0), F(0), F(1))]
    d = TetDecomposition(verts, [Tetrahedron((0, 1, 2, 2))], "broken")
    report = validate(d)
    assert any("degenerate" in v for v in report.violations)


def test_validate_duplicate_coordinates():
    d = fixtures.single_tet()
    verts = d.vertices + [d.vertices[0]]
    dd = TetDecomposition(verts, d.tets, "dupcoord")
    report = validate(dd)
    assert any("identical coordinates" in v for v in report.violations)


def test_validate_overlap():
    base = fixtures.single_tet()
    eps = F(1, 10)
    verts = base.vertices + [Point3(v.x + eps, v.y + eps, v.z + eps)
                             for v in base.vertices]
    dd = TetDecomposition(verts, [base.tets[0], Tetrahedron((4, 5, 6, 7))],
                          "overlap")
    report = validate(dd)
    assert any("overlapping interiors" in v for v in report.violations)


def test_validate_disconnected():
    base = fixtures.single_tet()
    verts = base.vertices + [Point3(v.x + 10, v.y, v.z) for v in base.vertices]
    dd = TetDecomposition(verts, [base.tets[0], Tetrahedron((4, 5, 6, 7))],
                          "apart")
    report = validate(dd)
    assert any("disconnected" in v for v in report.violations)


def test_dual_graph_spiral_c1_single_edge():
    g = dual_graph(spiral_polyhedron(SpiralParams(1)))
    assert g.edges() == [(0, 1)]


def test_dual_graph_star_and_path():
    g = dual_graph(fixtures.star5())
    assert g.edges() == [(0, 1), (0, 2), (0, 3), (0, 4)]
    # spiral c=3 is a path on 8 nodes, checked against brute force
    d = spiral_polyhedron(SpiralParams(3))
    g = dual_graph(d)
    brute = []
    for i in range(d.m):
        for j in range(i + 1, d.m):
            if len(d.tets[i].index_set() & d.tets[j].index_set()) == 3:
                brute.append((i, j))
    assert g.edges() == sorted(brute)
    assert g.edges() == [(i, i + 1) for i in range(7)]


def test_dual_graph_degree_bound(corpus):
    for name, d in corpus:
        assert dual_graph(d).max_degree() <= 4, name


def test_spanning_tree_path():
    g = dual_graph(spiral_polyhedron(SpiralParams(2)))
    tree = leaf_rooted_spanning_tree(g)
    assert tree.root == 0
    assert tree.tree_edges() == [(i, i + 1) for i in range(4)]
    assert len(tree.tree_edges()) == g.n - 1


def test_spanning_tree_star_root_is_leaf():
    g = dual_graph(fixtures.star5())
    tree = leaf_rooted_spanning_tree(g)
    assert tree.is_leaf(tree.root)
    assert tree.root != 0  # the hub has degree 4, never a root


def test_spanning_tree_on_cycle_drops_one_edge():
    d = fixtures.edge_ring()
    g = dual_graph(d)
    assert len(g.edges()) == 4  # 4-cycle
    tree = leaf_rooted_spanning_tree(g)
    assert len(tree.tree_edges()) == 3
    assert set(tree.tree_edges()) <= set(g.edges())
    assert tree.is_leaf(tree.root)


def test_spanning_tree_seeds_vary_but_stay_valid():
    d = fixtures.edge_ring()
    g = dual_graph(d)
    for seed in range(5):
        tree = leaf_rooted_spanning_tree(g, seed=seed)
        assert len(tree.tree_edges()) == 3
        assert set(tree.tree_edges()) <= set(g.edges())
        assert tree.is_leaf(tree.root)


def test_spanning_tree_disconnected_raises():
    g = dual_graph(spiral_polyhedron(SpiralParams(2)))
    with pytest.raises(DecompositionError):
        leaf_rooted_spanning_tree(g, nodes=[0, 3])


def test_shared_feature_of_set_pair_is_facet():
    d = spiral_polyhedron(SpiralParams(1))
    feature = shared_feature_of_set(d, [0, 1])
    assert feature.kind is FeatureKind.FACET
    # the shared facet is the first corner triangle q1, r1, z1
    assert feature.indices == (2, 3, 4)


def test_shared_feature_of_set_three_share_edge():
    d = spiral_polyhedron(SpiralParams(3))
    for start in range(1, 5):
        s = [start, start + 1, start + 2]
        feature = shared_feature_of_set(d, s)
        brute = set(d.tets[s[0]].index_set())
        for i in s[1:]:
            brute &= d.tets[i].index_set()
        assert set(feature.indices) == brute
        assert len(feature.indices) >= 2


def test_shared_feature_of_set_ring_shares_edge():
    d = fixtures.edge_ring()
    feature = shared_feature_of_set(d, [0, 1, 2, 3])
    assert set(feature.indices) == {0, 1}


def test_shared_feature_of_set_rejects_bad_sets():
    d = spiral_polyhedron(SpiralParams(3))
    with pytest.raises(DecompositionError):
        shared_feature_of_set(d, [0])
    with pytest.raises(DecompositionError):
        shared_feature_of_set(d, [0, 5])  # not adjacent
    with pytest.raises(DecompositionError):
        shared_feature_of_set(d, [0, 1, 2, 3, 4])


def test_connected_subsets_on_path():
    g = dual_graph(spiral_polyhedron(SpiralParams(2)))  # path on 5 nodes
    assert connected_subsets(g, 2) == [(i, i + 1) for i in range(4)]
    assert connected_subsets(g, 3) == [(i, i + 1, i + 2) for i in range(3)]
    assert connected_subsets(g, 4) == [(i, i + 1, i + 2, i + 3)
                                       for i in range(2)]


def test_lemma_holds_on_fixture_battery():
    for d in fixtures.all_fixtures():
        g = dual_graph(d)
        for size, minimum in ((2, 3), (3, 2), (4, 1)):
            for subset in connected_subsets(g, size):
                feature = shared_feature_of_set(d, list(subset), g)
                assert len(feature.indices) >= minimum, (d.label, subset)


def test_fixture_battery_validates():
    for d in fixtures.all_fixtures():
        assert validate(d).ok, d.label
