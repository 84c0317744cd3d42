import random

import pytest

import fixtures
from tetrabeacon.attraction import covers
from tetrabeacon.generators import SpiralParams, spiral_polyhedron
from tetrabeacon.placement import place_all
from tetrabeacon.routing import (CoverageCache, falsify_lower_bound, route,
                                 sample_points, verify_all_pairs)


def beacon_points(d, placement):
    return [d.vertices[b].to_floats() for b in placement.beacons]


def test_route_identity_pair_empty_chain():
    d = fixtures.single_tet()
    result = route((0.25, 0.25, 0.25), (0.25, 0.25, 0.25), [], d)
    assert result.routable
    assert result.chain == []


def test_route_single_tet_direct():
    d = fixtures.single_tet()
    for i in range(4):
        for j in range(4):
            if i != j:
                result = route(d.vertices[i], d.vertices[j], [], d)
                assert result.routable
                assert len(result.chain) == 1  # the target itself


def test_route_spiral_c2_needs_beacons():
    d = spiral_polyhedron(SpiralParams(2))
    s, t = d.vertices[0], d.vertices[1]
    assert not route(s, t, [], d).routable
    placement = place_all(d)
    result = route(s, t, beacon_points(d, placement), d)
    assert result.routable
    assert result.chain[-1] == t.to_floats()


def test_route_chain_replays_via_covers():
    d = spiral_polyhedron(SpiralParams(3))
    placement = place_all(d)
    beacons = beacon_points(d, placement)
    s, t = d.vertices[0].to_floats(), d.vertices[1].to_floats()
    result = route(s, t, beacons, d)
    assert result.routable
    current = s
    for hop in result.chain:
        assert covers(hop, current, d)
        current = hop
    assert current == t


def test_verify_all_pairs_with_certificate():
    d = spiral_polyhedron(SpiralParams(3))
    placement = place_all(d)
    report = verify_all_pairs(d, beacon_points(d, placement))
    assert report.ok
    n = report.samples
    assert report.pairs_checked == n * (n - 1)
    assert n == len(d.vertices) + d.m


def test_verify_fails_after_removing_a_beacon():
    d = spiral_polyhedron(SpiralParams(3))
    placement = place_all(d)
    beacons = beacon_points(d, placement)
    report = verify_all_pairs(d, beacons[:-1])
    assert not report.ok
    assert report.failures


def test_verify_single_tet_no_beacons():
    report = verify_all_pairs(fixtures.single_tet(), [])
    assert report.ok


def test_verify_extra_samples():
    d = spiral_polyhedron(SpiralParams(2))
    placement = place_all(d)
    report = verify_all_pairs(d, beacon_points(d, placement),
                              extra_samples=6, seed=3)
    assert report.ok
    assert report.samples == len(d.vertices) + d.m + 6


def test_adding_beacons_never_hurts():
    d = spiral_polyhedron(SpiralParams(2))
    placement = place_all(d)
    beacons = beacon_points(d, placement)
    cache = CoverageCache(d)
    samples = sample_points(d)
    rng = random.Random(5)
    pairs = [(samples[rng.randrange(len(samples))],
              samples[rng.randrange(len(samples))]) for _ in range(15)]
    for p, q in pairs:
        before = route(p, q, beacons, d, cache=cache).routable
        extra = beacons + [d.centroid(0).to_floats()]
        after = route(p, q, extra, d, cache=cache).routable
        if before:
            assert after


def test_falsify_c1_zero_beacons():
    report = falsify_lower_bound(1, 0, 5)
    assert report.ok
    assert report.budget == 0


def test_falsify_c2_one_beacon():
    report = falsify_lower_bound(2, 1, 5)
    assert report.ok
    assert report.candidates == 8 + 5
    assert report.subsets_checked == report.candidates


def test_falsify_full_budget_does_route():
    # sanity inversion: with c beacons (the actual budget) a routing
    # subset exists among the candidates, so the search machinery can
    # in principle find routes
    report = falsify_lower_bound(2, 2, 5)
    assert not report.ok
    assert report.counterexample is not None


def test_falsify_candidate_cap():
    with pytest.raises(ValueError):
        falsify_lower_bound(3, 2, 200)
