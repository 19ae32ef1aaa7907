import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cogvlc.channel import AccessPoint
from cogvlc.errors import DomainError, InfeasibleError, LayoutError
from cogvlc.network import (
    OUT_OF_COVERAGE,
    ZONE0,
    ZONE1,
    Hall,
    assign_zone1_bands,
    build_layout,
    locate,
    locate_many,
)
from cogvlc.zones import MobilitySpec

THETA60 = math.radians(60)


def brute_disjoint(a: range, b: range) -> bool:
    return not (set(a) & set(b))


def with_n1(layout, n1s):
    """Copy of `layout` whose zone designs carry the given Zone-1 sizes."""
    designs = tuple(replace(zd, n0=ap.n_cell - n, n1=n)
                    for zd, ap, n in zip(layout.zone_designs, layout.aps, n1s))
    return replace(layout, zone_designs=designs)


@pytest.fixture
def hall_layout(hall):
    return build_layout(hall, 3, THETA60, 1.2)


def test_hall_example_geometry(hall_layout):
    r = 3.5 * math.sqrt(3)
    xs = [ap.center[0] for ap in hall_layout.aps]
    assert xs[1] - xs[0] == pytest.approx(2 * r - 1.2)
    assert xs == pytest.approx([4.0756, 15.0, 25.9244], abs=1e-3)
    assert all(ap.center[1] == 5.0 for ap in hall_layout.aps)
    assert hall_layout.adjacency == {(1, 2), (2, 3)}


def test_overlap_width_matches_lens(hall_layout):
    # lens width along the joining line: r_i + r_j - distance
    a, b = hall_layout.aps[:2]
    assert a.radius + b.radius - math.dist(a.center, b.center) == pytest.approx(1.2)


def test_hall_example_uncovered_corners(hall_layout):
    assert len(hall_layout.uncovered_corners()) == 4
    assert any("corner (0, 0)" in d for d in hall_layout.diagnostics)
    assert math.dist((0, 0), hall_layout.aps[0].center) > hall_layout.aps[0].radius


def test_hall_example_overlap_only_in_zone1(hall_layout):
    assert hall_layout.zone0_overlap_violations() == []
    for a, b in hall_layout.adjacency:
        i, j = a - 1, b - 1
        dist = math.dist(hall_layout.aps[i].center, hall_layout.aps[j].center)
        assert dist - hall_layout.aps[j].radius >= hall_layout.zone_designs[i].r0
        assert dist - hall_layout.aps[i].radius >= hall_layout.zone_designs[j].r0


def test_single_ap(hall):
    layout = build_layout(hall, 1, THETA60, 1.2)
    assert layout.adjacency == frozenset()
    sa = assign_zone1_bands(layout)
    n1 = layout.zone_designs[0].n1
    assert sa.zone1[1] == range(64 - n1, 64)


def test_zero_overlap_has_no_adjacency(hall):
    layout = build_layout(hall, 2, THETA60, 0.0)
    assert layout.adjacency == frozenset()


def test_layout_errors(hall):
    with pytest.raises(LayoutError):
        build_layout(hall, 3, THETA60, 2 * 3.5 * math.sqrt(3))
    with pytest.raises(LayoutError):
        build_layout(hall, 5, THETA60, 0.5)
    with pytest.raises(LayoutError):
        build_layout(hall, 0, THETA60, 1.0)


def test_zone0_overlap_violation_reported(hall):
    layout = build_layout(hall, 2, THETA60, 5.0)
    assert layout.zone0_overlap_violations() == [(1, 2)]
    assert any("reaches into Zone 0" in d for d in layout.diagnostics)


def test_band_example_three_ap_chain(hall_layout):
    layout = with_n1(hall_layout, [20, 20, 20])
    sa = assign_zone1_bands(layout)
    assert sa.zone1[1] == range(44, 64)
    assert sa.zone1[2] == range(0, 20)
    assert sa.zone1[3] == range(44, 64)
    for a, b in layout.adjacency:
        assert brute_disjoint(sa.zone1[a], sa.zone1[b])


def test_band_partition(hall_layout):
    sa = assign_zone1_bands(hall_layout)
    for ap, zd in zip(hall_layout.aps, hall_layout.zone_designs):
        z0, z1 = set(sa.zone0(ap.id)), set(sa.zone1[ap.id])
        assert not (z0 & z1)
        assert z0 | z1 == set(range(ap.n_cell))
        assert len(z0) == zd.n0 and len(z1) == zd.n1


def test_band_infeasible_names_pair(hall):
    layout = with_n1(build_layout(hall, 2, THETA60, 1.2, assign_bands=False), [40, 40])
    with pytest.raises(InfeasibleError) as exc:
        assign_zone1_bands(layout)
    assert (exc.value.details["ap_a"], exc.value.details["ap_b"]) == (1, 2)


def test_locate_center_and_overlap(hall_layout):
    for ap in hall_layout.aps:
        assert locate(hall_layout, ap.center) == (ap.id, ZONE0)
    # sampled lens points between AP1 and AP2
    a, b = hall_layout.aps[:2]
    rng = np.random.default_rng(3)
    hits = 0
    for p in rng.uniform([a.center[0], 0], [b.center[0], 10], size=(5000, 2)):
        in_a = math.dist(p, a.center) <= a.radius
        in_b = math.dist(p, b.center) <= b.radius
        if in_a and in_b:
            hits += 1
            ap_id, zone = locate(hall_layout, p)
            nearest = a.id if math.dist(p, a.center) <= math.dist(p, b.center) else b.id
            assert ap_id == nearest
            assert zone == ZONE1
    assert hits > 50


def test_locate_corner_uncovered(hall_layout):
    assert locate(hall_layout, (0.0, 0.0)) == (None, OUT_OF_COVERAGE)


def test_locate_outside_hall(hall_layout):
    with pytest.raises(DomainError):
        locate(hall_layout, (-1.0, 2.0))


def test_locate_tie_goes_to_lower_id(hall):
    layout = build_layout(hall, 2, THETA60, 1.2)
    mid = (0.5 * (layout.aps[0].center[0] + layout.aps[1].center[0]), 5.0)
    assert locate(layout, mid)[0] == 1


def test_locate_many_matches_scalar(hall_layout):
    rng = np.random.default_rng(0)
    pts = rng.uniform([0, 0], [30, 10], size=(500, 2))
    idx, zone = locate_many(hall_layout, pts)
    for p, i, z in zip(pts, idx, zone):
        ap_id, zz = locate(hall_layout, p)
        assert zz == z
        assert ap_id == (None if i < 0 else hall_layout.aps[i].id)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.floats(0.3, 1.2), st.floats(0.0, 3.0),
       st.lists(st.integers(0, 64), min_size=6, max_size=6))
def test_band_assignment_fuzz(k, theta, overlap_frac, n1s):
    hall = Hall(200.0, 20.0, 3.5)
    r = 3.5 * math.tan(theta)
    layout = build_layout(hall, k, theta, min(overlap_frac, 1.99) * r,
                          mob=MobilitySpec(u_pu=0), assign_bands=False)
    layout = with_n1(layout, n1s[:k])
    pairs = sorted(layout.adjacency)
    if any(n1s[a - 1] + n1s[b - 1] > 64 for a, b in pairs):
        with pytest.raises(InfeasibleError):
            assign_zone1_bands(layout)
        return
    sa = assign_zone1_bands(layout)
    for a, b in pairs:
        assert brute_disjoint(sa.zone1[a], sa.zone1[b])
    for ap in layout.aps:
        assert len(sa.zone1[ap.id]) == n1s[ap.id - 1]
        assert all(0 <= i < 64 for i in sa.zone1[ap.id])


def test_layout_serialization(hall_layout):
    d = hall_layout.to_dict()
    assert [a["id"] for a in d["aps"]] == [1, 2, 3]
    assert d["adjacency"] == [[1, 2], [2, 3]]
    assert len(d["zone1_bands"]) == 3
