import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onion_tsp.geometry import (
    COLLINEAR,
    LEFT,
    RIGHT,
    GeometryError,
    Point,
    convex_hull,
    convex_layers_naive,
    orientation,
    point_in_convex_polygon,
    segments_properly_intersect,
)

from conftest import GRID3, NESTED_SQUARES, UNIT_SQUARE, pts


def brute_boundary(points):
    """Ids on the hull boundary: a point is on it iff some line through it
    and another point has every point on one closed side."""
    if len(points) <= 2:
        return {p.id for p in points}
    out = set()
    for p in points:
        for q in points:
            if q is p:
                continue
            signs = {orientation(p, q, r) for r in points} - {COLLINEAR}
            if len(signs) <= 1:
                out.add(p.id)
                break
    return out


def is_ccw_convex(points, cycle):
    by_id = {p.id: p for p in points}
    poly = [by_id[i] for i in cycle]
    n = len(poly)
    turns = [orientation(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]) for i in range(n)]
    return all(t >= 0 for t in turns) and any(t > 0 for t in turns)


def test_orientation_examples():
    o, x, y, d = Point(0, 0, 0), Point(1, 1, 0), Point(2, 0, 1), Point(3, 2, 0)
    assert orientation(o, x, y) == LEFT
    assert orientation(o, x, d) == COLLINEAR
    assert orientation(o, Point(4, 0, 1), Point(5, 1, 1)) == RIGHT


def test_orientation_near_degenerate_floats():
    # (0.1, 0.1) lies on y = x only approximately; exact arithmetic decides
    a, b = Point(0, 0.0, 0.0), Point(1, 1.0, 1.0)
    assert orientation(a, b, Point(2, 0.1, 0.1)) == COLLINEAR
    assert orientation(a, b, Point(2, 0.5, 0.5 + 2**-53)) == LEFT
    big = Point(3, 1e16, 1e16)
    assert orientation(a, big, Point(4, 1e16 + 2, 1e16 + 2)) == COLLINEAR
    assert orientation(a, big, Point(4, 1e16 + 2, 1e16 + 4)) == LEFT


coord = st.integers(min_value=-20, max_value=20)


@given(coord, coord, coord, coord, coord, coord, coord, coord)
def test_orientation_antisymmetric_and_translation_invariant(ax, ay, bx, by, cx, cy, tx, ty):
    p, q, r = Point(0, ax, ay), Point(1, bx, by), Point(2, cx, cy)
    assert orientation(p, q, r) == -orientation(p, r, q)
    moved = [Point(k.id, k.x + tx, k.y + ty) for k in (p, q, r)]
    assert orientation(*moved) == orientation(p, q, r)


def test_hull_square():
    assert convex_hull(pts(UNIT_SQUARE)) == [0, 1, 2, 3]


def test_hull_square_with_center():
    assert convex_hull(pts(UNIT_SQUARE + [(0.5, 0.5)])) == [0, 1, 2, 3]


def test_hull_grid_keeps_edge_midpoints():
    p = pts(GRID3)
    hull = convex_hull(p)
    assert len(hull) == 8
    assert 4 not in hull  # (1, 1)
    assert is_ccw_convex(p, hull)


def test_hull_degenerate_inputs():
    assert convex_hull(pts([(3, 3)])) == [0]
    assert convex_hull(pts([(1, 0), (0, 0)])) == [1, 0]
    assert convex_hull(pts([(2, 2), (0, 0), (1, 1), (3, 3)])) == [1, 2, 0, 3]
    assert convex_hull(pts([(0, 2), (0, 0), (0, 1)])) == [1, 2, 0]
    with pytest.raises(GeometryError, match="empty point set"):
        convex_hull([])


def test_layers_examples():
    assert convex_layers_naive(pts(GRID3)).sizes() == [8, 1]
    nested = convex_layers_naive(pts(NESTED_SQUARES))
    assert nested.sizes() == [4, 4]
    assert nested.layers == [[0, 1, 2, 3], [4, 5, 6, 7]]
    assert convex_layers_naive(pts([(k, 2 * k) for k in range(5)])).sizes() == [5]


point_sets = st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=30, unique=True)


@settings(max_examples=300)
@given(point_sets)
def test_hull_matches_brute_force_boundary(coords):
    p = pts(coords)
    hull = convex_hull(p)
    assert len(hull) == len(set(hull))
    assert set(hull) == brute_boundary(p)
    if len(set(hull)) >= 3 and brute_boundary(p) and not _collinear(p):
        assert is_ccw_convex(p, hull)


def _collinear(p):
    return all(orientation(p[0], p[1], r) == 0 for r in p[2:]) if len(p) > 2 else True


@settings(max_examples=200)
@given(point_sets)
def test_hull_idempotent(coords):
    p = pts(coords)
    hull = convex_hull(p)
    sub = [q for q in p if q.id in set(hull)]
    assert set(convex_hull(sub)) == set(hull)


@settings(max_examples=200)
@given(point_sets)
def test_layers_partition_and_nesting(coords):
    p = pts(coords)
    layers = convex_layers_naive(p)
    flat = [i for layer in layers.layers for i in layer]
    assert sorted(flat) == list(range(len(p)))
    assert all(layers.layers)
    by_id = {q.id: q for q in p}
    for k in range(1, len(layers.layers)):
        poly = [by_id[i] for i in layers.layers[k - 1]]
        for i in layers.layers[k]:
            assert point_in_convex_polygon(poly, by_id[i], strict=True)
    for k, layer in enumerate(layers.layers):
        assert all(layers.depth[i] == k for i in layer)


@settings(max_examples=100)
@given(point_sets, st.integers(0, 3), st.integers(-50, 50), st.integers(-50, 50))
def test_layer_membership_invariant_under_rigid_motion(coords, quarter_turns, tx, ty):
    def turn(x, y):
        for _ in range(quarter_turns):
            x, y = -y, x
        return x + tx, y + ty

    a = convex_layers_naive(pts(coords))
    b = convex_layers_naive(pts([turn(x, y) for x, y in coords]))
    assert a.depth == b.depth


def test_layers_random_float_points_nest():
    rnd = random.Random(4)
    p = pts([(rnd.random(), rnd.random()) for _ in range(300)])
    layers = convex_layers_naive(p)
    by_id = {q.id: q for q in p}
    for k in range(1, len(layers)):
        poly = [by_id[i] for i in layers.layers[k - 1]]
        assert all(point_in_convex_polygon(poly, by_id[i]) for i in layers.layers[k])


def test_proper_intersection():
    a, b, c, d = pts([(0, 0), (1, 1), (1, 0), (0, 1)])
    assert segments_properly_intersect(a, b, c, d)
    assert not segments_properly_intersect(a, c, b, d)
    # touching at an endpoint is not a proper crossing
    e = Point(9, 0.5, 0.5)
    assert not segments_properly_intersect(a, b, e, c)
