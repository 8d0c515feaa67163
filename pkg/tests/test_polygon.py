from fractions import Fraction

import pytest

from kinvd.errors import DuplicateOrientation, NotConvex, OriginNotInterior, TooFewVertices
from kinvd.polygon import (
    compare_angle,
    orientation_intervals,
    interval_of,
    q_distance,
    regular_polygon,
    validate_polygon,
)


def test_square_normals_have_unit_support(square):
    assert square.k == 4
    assert all(h == 1 for h in square.supports)
    for i in range(4):
        v0, v1 = square.vertex(i), square.vertex(i + 1)
        n = square.normals[i]
        assert n[0] * v0[0] + n[1] * v0[1] == 1
        assert n[0] * v1[0] + n[1] * v1[1] == 1


def test_counterclockwise_input_is_reoriented():
    Q = validate_polygon([(-1, 1), (-1, -1), (1, -1), (1, 1)], require_distinct_orientations=False)
    assert Q.vertices[0] == (1, 1) or Q.vertices == tuple(reversed(Q.vertices))[::-1]
    # clockwise: cross of consecutive edges is negative
    (ax, ay), (bx, by) = Q.edge_vector(0), Q.edge_vector(1)
    assert ax * by - ay * bx < 0


def test_square_rejected_when_orientations_must_be_distinct():
    with pytest.raises(DuplicateOrientation):
        validate_polygon([(1, 1), (1, -1), (-1, -1), (-1, 1)])


@pytest.mark.parametrize(
    "verts, exc",
    [
        ([(1, 0), (0, 1)], TooFewVertices),
        ([(3, 1), (3, -1), (1, -1), (1, 1)], OriginNotInterior),
        ([(2, 2), (2, -2), (-2, -2), (0, 0), (-2, 2)], (NotConvex, OriginNotInterior)),
        ([(3, 1), (1, -1), (-1, -1), (-1, 1), (0, 0)], (NotConvex, OriginNotInterior)),
    ],
)
def test_invalid_polygons(verts, exc):
    with pytest.raises(exc):
        validate_polygon(verts, require_distinct_orientations=False)


def test_square_induces_chebyshev_distance(square):
    assert q_distance(square, (0, 0), (3, 1)) == 3
    assert q_distance(square, (1, 1), (-2, 3)) == 3


def test_q_distance_is_asymmetric_for_triangle():
    Q = validate_polygon([(0, 2), (2, -1), (-2, -1)])
    assert q_distance(Q, (0, 0), (0, 1)) != q_distance(Q, (0, 1), (0, 0))


def test_square_orientation_intervals(square):
    assert len(orientation_intervals(square)) == 8


def test_triangle_orientation_intervals():
    Q = validate_polygon([(0, 2), (2, -1), (-2, -1)])
    assert len(orientation_intervals(Q)) == 6


def test_every_generic_direction_has_one_interval(square):
    for d in [(2, 1), (1, 2), (-3, 1), (5, -7), (-1, -4)]:
        hits = [iv for iv in orientation_intervals(square) if iv.contains(d)]
        assert len(hits) == 1
        assert interval_of(square, d) is hits[0]
    assert interval_of(square, (1, 1)) is None


def test_compare_angle_orders_directions():
    dirs = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
    for a, b in zip(dirs, dirs[1:]):
        assert compare_angle(a, b) < 0
        assert compare_angle(b, a) > 0
    assert compare_angle((2, 2), (1, 1)) == 0


@pytest.mark.parametrize("k", range(3, 13))
def test_regular_polygons_are_exact_and_valid(k):
    Q = regular_polygon(k)
    assert Q.k == k
    assert all(isinstance(c, Fraction) for v in Q.vertices for c in v)
