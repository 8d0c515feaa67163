import random
from fractions import Fraction

import pytest

from kinvd.diagram import AT_INFINITY, FINITE, WEDGE
from kinvd.errors import DegenerateConfiguration
from kinvd.generate import random_scenario
from kinvd.motion import MovingPoint, Scenario
from kinvd.oracle import build_triangulation, triangulate
from kinvd.placements import largest_empty
from kinvd.polygon import q_distance


def test_three_points_square_has_eight_triangles(square):
    tri = triangulate(square, [(0, 0), (3, Fraction(1, 3)), (Fraction(1, 2), Fraction(-7, 3))])
    assert len(tri.triangles) == 2 * (3 + 4) - 2 - 4
    counts = tri.by_kind()
    assert counts[FINITE] == 1 and counts[AT_INFINITY] + counts[WEDGE] == 7


def test_single_site(square):
    tri = triangulate(square, [(0, 0)])
    assert tri.by_kind() == {FINITE: 0, WEDGE: 0, AT_INFINITY: 4}


def test_coincident_sites_rejected(square):
    with pytest.raises(DegenerateConfiguration):
        triangulate(square, [(0, 0), (0, 0)])


def test_site_on_placement_boundary_rejected(square):
    # (2, 2) lies on the top edge of the placement of the other three
    with pytest.raises(DegenerateConfiguration):
        triangulate(square, [(0, 0), (4, Fraction(1, 2)), (1, -2), (2, 2)])


@pytest.mark.parametrize("seed", range(6))
def test_triangle_count_and_emptiness(seed):
    rng = random.Random(seed)
    n, k = rng.randint(1, 9), rng.randint(3, 7)
    sc = random_scenario(n, k, seed=seed)
    t = Fraction(rng.randint(1, 999), 1000)
    try:
        tri = build_triangulation(sc, t)
    except DegenerateConfiguration:
        pytest.skip("sampled a degenerate instant")
    assert len(tri.triangles) == 2 * (n + k) - 2 - k
    pos = sc.positions(t)
    Q = sc.polygon
    for key, pl in tri.placements.items():
        if tri.triangles[key].kind != FINITE:
            continue
        # the three sites lie on the boundary, every other site strictly outside
        for s in range(n):
            d = max(n_[0] * (pos[s][0] - pl.center[0]) + n_[1] * (pos[s][1] - pl.center[1]) for n_ in Q.normals)
            assert (d == pl.scale) if s in key else (d > pl.scale)
        # the placement is the largest empty homothet at its center
        assert largest_empty(Q, pl.center, pos).scale == pl.scale


def test_delaunay_edges_have_empty_witness(square):
    pos = [(0, 0), (3, Fraction(1, 3)), (Fraction(1, 2), Fraction(-7, 3)), (-2, Fraction(5, 4))]
    tri = triangulate(square, pos)
    assert all(q_distance(square, pl.center, pos[key[0]]) == pl.scale
               for key, pl in tri.placements.items() if tri.triangles[key].kind == FINITE)


def test_static_scenario_time_outside_span(square):
    sc = Scenario(square, [MovingPoint.static("p", (0, 0))], 0, 1, degree=0)
    with pytest.raises(ValueError):
        build_triangulation(sc, 2)


def test_collinear_sites_support_hull_is_a_path(square):
    # no finite triangle exists; the augmented triangulation is still complete
    pts = [(i, Fraction(i, 3)) for i in range(4)]
    tri = triangulate(square, pts)
    assert len(tri.triangles) == 2 * (4 + 4) - 2 - 4
    assert tri.by_kind()[FINITE] == 0
    finite_edges = {tuple(sorted(e)) for key in tri.triangles for e in ((key[0], key[1]), (key[0], key[2]), (key[1], key[2]))
                    if max(e) < 4}
    assert finite_edges == {(0, 1), (1, 2), (2, 3)}
