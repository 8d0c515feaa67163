from fractions import Fraction

import pytest

from kinvd.errors import DegenerateScenario, IdenticallyZero
from kinvd.motion import MovingPoint, Probe, Scenario, augment_with_infinity, validate_trajectories
from kinvd.realroots import AFTER, BEFORE, AlgebraicTime, RatPolynomial


def test_positions_are_exact():
    p = MovingPoint.from_coeffs("p", [1, 2, 3], ["1/2"])
    assert p.at(Fraction(1, 2)) == (Fraction(11, 4), Fraction(1, 2))
    assert p.degree == 2


def test_infinite_points_of_square(square):
    sc = Scenario(square, [MovingPoint.static("p", (0, 0))], 0, 1, degree=0)
    dirs = [q.direction for q in augment_with_infinity(sc)]
    assert dirs == [(-1, -1), (-1, 1), (1, 1), (1, -1)]
    assert augment_with_infinity(sc)[2].id == "inf2"


def test_permanently_parallel_pair(square):
    sc = Scenario(square, [MovingPoint.static("p", (0, 0)), MovingPoint.from_coeffs("q", [1, 1], [0])], 0, 1, degree=1)
    with pytest.raises(IdenticallyZero):
        validate_trajectories(sc)


def test_collision_inside_span(square):
    sc = Scenario(square, [MovingPoint.static("p", (0, 0)), MovingPoint.from_coeffs("q", [-1, 2], [-1, 2])],
                  0, 1, degree=1)
    with pytest.raises(DegenerateScenario):
        validate_trajectories(sc)


def test_transient_parallel_is_valid(square):
    sc = Scenario(square, [MovingPoint.static("p", (0, 0)), MovingPoint.from_coeffs("q", [1, 1], [0, 1])],
                  0, 1, degree=1)
    report = validate_trajectories(sc)
    assert report.ok
    # q - p = (1+t, t) is horizontal at t = 0
    assert report.warnings


@pytest.mark.parametrize("kwargs", [dict(t_start=1, t_end=0), dict(degree=9)])
def test_bad_scenarios(square, kwargs):
    args = dict(t_start=0, t_end=1, degree=2)
    args.update(kwargs)
    with pytest.raises(ValueError):
        Scenario(square, [MovingPoint.static("p", (0, 0))], **args)


def test_duplicate_ids_rejected(square):
    with pytest.raises(ValueError):
        Scenario(square, [MovingPoint.static("p", (0, 0)), MovingPoint.static("p", (1, 2))], 0, 1)


def test_probe_sides():
    t = AlgebraicTime.rational(2)
    f = RatPolynomial([-2, 1])
    assert Probe(t).sign(f) == 0
    assert Probe(t, AFTER).sign(f) == 1
    assert Probe(t, BEFORE).sign(f) == -1
    assert Probe(Fraction(3)).sign(f) == 1
