"""Seeded random polygons and scenarios in general position (rejection sampling)."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from kinvd.errors import DegenerateConfiguration, DegenerateScenario, PolygonError
from kinvd.motion import MovingPoint, Scenario, validate_trajectories
from kinvd.oracle import build_triangulation
from kinvd.polygon import ConvexPolygon, validate_polygon


def _circle_point(u: Fraction):
    # rational point on the unit circle
    d = 1 + u * u
    return ((1 - u * u) / d, 2 * u / d)


def random_polygon(k: int, rng: random.Random, max_tries=1000) -> ConvexPolygon:
    """Random k-gon inscribed in an axis-scaled circle with all chord and
    center-ray orientations distinct."""
    for _ in range(max_tries):
        angles = sorted(rng.uniform(0, math.tau) for _ in range(k))
        gaps = [(angles[(i + 1) % k] - angles[i]) % math.tau for i in range(k)]
        if max(gaps) >= 3.0 or min(gaps) < 0.15:
            continue
        pts = []
        for a in angles:
            if abs(math.cos(a / 2)) < 1e-3:
                break
            u = Fraction(math.tan(a / 2)).limit_denominator(64)
            pts.append(_circle_point(u))
        if len(pts) != k:
            continue
        sx = Fraction(rng.randint(8, 12), 10)
        pts = [(x * sx, y) for x, y in pts]
        try:
            return validate_polygon(pts)
        except PolygonError:
            continue
    raise RuntimeError("could not sample a general-position polygon")


def _coef(rng, bound, den):
    return Fraction(rng.randint(-bound * den, bound * den), den)


def random_scenario(n, k, *, seed=0, degree=2, span=(0, 1), box=10, speed=10, accel=5,
                    polygon=None, max_tries=200) -> Scenario:
    """Random scenario accepted by trajectory validation and by the static
    oracle at the start time."""
    rng = random.Random(seed)
    Q = polygon if polygon is not None else random_polygon(k, rng)
    for _ in range(max_tries):
        pts = []
        for i in range(n):
            xs = [_coef(rng, box, 4)]
            ys = [_coef(rng, box, 4)]
            if degree >= 1:
                xs.append(_coef(rng, speed, 4))
                ys.append(_coef(rng, speed, 4))
            if degree >= 2:
                xs.append(_coef(rng, accel, 4))
                ys.append(_coef(rng, accel, 4))
            pts.append(MovingPoint.from_coeffs(f"p{i}", xs, ys))
        sc = Scenario(Q, pts, span[0], span[1], degree=max(degree, 0), meta={"seed": seed})
        try:
            validate_trajectories(sc)
            build_triangulation(sc, sc.t_start)
        except (DegenerateScenario, DegenerateConfiguration):
            continue
        return sc
    raise RuntimeError("could not sample a general-position scenario")
