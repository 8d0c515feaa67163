"""The distance-inducing convex polygon and the direction partition it
induces.

All coordinates are :class:`fractions.Fraction`. Edge normals are scaled so
that every support value equals one, which turns the convex distance into a
plain maximum of dot products.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from kinvd.errors import (
    DuplicateOrientation,
    NotConvex,
    OriginNotInterior,
    TooFewVertices,
)

Point = tuple  # (Fraction, Fraction)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(value)


def as_point(p) -> Point:
    return (as_fraction(p[0]), as_fraction(p[1]))


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def scale(s, a):
    return (s * a[0], s * a[1])


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def sign(x) -> int:
    return (x > 0) - (x < 0)


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def compare_angle(u, v) -> int:
    """Exact comparison of the polar angles of two nonzero vectors in [0, 2pi)."""
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    return -sign(cross(u, v))


def same_direction(u, v) -> bool:
    return cross(u, v) == 0 and dot(u, v) > 0


def primitive_line(v):
    """Canonical representative of the undirected line orientation of v."""
    if _half(v) == 1:
        v = (-v[0], -v[1])
    # normalize the scale so that parallel vectors compare equal
    m = abs(v[0]) if v[0] != 0 else abs(v[1])
    return (v[0] / m, v[1] / m)


@dataclass(frozen=True)
class ConvexPolygon:
    """A strictly convex k-gon with vertices in clockwise order around an
    interior origin.

    ``normals[i]`` is the outward normal of edge ``e_i = v_i v_{i+1}``,
    scaled so that ``supports[i] == n_i . v_i == 1``.
    """

    vertices: tuple
    normals: tuple
    supports: tuple
    distinct_orientations: bool = True
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def k(self) -> int:
        return len(self.vertices)

    def vertex(self, i):
        return self.vertices[i % self.k]

    def edge_vector(self, i):
        """Direction of e_i, from v_i to v_{i+1}."""
        return sub(self.vertex(i + 1), self.vertex(i))

    def chord(self, i, j):
        return sub(self.vertex(j), self.vertex(i))

    def adjacent(self, a, b) -> bool:
        return (a - b) % self.k in (1, self.k - 1)

    def edges_at_vertex(self, m):
        """The two edges meeting at v_m, as (e_{m-1}, e_m)."""
        return ((m - 1) % self.k, m % self.k)

    def vertex_between(self, a, b):
        """Common vertex index of two adjacent edges."""
        k = self.k
        if (a + 1) % k == b % k:
            return b % k
        if (b + 1) % k == a % k:
            return a % k
        raise ValueError(f"edges {a} and {b} are not adjacent")

    def scaled(self, factor) -> "ConvexPolygon":
        factor = as_fraction(factor)
        return validate_polygon(
            [scale(factor, v) for v in self.vertices],
            require_distinct_orientations=self.distinct_orientations,
        )


def validate_polygon(vertices, *, require_distinct_orientations=True) -> ConvexPolygon:
    """Build a :class:`ConvexPolygon` from a vertex list.

    Counterclockwise input is reversed. With ``require_distinct_orientations``
    every edge and diagonal orientation must be unique and differ from every
    center-to-vertex orientation; centrally symmetric shapes such as the
    axis-parallel square only pass with the flag off.
    """
    pts = [as_point(v) for v in vertices]
    if len(pts) < 3:
        raise TooFewVertices(f"need at least 3 vertices, got {len(pts)}")
    k = len(pts)
    if len(set(pts)) != k:
        raise NotConvex("repeated vertex")
    area2 = sum(cross(pts[i], pts[(i + 1) % k]) for i in range(k))
    if area2 == 0:
        raise NotConvex("degenerate (zero-area) polygon")
    if area2 > 0:
        pts = [pts[0]] + pts[1:][::-1]
    for i in range(k):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % k]
        if cross(sub(b, a), sub(c, b)) >= 0:
            raise NotConvex(f"vertex {i} is not a strict clockwise turn")
    # edge directions must wind around exactly once
    wraps = 0
    for i in range(k):
        e1 = sub(pts[i], pts[i - 1])
        e2 = sub(pts[(i + 1) % k], pts[i])
        wraps += compare_angle(e2, e1) > 0
    if wraps != 1:
        raise NotConvex("polygon is not simple")
    normals, supports = [], []
    for i in range(k):
        d = sub(pts[(i + 1) % k], pts[i])
        n = (-d[1], d[0])
        h = dot(n, pts[i])
        if h <= 0:
            raise OriginNotInterior(f"origin not strictly inside edge {i}")
        normals.append((n[0] / h, n[1] / h))
        supports.append(Fraction(1))
    distinct = _orientations_distinct(pts)
    if require_distinct_orientations and not distinct[0]:
        raise DuplicateOrientation(distinct[1])
    return ConvexPolygon(tuple(pts), tuple(normals), tuple(supports), distinct[0])


def _orientations_distinct(pts):
    seen = {}
    for i, j in combinations(range(len(pts)), 2):
        key = primitive_line(sub(pts[j], pts[i]))
        if key in seen:
            return False, f"chords {seen[key]} and {(i, j)} are parallel"
        seen[key] = (i, j)
    for i, v in enumerate(pts):
        key = primitive_line(v)
        if key in seen:
            return False, f"center ray to vertex {i} is parallel to chord {seen[key]}"
    return True, ""


def q_distance(Q: ConvexPolygon, x, y) -> Fraction:
    """Smallest lambda with y in x + lambda*Q."""
    d = sub(as_point(y), as_point(x))
    return max(dot(n, d) for n in Q.normals)


@dataclass(frozen=True)
class DirectionInterval:
    """Open arc of directions strictly between two consecutive chord
    directions ``start`` and ``end`` (counterclockwise)."""

    start: tuple
    end: tuple

    def contains(self, d) -> bool:
        if compare_angle(self.start, self.end) < 0:
            return compare_angle(self.start, d) < 0 and compare_angle(d, self.end) < 0
        return compare_angle(self.start, d) < 0 or compare_angle(d, self.end) < 0

    def interior_direction(self, a=1, b=1):
        """A direction inside the arc (arcs are narrower than pi)."""
        return add(scale(as_fraction(a), self.start), scale(as_fraction(b), self.end))


def chord_directions(Q: ConvexPolygon):
    """All chord directions v_j - v_i (both senses), deduplicated, sorted by angle."""
    dirs = []
    for i, j in combinations(range(Q.k), 2):
        c = Q.chord(i, j)
        for v in (c, (-c[0], -c[1])):
            if not any(same_direction(v, w) for w in dirs):
                dirs.append(v)
    dirs.sort(key=functools.cmp_to_key(compare_angle))
    return dirs


def orientation_intervals(Q: ConvexPolygon):
    """Circularly ordered partition of the directions by all chord orientations."""
    cached = Q._cache.get("intervals")
    if cached is None:
        dirs = chord_directions(Q)
        cached = [DirectionInterval(dirs[i], dirs[(i + 1) % len(dirs)]) for i in range(len(dirs))]
        Q._cache["intervals"] = cached
    return list(cached)


def interval_of(Q: ConvexPolygon, d):
    for iv in orientation_intervals(Q):
        if iv.contains(d):
            return iv
    return None


def regular_polygon(k, radius=1, precision=10**9, phase=0.0) -> ConvexPolygon:
    """Regular k-gon with coordinates rounded to ``1/precision``."""
    verts = []
    for i in range(k):
        a = phase - 2 * math.pi * i / k
        verts.append(
            (
                Fraction(round(radius * math.cos(a) * precision), precision),
                Fraction(round(radius * math.sin(a) * precision), precision),
            )
        )
    return validate_polygon(verts, require_distinct_orientations=False)
