"""Placement algebra: homothet solvers, bisector label sequences, corner
placements and certificate polynomials.

A placement ``c + lam*Q`` touches a point ``x`` on edge ``e`` when
``n_e . (x - c) = lam`` (supports are normalized to one). Three such
contacts give a linear system whose matrix depends only on the three edge
normals, so the same inverse serves both rational positions and polynomial
trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from kinvd.errors import (
    DegenerateDirection,
    IdenticallyZero,
    OffSegment,
    SingularContactSystem,
)
from kinvd.polygon import ConvexPolygon, as_point, cross, dot, q_distance, scale, sub
from kinvd.realroots import RatPolynomial

BOUNDED, WEDGE, HALFPLANE = "bounded", "wedge", "halfplane"


@dataclass(frozen=True)
class Placement:
    """A homothet of Q or one of its two unbounded limits.

    ``bounded``: ``center`` and ``scale``. ``wedge``: vertex ``index`` pinned
    at ``apex``. ``halfplane``: edge ``index`` on the line through ``apex``.
    """

    kind: str
    center: tuple | None = None
    scale: Fraction | None = None
    apex: tuple | None = None
    index: int | None = None
    on_segment: tuple = field(default=(), compare=False)

    def contains_strictly(self, Q: ConvexPolygon, x) -> bool:
        if self.kind == BOUNDED:
            return q_distance(Q, self.center, x) < self.scale
        if self.kind == WEDGE:
            a1 = sub(Q.vertex(self.index - 1), Q.vertex(self.index))
            a2 = sub(Q.vertex(self.index + 1), Q.vertex(self.index))
            alpha, beta = cone_coordinates(a1, a2, sub(x, self.apex))
            return alpha > 0 and beta > 0
        return dot(Q.normals[self.index], sub(x, self.apex)) < 0


# ---------------------------------------------------------------- bisectors


@dataclass(frozen=True)
class BisectorStructure:
    """Edgelet labels of a bisector, ordered with p on the left.

    ``corners[s]`` describes the breakpoint between ``labels[s]`` and
    ``labels[s+1]`` as ``("p" | "q", vertex index)``.
    """

    k: int
    labels: tuple
    corners: tuple
    top: int
    bottom: int

    @property
    def first(self):
        return self.labels[0]

    @property
    def last(self):
        return self.labels[-1]

    @property
    def chain_pq(self):
        """Edge indices touched by p, in trace order."""
        out = []
        for a, _ in self.labels:
            if not out or out[-1] != a:
                out.append(a)
        return tuple(out)

    @property
    def chain_qp(self):
        out = []
        for _, b in self.labels:
            if not out or out[-1] != b:
                out.append(b)
        return tuple(out)

    def index(self, label) -> int:
        return self.labels.index(tuple(label))


def vertex_order(Q: ConvexPolygon, d):
    """Vertex indices sorted by decreasing ``cross(d, v)``."""
    if d[0] == 0 and d[1] == 0:
        raise DegenerateDirection("zero direction")
    offs = [cross(d, v) for v in Q.vertices]
    order = sorted(range(Q.k), key=lambda i: offs[i], reverse=True)
    for a, b in zip(order, order[1:]):
        if offs[a] == offs[b]:
            raise DegenerateDirection(f"direction {d} is parallel to chord v{a}v{b}")
    return order


def labels_from_order(k: int, order) -> BisectorStructure:
    """Label sequence from the vertex order by decreasing offset.

    The counterclockwise chain from the top vertex carries p, the clockwise
    chain carries q.
    """
    top, bottom = order[0], order[-1]
    a, b = (top - 1) % k, top
    labels = [(a, b)]
    corners = []
    for v in order[1:-1]:
        if v == a:
            corners.append(("p", v))
            a = (a - 1) % k
        elif v == (b + 1) % k:
            corners.append(("q", v))
            b = (b + 1) % k
        else:
            raise DegenerateDirection("vertex order is not a sweep order of a convex polygon")
        labels.append((a, b))
    return BisectorStructure(k, tuple(labels), tuple(corners), top, bottom)


def bisector_labels(Q: ConvexPolygon, direction) -> BisectorStructure:
    """Bisector structure of any pair ``p, q`` with ``q - p`` along ``direction``."""
    d = as_point(direction)
    cache = Q._cache.setdefault("bisector", {})
    order = tuple(vertex_order(Q, d))
    s = cache.get(order)
    if s is None:
        s = cache[order] = labels_from_order(Q.k, order)
    return s


def corner_scale_p(Q: ConvexPolygon, p, q, a, b):
    """Scale of the corner placement with vertex v_a at p and q on e_b."""
    n = Q.normals[b]
    return dot(n, sub(q, p)) / (1 - dot(n, Q.vertex(a)))


def breakpoints(Q: ConvexPolygon, p, q, structure: BisectorStructure | None = None):
    """Breakpoint centers of b_pq in trace order."""
    p, q = as_point(p), as_point(q)
    if structure is None:
        structure = bisector_labels(Q, sub(q, p))
    out = []
    for s, (side, v) in enumerate(structure.corners):
        a, b = structure.labels[s + 1]
        if side == "p":
            lam = corner_scale_p(Q, p, q, v, b)
            out.append(sub(p, scale(lam, Q.vertex(v))))
        else:
            lam = corner_scale_p(Q, q, p, v, a)
            out.append(sub(q, scale(lam, Q.vertex(v))))
    return out


def bisector_polyline(Q: ConvexPolygon, p, q):
    """``(first ray direction, breakpoints, last ray direction)``.

    The bisector is the first ray traversed inward, the polyline, then the
    last ray outward.
    """
    p, q = as_point(p), as_point(q)
    s = bisector_labels(Q, sub(q, p))
    pts = breakpoints(Q, p, q, s)
    vt, vb = Q.vertex(s.top), Q.vertex(s.bottom)
    return (-vt[0], -vt[1]), pts, (-vb[0], -vb[1])


# ---------------------------------------------------------------- solvers


def _inverse3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if det == 0:
        return None
    return (
        ((e * i - f * h) / det, (c * h - b * i) / det, (b * f - c * e) / det),
        ((f * g - d * i) / det, (a * i - c * g) / det, (c * d - a * f) / det),
        ((d * h - e * g) / det, (b * g - a * h) / det, (a * e - b * d) / det),
    )


def contact_inverse(Q: ConvexPolygon, edges):
    """Inverse of the constant contact matrix for an edge triple."""
    edges = tuple(e % Q.k for e in edges)
    cache = Q._cache.setdefault("inverse", {})
    if edges not in cache:
        if len(set(edges)) != 3:
            cache[edges] = None
        else:
            cache[edges] = _inverse3([(Q.normals[e][0], Q.normals[e][1], Fraction(1)) for e in edges])
    inv = cache[edges]
    if inv is None:
        raise SingularContactSystem(f"contact edges {edges} do not determine a placement")
    return inv


def solve_contacts(Q: ConvexPolygon, points, edges):
    """``(center, scale)`` of the homothet touching ``points[i]`` on the line
    of ``edges[i]``. Works for rational points and polynomial trajectories."""
    inv = contact_inverse(Q, edges)
    rhs = [dot(Q.normals[e % Q.k], x) for x, e in zip(points, edges)]
    cx = inv[0][0] * rhs[0] + inv[0][1] * rhs[1] + inv[0][2] * rhs[2]
    cy = inv[1][0] * rhs[0] + inv[1][1] * rhs[1] + inv[1][2] * rhs[2]
    lam = inv[2][0] * rhs[0] + inv[2][1] * rhs[1] + inv[2][2] * rhs[2]
    return (cx, cy), lam


def edge_parameters(Q: ConvexPolygon, x, c, lam, e):
    """``(N0, N1)`` with ``N0 >= 0 >= N1`` iff ``x`` lies on edge e of ``c + lam*Q``."""
    ev = Q.edge_vector(e)
    rel = sub(x, c)
    n0 = dot(sub(rel, scale(lam, Q.vertex(e))), ev)
    n1 = dot(sub(rel, scale(lam, Q.vertex(e + 1))), ev)
    return n0, n1


def solve_three_contact(Q: ConvexPolygon, contacts) -> Placement:
    """Homothet with each ``(point, edge)`` contact on its supporting line."""
    points = [as_point(x) for x, _ in contacts]
    edges = [e % Q.k for _, e in contacts]
    c, lam = solve_contacts(Q, points, edges)
    flags = []
    for x, e in zip(points, edges):
        n0, n1 = edge_parameters(Q, x, c, lam, e)
        flags.append(n0 >= 0 >= n1)
    placement = Placement(BOUNDED, center=c, scale=lam, on_segment=tuple(flags))
    if lam <= 0:
        raise OffSegment("placement has nonpositive scale", placement, tuple(flags))
    if not all(flags):
        raise OffSegment("a contact point misses its edge segment", placement, tuple(flags))
    return placement


def cone_coordinates(a1, a2, w):
    """``(alpha, beta)`` with ``w = alpha*a1 + beta*a2``."""
    det = cross(a1, a2)
    return cross(w, a2) / det, cross(a1, w) / det


def wedge_parameters(Q: ConvexPolygon, p, q, i):
    """Arm coordinates ``(apex, s, u)`` with ``p = apex + s*(v_{i-1} - v_i)``
    and ``q = apex + u*(v_{i+1} - v_i)``."""
    a1 = sub(Q.vertex(i - 1), Q.vertex(i))
    a2 = sub(Q.vertex(i + 1), Q.vertex(i))
    # s*a1 - u*a2 = p - q
    s, minus_u = cone_coordinates(a1, a2, sub(p, q))
    return sub(p, scale(s, a1)), s, -minus_u


def solve_wedge(Q: ConvexPolygon, p, q, i) -> Placement:
    """Wedge with vertex v_i at the apex, p on the arm along e_{i-1} and q on
    the arm along e_i. ``on_segment`` reports whether both points sit on the
    open arms."""
    p, q = as_point(p), as_point(q)
    apex, s, u = wedge_parameters(Q, p, q, i)
    return Placement(WEDGE, apex=apex, index=i % Q.k, on_segment=(s > 0, u > 0))


def halfplane_placement(Q: ConvexPolygon, p, i) -> Placement:
    return Placement(HALFPLANE, apex=as_point(p), index=i % Q.k, on_segment=(True,))


def corner_placement_on_ray(Q: ConvexPolygon, p, i, q, j) -> Placement:
    """Homothet with vertex v_i at p and q on the line of e_j."""
    p, q = as_point(p), as_point(q)
    denom = 1 - dot(Q.normals[j % Q.k], Q.vertex(i))
    if denom == 0:
        raise SingularContactSystem(f"edge e{j} passes through vertex v{i}")
    lam = dot(Q.normals[j % Q.k], sub(q, p)) / denom
    c = sub(p, scale(lam, Q.vertex(i)))
    n0, n1 = edge_parameters(Q, q, c, lam, j)
    flags = (True, n0 >= 0 >= n1)
    placement = Placement(BOUNDED, center=c, scale=lam, on_segment=flags)
    if lam <= 0:
        raise OffSegment("corner placement has nonpositive scale", placement, flags)
    if not flags[1]:
        raise OffSegment("q misses its edge segment", placement, flags)
    return placement


def largest_empty(Q: ConvexPolygon, u, sites) -> Placement:
    """Largest homothet centered at u with no site in its interior."""
    u = as_point(u)
    sites = list(sites)
    if not sites:
        raise ValueError("need at least one site")
    return Placement(BOUNDED, center=u, scale=min(q_distance(Q, u, s) for s in sites))


# ---------------------------------------------------------- certificates


def _nonzero(poly, what):
    if poly.is_zero():
        raise IdenticallyZero(f"{what} certificate polynomial vanishes identically")
    return poly


def bisector_polynomial(Q: ConvexPolygon, p, q, chord):
    """``cross(q(t) - p(t), v_j - v_i)``."""
    i, j = chord
    d = (q.x - p.x, q.y - p.y)
    w = Q.chord(i, j)
    return d[0] * w[1] - d[1] * w[0]


def direction_polynomial(Q: ConvexPolygon, p, q, w):
    d = (q.x - p.x, q.y - p.y)
    return d[0] * w[1] - d[1] * w[0]


def vertex_polynomials(Q: ConvexPolygon, points, edges, which=0):
    """``(N0, N1)`` for ``points[which]`` in the placement of the triple."""
    traj = [pt.poly for pt in points]
    c, lam = solve_contacts(Q, traj, edges)
    return edge_parameters(Q, traj[which], c, lam, edges[which])


def edge_residual(Q: ConvexPolygon, points, edges, w, e):
    """``n_e . (w(t) - c(t)) - lam(t)`` for the placement of the triple."""
    traj = [pt.poly for pt in points]
    c, lam = solve_contacts(Q, traj, edges)
    return dot(Q.normals[e % Q.k], sub(w.poly, c)) - lam


def certificate_polynomials(kind, Q: ConvexPolygon, points, contacts):
    """Failure polynomials of one certificate.

    ``bisector``: points ``(p, q)``, contacts a chord ``(i, j)``.
    ``vertex``: points ``(p, q, r)``, contacts their edges; returns both
    endpoint polynomials for ``p``.
    ``edge``: points ``(p, q, r, w)``, contacts the four edges; returns the
    residual of ``w`` against the placement of ``p, q, r``.
    """
    if kind == "bisector":
        return _nonzero(bisector_polynomial(Q, points[0], points[1], contacts), kind)
    if kind == "vertex":
        n0, n1 = vertex_polynomials(Q, points, contacts)
        return _nonzero(n0, kind), _nonzero(n1, kind)
    if kind == "edge":
        return _nonzero(edge_residual(Q, points[:3], contacts[:3], points[3], contacts[3]), kind)
    raise ValueError(f"unknown certificate kind {kind!r}")
