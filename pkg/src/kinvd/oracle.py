"""Brute-force static construction of the augmented Delaunay triangulation
and its edgelet-resolved Voronoi diagram at a fixed rational time.

Used to initialize the kinetic structure and as the independent reference
it is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from kinvd.diagram import AT_INFINITY, FINITE, WEDGE, Diagram, Frame, Triangle, tri_key
from kinvd.errors import DegenerateConfiguration, DegenerateDirection, DiagramError
from kinvd.motion import Probe, Scenario
from kinvd.placements import (
    BOUNDED,
    HALFPLANE,
    Placement,
    bisector_labels,
    breakpoints,
    cone_coordinates,
    contact_inverse,
    edge_parameters,
)
from kinvd.polygon import as_fraction, cross, dot, sub


@dataclass
class StaticTriangulation:
    n: int
    k: int
    triangles: dict
    placements: dict

    def by_kind(self):
        out = {FINITE: 0, WEDGE: 0, AT_INFINITY: 0}
        for t in self.triangles.values():
            out[t.kind] += 1
        return out

    @property
    def edges(self):
        out = set()
        for a, b, c in self.triangles:
            out.update({(a, b), (a, c), (b, c)})
        return out


@dataclass
class StaticDiagram:
    time: Fraction
    diagram: Diagram
    triangulation: StaticTriangulation
    breakpoints: dict = field(default_factory=dict)


def _position_check(Q, pos):
    for i, j in combinations(range(len(pos)), 2):
        if pos[i] == pos[j]:
            raise DegenerateConfiguration(f"sites {i} and {j} coincide")


def _strictly_outside(Q, c, lam, x):
    """+1 outside, -1 inside, 0 on the boundary of ``c + lam*Q``."""
    v = max(dot(nrm, sub(x, c)) for nrm in Q.normals) - lam
    return (v > 0) - (v < 0)


def build_triangulation(scenario: Scenario, t) -> StaticTriangulation:
    t = as_fraction(t)
    if not scenario.t_start <= t <= scenario.t_end:
        raise ValueError(f"time {t} outside the scenario span")
    return triangulate(scenario.polygon, scenario.positions(t))


def triangulate(Q, pos) -> StaticTriangulation:
    """Augmented Delaunay triangulation of fixed rational positions."""
    n, k = len(pos), Q.k
    _position_check(Q, pos)
    labels = {}
    for a, b in combinations(range(n), 2):
        try:
            labels[(a, b)] = bisector_labels(Q, sub(pos[b], pos[a])).labels
        except DegenerateDirection as exc:
            raise DegenerateConfiguration(f"sites {a},{b}: {exc}") from None
    triangles, placements = {}, {}

    def add(sites, delta, kind, placement):
        key = tri_key(*sites)
        if key in triangles:
            raise DegenerateConfiguration(f"two empty placements for triple {key}")
        triangles[key] = Triangle(key, delta, kind)
        placements[key] = placement

    # finite triples
    for p, q, r in combinations(range(n), 3):
        lpq = labels[(p, q)]
        lpr = labels[(p, r)]
        lqr = set(labels[(q, r)])
        found = []
        for i, j in lpq:
            for i2, l in lpr:
                if i2 != i or l == j or (j, l) not in lqr:
                    continue
                inv = contact_inverse(Q, (i, j, l))
                pts = (pos[p], pos[q], pos[r])
                rhs = [dot(Q.normals[e], x) for e, x in zip((i, j, l), pts)]
                c = (sum(inv[0][m] * rhs[m] for m in range(3)), sum(inv[1][m] * rhs[m] for m in range(3)))
                lam = sum(inv[2][m] * rhs[m] for m in range(3))
                if lam <= 0:
                    continue
                ok = True
                for x, e in zip(pts, (i, j, l)):
                    n0, n1 = edge_parameters(Q, x, c, lam, e)
                    if n0 < 0 or n1 > 0:
                        ok = False
                        break
                    if n0 == 0 or n1 == 0:
                        raise DegenerateConfiguration(f"site touches a vertex of the placement of {(p, q, r)}")
                if ok:
                    found.append(((i, j, l), c, lam))
        if len(found) > 1:
            raise DegenerateConfiguration(f"triple {(p, q, r)} has several placements")
        for (i, j, l), c, lam in found:
            empty = True
            for s in range(n):
                if s in (p, q, r):
                    continue
                side = _strictly_outside(Q, c, lam, pos[s])
                if side == 0:
                    raise DegenerateConfiguration(f"site {s} on the placement of {(p, q, r)}")
                if side < 0:
                    empty = False
                    break
            if empty:
                add((p, q, r), {p: i, q: j, r: l}, FINITE, Placement(BOUNDED, center=c, scale=lam))
    # wedges: one infinite vertex
    for m in range(k):
        a1 = sub(Q.vertex(m - 1), Q.vertex(m))
        a2 = sub(Q.vertex(m + 1), Q.vertex(m))
        for p in range(n):
            for q in range(n):
                if p == q:
                    continue
                s_, mu = cone_coordinates(a1, a2, sub(pos[p], pos[q]))
                u = -mu
                if s_ == 0 or u == 0:
                    raise DegenerateConfiguration(f"sites {p},{q} parallel to an edge at vertex {m}")
                if s_ < 0 or u < 0:
                    continue
                apex = sub(pos[p], (s_ * a1[0], s_ * a1[1]))
                empty = True
                for w in range(n):
                    if w in (p, q):
                        continue
                    al, be = cone_coordinates(a1, a2, sub(pos[w], apex))
                    if al > 0 and be > 0:
                        empty = False
                        break
                    if (al == 0 and be >= 0) or (be == 0 and al >= 0):
                        raise DegenerateConfiguration(f"site {w} on the wedge of {(p, q)}")
                if empty:
                    add(
                        (p, q, n + m),
                        {p: (m - 1) % k, q: m, n + m: m},
                        WEDGE,
                        Placement("wedge", apex=apex, index=m),
                    )
    # halfplanes: two infinite vertices
    for m in range(k):
        nm = Q.normals[m]
        for p in range(n):
            ok = True
            for s in range(n):
                if s == p:
                    continue
                v = dot(nm, sub(pos[s], pos[p]))
                if v == 0:
                    raise DegenerateConfiguration(f"sites {p},{s} parallel to edge {m}")
                if v < 0:
                    ok = False
                    break
            if ok:
                add(
                    (p, n + m, n + (m + 1) % k),
                    {p: m, n + m: m, n + (m + 1) % k: (m + 1) % k},
                    AT_INFINITY,
                    Placement(HALFPLANE, apex=pos[p], index=m),
                )
    expected = 2 * (n + k) - 2 - k
    if len(triangles) != expected:
        raise DegenerateConfiguration(f"found {len(triangles)} triangles, expected {expected}")
    return StaticTriangulation(n, k, triangles, placements)


def build_diagram(scenario: Scenario, t) -> StaticDiagram:
    t = as_fraction(t)
    tri = build_triangulation(scenario, t)
    diagram = Diagram(scenario.polygon, scenario.points, {k_: Triangle(v.sites, dict(v.delta), v.kind)
                                                         for k_, v in tri.triangles.items()})
    frame = Frame(scenario.polygon, scenario.points, Probe(t))
    try:
        diagram.rebuild_edges(frame)
    except DiagramError as exc:
        raise DegenerateConfiguration(f"oracle diagram inconsistent at t={t}: {exc}") from exc
    _check_vertices_on_bisectors(scenario, tri, frame)
    pos = frame.pos
    bps = {}
    for (a, b), edge in diagram.edges.items():
        if b < diagram.n and edge.labels:
            st = frame.structure(a, b)
            allbp = breakpoints(scenario.polygon, pos[a], pos[b], st)
            i = st.labels.index(edge.labels[0])
            bps[(a, b)] = allbp[i : i + len(edge.labels) - 1]
    return StaticDiagram(t, diagram, tri, bps)


def _check_vertices_on_bisectors(scenario, tri: StaticTriangulation, frame: Frame):
    """Each finite vertex center must sit on the edgelet of every incident
    pair given by the contact edges read off the placement geometrically."""
    Q = scenario.polygon
    for key, t in tri.triangles.items():
        if t.kind != FINITE:
            continue
        pl = tri.placements[key]
        for s in key:
            x = frame.pos[s]
            vals = [dot(nrm, sub(x, pl.center)) for nrm in Q.normals]
            best = max(vals)
            if best != pl.scale or vals.count(best) != 1:
                raise DegenerateConfiguration(f"contact of site {s} on {key} is not a unique edge")
            if vals.index(best) != t.delta[s]:
                raise DiagramError(f"contact map of {key} disagrees with its placement")
        for a, b in ((key[0], key[1]), (key[0], key[2]), (key[1], key[2])):
            if (t.delta[a], t.delta[b]) not in frame.structure(a, b).labels:
                raise DiagramError(f"vertex {key} off the bisector of {(a, b)}")


def compare_with_kinetic(oracle, kinetic: Diagram):
    """Structured difference between two diagrams; empty dict iff identical."""
    ref = oracle.diagram if isinstance(oracle, StaticDiagram) else oracle
    (t1, e1), (t2, e2) = ref.core(), kinetic.core()
    diff = {}
    missing = sorted(set(t1) - set(t2))
    extra = sorted(set(t2) - set(t1))
    if missing:
        diff["triangles_missing"] = missing
    if extra:
        diff["triangles_extra"] = extra
    delta = sorted(key for key in set(t1) & set(t2) if t1[key] != t2[key])
    if delta:
        diff["delta"] = [(key, t1[key], t2[key]) for key in delta]
    em = sorted(set(e1) - set(e2))
    ex = sorted(set(e2) - set(e1))
    if em:
        diff["edges_missing"] = em
    if ex:
        diff["edges_extra"] = ex
    lab = sorted(pr for pr in set(e1) & set(e2) if e1[pr] != e2[pr])
    if lab:
        diff["labels"] = [(pr, e1[pr], e2[pr]) for pr in lab]
    return diff
