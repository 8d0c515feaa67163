"""Combinatorial Voronoi diagram / Delaunay triangulation of the augmented
site set, with an edgelet-level half-edge view and a structural audit.

Sites ``0..n-1`` are finite, ``n+m`` is the point at infinity in direction
``-v_m``. A triangle maps each of its sites to the edge of its placement the
site touches (for an infinite site: the polygon vertex index). A Voronoi edge
``(a, b)`` with ``a < b`` stores its edgelet labels oriented with ``a``'s edge
first, traced with ``a`` on the left, from its ``start`` triangle to its
``end`` triangle. Geometry is never cached: labels and orientations are
re-derived from trajectories through a :class:`Frame`.
"""

from __future__ import annotations

import copy
import functools
from dataclasses import dataclass, field

from kinvd.errors import (
    DiagramError,
    EndpointMismatch,
    IllegalLabelStep,
    NoExternalEdgelet,
    NotIncident,
    NotInternal,
    NotNonCorner,
)
from kinvd.motion import Probe
from kinvd.placements import labels_from_order, vertex_order
from kinvd.polygon import ConvexPolygon, cross, sub
from kinvd.realroots import RatPolynomial

FINITE, WEDGE, AT_INFINITY = "finite", "wedge", "infinity"


def tri_key(*sites):
    return tuple(sorted(sites))


def pair_key(a, b):
    return (a, b) if a < b else (b, a)


@dataclass
class Triangle:
    sites: tuple
    delta: dict
    kind: str

    def third(self, a, b):
        for s in self.sites:
            if s != a and s != b:
                return s
        raise NotIncident(f"({a}, {b}) is not an edge of triangle {self.sites}")


@dataclass
class VoronoiEdge:
    a: int
    b: int
    labels: list
    start: tuple | None
    end: tuple | None

    @property
    def key(self):
        return (self.a, self.b)

    @property
    def non_corner(self) -> bool:
        return len(self.labels) == 1


@dataclass
class MutationRecord:
    kind: str
    before: dict
    after: dict
    notes: list = field(default_factory=list)

    def to_record(self):
        return {"kind": self.kind, "before": _jsonable(self.before), "after": _jsonable(self.after), "notes": self.notes}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


class Frame:
    """Exact orientation and direction-order queries at a probe moment."""

    def __init__(self, Q: ConvexPolygon, points, probe: Probe):
        self.Q = Q
        self.n = len(points)
        self.points = points
        self.probe = probe
        self.concrete = probe.rational and probe.side == "at"
        if self.concrete:
            self.pos = [p.at(probe.value) for p in points]
        self._orders = {}

    def direction(self, a, b):
        pa, pb = self.points[a], self.points[b]
        return (pb.x - pa.x, pb.y - pa.y)

    def order(self, a, b):
        """Vertex order by decreasing offset for the direction ``b - a``."""
        key = (a, b)
        if key in self._orders:
            return self._orders[key]
        if self.concrete:
            out = vertex_order(self.Q, sub(self.pos[b], self.pos[a]))
        else:
            d = self.direction(a, b)
            Q = self.Q

            def cmp(i, j):
                w = sub(Q.vertex(i), Q.vertex(j))
                s = self.probe.sign(d[0] * w[1] - d[1] * w[0])
                if s == 0:
                    raise DiagramError(f"sites {a},{b} parallel to chord v{i}v{j} at {self.probe}")
                return -s

            out = sorted(range(Q.k), key=functools.cmp_to_key(cmp))
        self._orders[key] = out
        return out

    def structure(self, a, b):
        cache = self.Q._cache.setdefault("bisector", {})
        order = tuple(self.order(a, b))
        s = cache.get(order)
        if s is None:
            s = cache[order] = labels_from_order(self.Q.k, order)
        return s

    def _lifted(self, s):
        """Site as (constant part, part scaled by a huge R)."""
        if s >= self.n:
            v = self.Q.vertex(s - self.n)
            return (0, 0), (-v[0], -v[1])
        if self.concrete:
            return self.pos[s], (0, 0)
        return self.points[s].poly, (0, 0)

    def orient(self, a, b, c) -> int:
        """Sign of cross(b - a, c - a); infinite sites dominate."""
        (a0, a1), (b0, b1), (c0, c1) = self._lifted(a), self._lifted(b), self._lifted(c)
        x0, x1 = sub(b0, a0), sub(b1, a1)
        y0, y1 = sub(c0, a0), sub(c1, a1)
        for coef in (cross(x1, y1), cross(x0, y1) + cross(x1, y0), cross(x0, y0)):
            s = self._sgn(coef)
            if s:
                return s
        return 0

    def _sgn(self, v):
        if isinstance(v, RatPolynomial):
            return self.probe.sign(v)
        return (v > 0) - (v < 0)


class Diagram:
    """Kinetic (or static) combinatorial diagram over ``n`` finite and ``k``
    infinite sites."""

    def __init__(self, Q: ConvexPolygon, points, triangles=None):
        self.Q = Q
        self.points = tuple(points)
        self.n = len(self.points)
        self.k = Q.k
        self.triangles: dict = dict(triangles or {})
        self.edges: dict = {}
        self.pair_tris: dict = {}
        for key in self.triangles:
            self._index_triangle(key)

    # -- sites
    def is_infinite(self, s) -> bool:
        return s >= self.n

    def site_id(self, s) -> str:
        return self.points[s].id if s < self.n else f"inf{s - self.n}"

    def copy(self) -> "Diagram":
        return copy.deepcopy(self)

    # -- triangle bookkeeping
    def _index_triangle(self, key):
        a, b, c = key
        for pr in ((a, b), (a, c), (b, c)):
            self.pair_tris.setdefault(pr, set()).add(key)

    def _unindex_triangle(self, key):
        a, b, c = key
        for pr in ((a, b), (a, c), (b, c)):
            s = self.pair_tris.get(pr)
            if s is not None:
                s.discard(key)
                if not s:
                    del self.pair_tris[pr]

    def add_triangle(self, tri: Triangle):
        key = tri_key(*tri.sites)
        if key in self.triangles:
            raise DiagramError(f"triangle {key} already present")
        tri.sites = key
        self.triangles[key] = tri
        self._index_triangle(key)
        return key

    def remove_triangle(self, key):
        tri = self.triangles.pop(key)
        self._unindex_triangle(key)
        return tri

    def triangles_of(self, a, b):
        return sorted(self.pair_tris.get(pair_key(a, b), ()))

    def other_triangle(self, a, b, key):
        for t in self.pair_tris.get(pair_key(a, b), ()):
            if t != key:
                return t
        return None

    def kind_of(self, sites):
        inf = sum(1 for s in sites if s >= self.n)
        return (FINITE, WEDGE, AT_INFINITY)[inf]

    # -- derived edge data
    def edge_ends(self, a, b, frame: Frame):
        """``(start, end)`` triangles of the edge ``a < b``."""
        tris = self.triangles_of(a, b)
        if len(tris) == 1:
            if not (self.is_infinite(a) and self.is_infinite(b)):
                raise DiagramError(f"edge ({a},{b}) has only one triangle")
            side = frame.orient(a, b, self.triangles[tris[0]].third(a, b))
            return (tris[0], None) if side < 0 else (None, tris[0])
        if len(tris) != 2:
            raise DiagramError(f"edge ({a},{b}) has {len(tris)} triangles")
        sides = [frame.orient(a, b, self.triangles[t].third(a, b)) for t in tris]
        if sides[0] < 0 < sides[1]:
            return tris[0], tris[1]
        if sides[1] < 0 < sides[0]:
            return tris[1], tris[0]
        raise DiagramError(f"triangles of edge ({a},{b}) do not lie on opposite sides")

    def derive_labels(self, a, b, start, end, frame: Frame):
        """Edgelet labels of edge ``a < b`` from the endpoint contacts."""
        if self.is_infinite(a):
            return []
        ds, de = self.triangles[start].delta, self.triangles[end].delta
        if self.is_infinite(b):
            m = b - self.n
            allowed = {(m - 1) % self.k, m}
            if ds[a] not in allowed or de[a] not in allowed:
                raise DiagramError(f"contact of site {a} inconsistent with infinite neighbour {m}")
            out = [(ds[a], None)]
            if de[a] != ds[a]:
                out.append((de[a], None))
            return out
        st = frame.structure(a, b)
        ls, le = (ds[a], ds[b]), (de[a], de[b])
        try:
            i, j = st.labels.index(ls), st.labels.index(le)
        except ValueError:
            raise DiagramError(f"endpoint label of edge ({a},{b}) not on its bisector: {ls}, {le}") from None
        if i > j:
            raise DiagramError(f"edge ({a},{b}) endpoints out of trace order")
        return list(st.labels[i : j + 1])

    def derive_edge(self, a, b, frame: Frame) -> VoronoiEdge:
        start, end = self.edge_ends(a, b, frame)
        labels = self.derive_labels(a, b, start, end, frame) if start is not None and end is not None else []
        return VoronoiEdge(a, b, labels, start, end)

    def rebuild_edges(self, frame: Frame):
        self.edges = {pr: self.derive_edge(*pr, frame) for pr in sorted(self.pair_tris)}

    def refresh_edges(self, pairs, frame: Frame):
        for pr in pairs:
            pr = pair_key(*pr)
            if pr in self.pair_tris:
                self.edges[pr] = self.derive_edge(*pr, frame)
            else:
                self.edges.pop(pr, None)

    # -- queries used by the engine
    def label_at(self, edge: VoronoiEdge, tri_key_):
        """Label of the external edgelet of ``edge`` at the given endpoint."""
        if tri_key_ == edge.start:
            return edge.labels[0]
        if tri_key_ == edge.end:
            return edge.labels[-1]
        raise NotIncident(f"triangle {tri_key_} is not an endpoint of edge {edge.key}")

    def neighbours(self, s):
        out = set()
        for a, b in self.pair_tris:
            if a == s:
                out.add(b)
            elif b == s:
                out.add(a)
        return out

    # -- mutations
    def replace_internal_edgelet(self, pair, old, new) -> MutationRecord:
        edge = self.edges[pair_key(*pair)]
        old, new = tuple(old), tuple(new)
        if old not in edge.labels[1:-1]:
            raise NotInternal(f"{old} is not an internal edgelet of edge {edge.key}")
        step = ((new[0] - old[0]) % self.k, (new[1] - old[1]) % self.k)
        if step not in ((1, 1), (self.k - 1, self.k - 1)):
            raise IllegalLabelStep(f"{old} -> {new} is not a unit diagonal step")
        before = list(edge.labels)
        edge.labels[edge.labels.index(old)] = new
        return MutationRecord("replace_internal_edgelet", {"edge": edge.key, "labels": before},
                              {"edge": edge.key, "labels": list(edge.labels)})

    def transfer_edgelet(self, from_pair, to_pair, vertex, site, new_contact) -> MutationRecord:
        """Corner surgery at ``vertex``: ``site`` moves to ``new_contact``;
        ``from_pair`` loses its external edgelet there and ``to_pair`` gains one."""
        tri = self.triangles.get(vertex)
        e_from, e_to = self.edges.get(pair_key(*from_pair)), self.edges.get(pair_key(*to_pair))
        if tri is None or e_from is None or e_to is None:
            raise NotIncident("unknown vertex or edge")
        for e in (e_from, e_to):
            if vertex not in (e.start, e.end) or site not in e.key:
                raise NotIncident(f"edge {e.key} is not incident to vertex {vertex} at site {site}")
        if len(e_from.labels) < 2:
            raise NoExternalEdgelet(f"edge {e_from.key} has no spare external edgelet")
        before = {"delta": dict(tri.delta), "from": list(e_from.labels), "to": list(e_to.labels)}
        tri.delta[site] = new_contact % self.k
        notes = []
        if vertex == e_from.start:
            e_from.labels.pop(0)
        else:
            e_from.labels.pop()
        new_label = self._label_for(e_to, tri)
        if vertex == e_to.start:
            e_to.labels.insert(0, new_label)
        else:
            e_to.labels.append(new_label)
        if len(e_from.labels) == 1:
            notes.append(f"edge {e_from.key} became non-corner")
        if len(e_to.labels) == 2:
            notes.append(f"edge {e_to.key} became a corner edge")
        after = {"delta": dict(tri.delta), "from": list(e_from.labels), "to": list(e_to.labels)}
        return MutationRecord("transfer_edgelet", before, after, notes)

    def _label_for(self, edge, tri):
        a, b = edge.key
        if self.is_infinite(b):
            return (tri.delta[a], None)
        return (tri.delta[a], tri.delta[b])

    def flip_edge(self, pair, new_pair, frame: Frame, strict=True) -> MutationRecord:
        """Replace triangles ``pqr, pqw`` by ``rwp, rwq``; contacts are those of
        the common placement at the flip instant."""
        p, q = pair_key(*pair)
        r, w = new_pair
        edge = self.edges.get((p, q))
        if edge is None:
            raise NotIncident(f"no edge {(p, q)}")
        if strict and not edge.non_corner:
            raise NotNonCorner(f"edge {(p, q)} has {len(edge.labels)} edgelets")
        t1, t2 = tri_key(p, q, r), tri_key(p, q, w)
        if {t1, t2} != set(self.triangles_of(p, q)):
            raise EndpointMismatch(f"edge {(p, q)} is not bounded by {t1} and {t2}")
        d1, d2 = self.triangles[t1].delta, self.triangles[t2].delta
        contact = {**d2, **d1}
        before = {"triangles": [t1, t2], "edge": (p, q), "labels": list(edge.labels)}
        self.remove_triangle(t1)
        self.remove_triangle(t2)
        n1 = self.add_triangle(Triangle(tri_key(r, w, p), {s: contact[s] for s in (r, w, p)}, self.kind_of((r, w, p))))
        n2 = self.add_triangle(Triangle(tri_key(r, w, q), {s: contact[s] for s in (r, w, q)}, self.kind_of((r, w, q))))
        self.refresh_edges([(p, q), (r, w), (p, r), (p, w), (q, r), (q, w)], frame)
        after = {"triangles": [n1, n2], "edge": pair_key(r, w), "labels": list(self.edges[pair_key(r, w)].labels)}
        return MutationRecord("flip_edge", before, after)

    # -- audit
    def audit(self, frame: Frame | None = None):
        """Structural report; empty list iff every invariant holds."""
        problems = []
        n, k = self.n, self.k
        expected = 2 * (n + k) - 2 - k
        if len(self.triangles) != expected:
            problems.append(f"triangle count {len(self.triangles)} != {expected}")
        for key, tri in self.triangles.items():
            if tuple(sorted(tri.sites)) != key or set(tri.delta) != set(key):
                problems.append(f"triangle {key} has inconsistent sites/contacts")
                continue
            if tri.kind != self.kind_of(key):
                problems.append(f"triangle {key} has kind {tri.kind}")
            fin = [s for s in key if s < n]
            vals = [tri.delta[s] for s in fin]
            if len(set(vals)) != len(vals):
                problems.append(f"triangle {key} repeats a contact edge {vals}")
            infs = [s - n for s in key if s >= n]
            for m in infs:
                if tri.delta[m + n] != m:
                    problems.append(f"triangle {key}: infinite site contact is not its vertex index")
            if len(infs) == 1:
                m = infs[0]
                if sorted(vals) != sorted([(m - 1) % k, m]):
                    problems.append(f"wedge {key} contacts {vals} are not the arms of vertex {m}")
            elif len(infs) == 2:
                m1, m2 = sorted(infs)
                m = m1 if (m1 + 1) % k == m2 else m2
                if (m + 1) % k not in (m1, m2) or vals != [m]:
                    problems.append(f"triangle {key} at infinity is inconsistent")
            elif len(infs) == 3:
                problems.append(f"triangle {key} has only infinite sites")
        # Euler relation with one outer face
        n_edges = len(self.pair_tris)
        if (n + k) - n_edges + (len(self.triangles) + 1) != 2:
            problems.append(f"Euler relation fails: V={n + k} E={n_edges} F={len(self.triangles) + 1}")
        if set(self.edges) != set(self.pair_tris):
            problems.append("edge registry differs from triangle adjacency")
        for pr, tris in self.pair_tris.items():
            a, b = pr
            want = 1 if (a >= n and b >= n) else 2
            if len(tris) != want:
                problems.append(f"edge {pr} bounds {len(tris)} triangles")
        for pr, edge in self.edges.items():
            problems.extend(self._audit_labels(edge))
        if frame is not None and not problems:
            for pr, edge in self.edges.items():
                try:
                    want = self.derive_edge(*pr, frame)
                except DiagramError as exc:
                    problems.append(str(exc))
                    continue
                if (want.start, want.end, want.labels) != (edge.start, edge.end, edge.labels):
                    problems.append(f"edge {pr} stored {edge.labels} {edge.start}->{edge.end}, derived "
                                    f"{want.labels} {want.start}->{want.end}")
        if not problems:
            problems.extend(audit_dcel(self))
        return problems

    def _audit_labels(self, edge):
        out = []
        k = self.k
        labels = edge.labels
        a, b = edge.key
        if a >= self.n:
            if labels:
                out.append(f"edge {edge.key} between infinite sites carries labels")
            return out
        if not labels:
            out.append(f"edge {edge.key} has no edgelets")
            return out
        for x, y in zip(labels, labels[1:]):
            da, db = (y[0] - x[0]) % k, None if y[1] is None else (y[1] - x[1]) % k
            if b >= self.n:
                if not (db is None and da == k - 1):
                    out.append(f"edge {edge.key}: illegal step {x}->{y}")
            elif not ((da == k - 1 and db == 0) or (da == 0 and db == 1)):
                out.append(f"edge {edge.key}: illegal step {x}->{y}")
        if b < self.n and any(x[0] == x[1] for x in labels):
            out.append(f"edge {edge.key}: label with equal indices")
        if len(set(labels)) != len(labels):
            out.append(f"edge {edge.key}: repeated label")
        return out

    def core(self):
        """Canonical comparable form: triangle contacts and edge labels."""
        tris = {key: tuple(t.delta[s] for s in key) for key, t in self.triangles.items()}
        edges = {pr: (tuple(e.labels), e.start, e.end) for pr, e in self.edges.items()}
        return tris, edges


# ------------------------------------------------------------------ DCEL


@dataclass(eq=False)
class HalfEdgelet:
    cell: int
    other: int
    label: tuple
    edge: tuple
    index: int
    twin: "HalfEdgelet | None" = None
    next: "HalfEdgelet | None" = None
    prev: "HalfEdgelet | None" = None

    def __repr__(self):
        return f"HalfEdgelet(cell={self.cell}, other={self.other}, label={self.label}, edge={self.edge}, i={self.index})"


def build_dcel(d: Diagram):
    """Half-edgelets per cell in counterclockwise boundary order.

    Returns ``(cells, chains)``: ``cells[s]`` lists the half-edgelets of cell
    ``s``; chains of infinite cells are open (no wrap-around link).
    """
    halves = {}
    for pr, edge in d.edges.items():
        a, b = pr
        if not edge.labels:
            continue
        fw = [HalfEdgelet(a, b, lab, pr, i) for i, lab in enumerate(edge.labels)]
        bw = [HalfEdgelet(b, a, (lab[1], lab[0]), pr, i) for i, lab in enumerate(edge.labels)]
        for h, g in zip(fw, bw):
            h.twin, g.twin = g, h
        halves[(a, b)] = fw
        halves[(b, a)] = bw[::-1]
    cells = {}
    for s in range(d.n + d.k):
        order = cell_neighbours(d, s)
        seq = []
        for r in order:
            seq.extend(halves.get((s, r), []))
        closed = s < d.n
        for i, h in enumerate(seq):
            if i + 1 < len(seq) or closed:
                nxt = seq[(i + 1) % len(seq)]
                h.next, nxt.prev = nxt, h
        cells[s] = seq
    return cells


def cell_neighbours(d: Diagram, s):
    """Neighbours of site ``s`` in counterclockwise order."""
    nbrs = d.neighbours(s)
    if not nbrs:
        return []

    def left_third(r):
        # the triangle on the left of s->r is the end triangle when s < r
        edge = d.edges[pair_key(s, r)]
        key = edge.end if s < r else edge.start
        if key is None:
            return None
        return d.triangles[key].third(s, r)

    start = min(nbrs)
    if s >= d.n:
        # open chain: start at the neighbour whose right triangle is missing
        for r in nbrs:
            edge = d.edges[pair_key(s, r)]
            right = edge.start if s < r else edge.end
            if right is None:
                start = r
                break
    out = [start]
    cur = start
    while True:
        nxt = left_third(cur)
        if nxt is None or nxt == start:
            break
        if nxt in out:
            raise DiagramError(f"cell of site {s} does not close")
        out.append(nxt)
        cur = nxt
    return out


def audit_dcel(d: Diagram):
    problems = []
    try:
        cells = build_dcel(d)
    except DiagramError as exc:
        return [str(exc)]
    for s, seq in cells.items():
        if s < d.n and len(cell_neighbours(d, s)) != len(d.neighbours(s)):
            problems.append(f"cell {s} boundary misses neighbours")
        for h in seq:
            if h.twin is None or h.twin.twin is not h:
                problems.append(f"twin involution broken at {h}")
            elif h.twin.label != (h.label[1], h.label[0]):
                problems.append(f"twin label not reversed at {h}")
            if h.next is not None and h.next.prev is not h:
                problems.append(f"next/prev mismatch at {h}")
            if s < d.n and h.next is None:
                problems.append(f"finite cell {s} boundary is open at {h}")
            if h.next is not None and s < d.n and h.next.label[0] is not None and h.label[0] is not None:
                # consecutive edgelets of one cell: the cell's own contact moves counterclockwise or stays
                step = (h.next.label[0] - h.label[0]) % d.k
                if step not in (0, d.k - 1) and h.next.other == h.other:
                    problems.append(f"cell {s}: contact jumps inside edge {h.edge}")
    return problems
