"""Kinetic engine: certificates, the event queue, and the repair handlers.

Certificates:

* ``GenericBisector`` on every internal edgelet of a finite-finite edge; fails
  when the pair direction crosses one of the two chords bounding its label.
* ``SingularBisector`` on an external edgelet lying on a terminal ray of its
  bisector; fails when the pair becomes parallel to one of the two polygon
  edges of that ray.
* ``Vertex`` per (finite vertex, site); fails when the site reaches an end of
  its contact edge.
* ``Edge`` per non-corner edge; fails (only when both endpoints are finite
  vertices) when the fourth site reaches the placement of the other three.

After every event the contacts of the touched vertices are kept or replaced
combinatorially, labels are re-derived just after the event time, and every
certificate touching a changed vertex or edge is rebuilt from scratch.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from kinvd.diagram import FINITE, WEDGE, Diagram, Frame, Triangle, pair_key, tri_key
from kinvd.errors import (
    DiagramError,
    EventTimeCollision,
    IdenticallyZero,
    InconsistentCertificate,
    SimultaneousEvents,
    SweepInconsistency,
)
from kinvd.motion import Probe, Scenario
from kinvd.oracle import build_diagram
from kinvd.placements import cone_coordinates, edge_parameters, solve_contacts
from kinvd.polygon import dot, sub
from kinvd.realroots import AFTER, AT, BEFORE, AlgebraicTime, RatPolynomial, compare, isolate_roots, sign_at

GENERIC_BISECTOR = "GenericBisector"
SINGULAR_BISECTOR = "SingularBisector"
VERTEX = "Vertex"
EDGE = "Edge"

EVENT_KINDS = (
    "GenericBisector",
    "GenericCorner",
    "GenericFlip",
    "SingularBisectorStart",
    "SingularInitialCorner",
    "SingularIntermediateCorner",
    "SingularFlip",
    "SingularFinalCorner",
)


@dataclass(eq=False)
class Certificate:
    kind: str
    key: tuple
    polys: tuple
    time: AlgebraicTime | None = None
    which: int | None = None
    data: dict = field(default_factory=dict)
    alive: bool = True


@dataclass
class EventRecord:
    time: AlgebraicTime
    kind: str
    sites: tuple
    rotation: int | None = None
    mutations: list = field(default_factory=list)
    summary: str = ""

    def to_record(self):
        t = self.time
        out = {"time": t.to_record() if isinstance(t, AlgebraicTime) else {"approx": float(t)}}
        out.update(kind=self.kind, sites=list(self.sites), summary=self.summary)
        if self.rotation is not None:
            out["rotation"] = self.rotation
        if self.mutations:
            out["mutations"] = [m.to_record() if hasattr(m, "to_record") else m for m in self.mutations]
        return out


def _as_time(t):
    return t if isinstance(t, AlgebraicTime) else AlgebraicTime.rational(t)


class KineticEngine:
    """Kinetic Voronoi diagram of a scenario.

    ``audit`` runs the structural audit and the queue census after every
    event (and structural checks after every singular sub-flip);
    ``check_geometry`` additionally validates every new vertex placement
    exactly just after the event time.
    """

    def __init__(self, scenario: Scenario, t0=None, *, audit=False, check_geometry=False, t_end=None):
        self.scenario = scenario
        self.Q = scenario.polygon
        self.points = scenario.points
        self.n = scenario.n
        self.k = self.Q.k
        self.t_end = Fraction(scenario.t_end if t_end is None else t_end)
        self.audit_enabled = audit
        self.check_geometry = check_geometry
        self.audit_failures = []
        self.audit_counts = {"event": 0, "subevent": 0}
        self.log: list = []
        self.certs: dict = {}
        self.by_pair: dict = {}
        self.by_tri: dict = {}
        self.heap = []
        self._seq = itertools.count()
        self.fault_hook = None
        self.initialize(scenario.t_start if t0 is None else t0)

    # ------------------------------------------------------------ setup
    def initialize(self, t0):
        t0 = Fraction(t0)
        static = build_diagram(self.scenario, t0)
        self.diagram: Diagram = static.diagram
        self.now = AlgebraicTime.rational(t0)
        self.frame = Frame(self.Q, self.points, Probe(t0))
        for key in list(self.diagram.triangles):
            self._build_vertex_certs(key)
        for pr in list(self.diagram.edges):
            self._build_edge_certs(pr, self.frame)
        if self.audit_enabled:
            self._run_audit("initialize")

    # ------------------------------------------------------------ queue
    def _register(self, cert: Certificate, pair=None, tri=None):
        old = self.certs.get(cert.key)
        if old is not None:
            old.alive = False
        self.certs[cert.key] = cert
        if pair is not None:
            self.by_pair.setdefault(pair, set()).add(cert.key)
        if tri is not None:
            self.by_tri.setdefault(tri, set()).add(cert.key)
        self._schedule(cert)

    def _drop(self, key):
        cert = self.certs.pop(key, None)
        if cert is not None:
            cert.alive = False

    def _schedule(self, cert: Certificate):
        best, which = None, None
        for idx, poly in enumerate(cert.polys):
            t = self._first_failure(poly, cert, idx)
            if t is not None and (best is None or compare(t, best) < 0):
                best, which = t, idx
        cert.time, cert.which = best, which
        if best is not None:
            heapq.heappush(self.heap, (best, next(self._seq), cert))

    def _first_failure(self, poly: RatPolynomial, cert, idx):
        if poly.degree <= 0:
            return None
        lo = self.now.lo
        for r in isolate_roots(poly, (lo, self.t_end)):
            if compare(r, self.now) <= 0:
                continue
            if sign_at(poly, r, BEFORE) == sign_at(poly, r, AFTER):
                continue
            if cert.kind == EDGE and not self._edge_root_valid(cert, r):
                continue
            return r
        return None

    def _peek(self):
        while self.heap and not self.heap[0][2].alive:
            heapq.heappop(self.heap)
        return self.heap[0] if self.heap else None

    def next_event_time(self):
        top = self._peek()
        return top[0] if top else None

    # ------------------------------------------------------------ certificates
    def _finite_tri(self, key):
        return all(s < self.n for s in key)

    def _placement_polys(self, key, delta=None):
        tri = self.diagram.triangles[key]
        delta = tri.delta if delta is None else delta
        traj = [self.points[s].poly for s in key]
        return solve_contacts(self.Q, traj, [delta[s] for s in key])

    def _build_vertex_certs(self, key):
        for ck in list(self.by_tri.pop(key, ())):
            self._drop(ck)
        if key not in self.diagram.triangles or not self._finite_tri(key):
            return
        tri = self.diagram.triangles[key]
        c, lam = self._placement_polys(key)
        for s in key:
            n0, n1 = edge_parameters(self.Q, self.points[s].poly, c, lam, tri.delta[s])
            for p in (n0, n1):
                if p.is_zero():
                    raise IdenticallyZero(f"site {s} stays at a vertex of triangle {key}")
            cert = Certificate(VERTEX, ("vtx", key, s), (n0, n1), data={"tri": key, "site": s, "edge": tri.delta[s]})
            self._register(cert, tri=key)

    def _build_edge_certs(self, pr, frame):
        for ck in list(self.by_pair.pop(pr, ())):
            self._drop(ck)
        edge = self.diagram.edges.get(pr)
        if edge is None:
            return
        a, b = pr
        if a >= self.n:
            return
        labels = edge.labels
        if b < self.n:
            pa, pb = self.points[a], self.points[b]
            d = (pb.x - pa.x, pb.y - pa.y)
            for lab in labels[1:-1]:
                i, j = lab
                polys = (
                    _cross_poly(d, self.Q.chord(i, j)),
                    _cross_poly(d, self.Q.chord(i + 1, j + 1)),
                )
                self._register(Certificate(GENERIC_BISECTOR, ("bis", pr, lab), polys, data={"pair": pr, "label": lab}),
                               pair=pr)
            st = frame.structure(a, b)
            ends = []
            if labels[0] == st.first:
                ends.append(("start", labels[0]))
            if labels[-1] == st.last:
                ends.append(("end", labels[-1]))
            for end, lab in ends:
                x, y = lab
                polys = (_cross_poly(d, self.Q.edge_vector(x)), _cross_poly(d, self.Q.edge_vector(y)))
                self._register(
                    Certificate(SINGULAR_BISECTOR, ("sbis", pr, end), polys,
                                data={"pair": pr, "end": end, "label": lab, "edges": (x, y)}),
                    pair=pr,
                )
        if len(labels) == 1:
            polys = ()
            data = {"pair": pr}
            if edge.start is not None and edge.end is not None and self._finite_tri(edge.start) and \
                    self._finite_tri(edge.end):
                t1, t2 = edge.start, edge.end
                w = self.diagram.triangles[t2].third(a, b)
                e = self.diagram.triangles[t2].delta[w]
                c, lam = self._placement_polys(t1)
                res = dot(self.Q.normals[e], sub(self.points[w].poly, c)) - lam
                if res.is_zero():
                    raise IdenticallyZero(f"sites of edge {pr} stay cocircular")
                polys = (res,)
                data.update(tri=t1, other=t2, w=w, e=e)
            self._register(Certificate(EDGE, ("edge", pr), polys, data=data), pair=pr)

    def _edge_root_valid(self, cert, r):
        """A residual root is a flip only if the fourth site touches the
        placement on that very edge."""
        d = cert.data
        c, lam = self._placement_polys(d["tri"])
        w = self.points[d["w"]].poly
        for e in range(self.k):
            if e == d["e"]:
                continue
            if sign_at(dot(self.Q.normals[e], sub(w, c)) - lam, r, AT) >= 0:
                return False
        return True

    def expected_certificates(self, frame=None):
        """Certificate keys the queue must hold for the current diagram."""
        frame = frame or self.frame
        out = set()
        for key in self.diagram.triangles:
            if self._finite_tri(key):
                out.update(("vtx", key, s) for s in key)
        for pr, edge in self.diagram.edges.items():
            a, b = pr
            if a >= self.n:
                continue
            if b < self.n:
                out.update(("bis", pr, lab) for lab in edge.labels[1:-1])
                st = frame.structure(a, b)
                if edge.labels[0] == st.first:
                    out.add(("sbis", pr, "start"))
                if edge.labels[-1] == st.last:
                    out.add(("sbis", pr, "end"))
            if len(edge.labels) == 1:
                out.add(("edge", pr))
        return out

    def census(self):
        want = self.expected_certificates()
        have = {k for k, c in self.certs.items() if c.alive}
        problems = []
        if want - have:
            problems.append(f"missing certificates {sorted(want - have, key=str)[:5]}")
        if have - want:
            problems.append(f"stale certificates {sorted(have - want, key=str)[:5]}")
        for key, cert in self.certs.items():
            if cert.time is not None and compare(cert.time, self.now) <= 0:
                problems.append(f"certificate {key} scheduled in the past")
        return problems

    # ------------------------------------------------------------ stepping
    def step(self):
        """Process the next event (or singular sequence); ``None`` when done."""
        top = self._peek()
        if top is None or compare(top[0], AlgebraicTime.rational(self.t_end)) > 0:
            return None
        t, _, cert = heapq.heappop(self.heap)
        batch = [cert]
        while True:
            nxt = self._peek()
            if nxt is None or compare(nxt[0], t) != 0:
                break
            batch.append(heapq.heappop(self.heap)[2])
        for c in batch:
            c.alive = False
            self.certs.pop(c.key, None)
        self.now = t
        records = self._dispatch(t, batch)
        self.frame = Frame(self.Q, self.points, Probe(t, AFTER))
        if self.fault_hook is not None:
            self.fault_hook(self, records)
        if self.audit_enabled:
            self._run_audit(records[0].kind if records else "event")
        self.log.extend(records)
        return records

    def run_until(self, t_end=None):
        limit = AlgebraicTime.rational(self.t_end if t_end is None else t_end)
        out = []
        while True:
            top = self._peek()
            if top is None or compare(top[0], limit) > 0:
                break
            out.extend(self.step())
        return out

    def advance_before(self, t):
        """Process every event strictly before ``t``; raises if one is at ``t``."""
        t = AlgebraicTime.rational(t) if not isinstance(t, AlgebraicTime) else t
        out = []
        while True:
            top = self._peek()
            if top is None:
                break
            c = compare(top[0], t)
            if c == 0:
                raise EventTimeCollision(f"an event occurs exactly at {t}")
            if c > 0:
                break
            out.extend(self.step())
        return out

    def _dispatch(self, t, batch):
        if len(batch) == 1:
            c = batch[0]
            if c.kind == GENERIC_BISECTOR:
                return self._handle_bisector(t, c)
            if c.kind == VERTEX:
                if self._vertex_partner(c) is not None:
                    raise InconsistentCertificate(f"singular vertex certificate {c.key} fired without its bisector")
                return self._handle_corner(t, c)
            if c.kind == EDGE:
                return self._handle_flip(t, c)
            if c.kind == SINGULAR_BISECTOR:
                return self.handle_singular_pair(t, c, None)
        if len(batch) == 2:
            kinds = {c.kind for c in batch}
            if kinds == {SINGULAR_BISECTOR, VERTEX}:
                sb = next(c for c in batch if c.kind == SINGULAR_BISECTOR)
                vc = next(c for c in batch if c.kind == VERTEX)
                partner = self._vertex_partner(vc)
                if partner is not None and pair_key(vc.data["site"], partner) == sb.data["pair"]:
                    return self.handle_singular_pair(t, sb, vc)
        raise SimultaneousEvents(f"{len(batch)} certificates fail at {t!r}: {[c.key for c in batch]}")

    # ------------------------------------------------------------ handlers
    def _refresh(self, tris, extra_pairs=(), verify=True):
        """Rebuild labels and certificates around the given triangles at now+.

        With ``verify`` the labels left by the combinatorial surgery must
        equal the labels re-derived from the contacts.
        """
        frame = Frame(self.Q, self.points, Probe(self.now, AFTER))
        pairs = set(pair_key(*p) for p in extra_pairs)
        for key in tris:
            a, b, c = key
            pairs.update({(a, b), (a, c), (b, c)})
        stored = {pr: list(self.diagram.edges[pr].labels) for pr in pairs if pr in self.diagram.edges}
        self.diagram.refresh_edges(pairs, frame)
        if verify:
            for pr, labels in stored.items():
                e = self.diagram.edges.get(pr)
                if e is not None and e.labels != labels:
                    raise InconsistentCertificate(f"edge {pr}: surgery left {labels}, geometry gives {e.labels}")
        for key in tris:
            self._build_vertex_certs(key)
        for pr in pairs:
            self._build_edge_certs(pr, frame)
        if self.check_geometry:
            for key in tris:
                if key in self.diagram.triangles:
                    self.validate_triangle(key, frame.probe)
        return frame

    def _vertex_partner(self, cert):
        """The other site of the triangle already on the edge the vertex
        certificate's site is moving onto (a singular corner), or None."""
        key, s, a = cert.data["tri"], cert.data["site"], cert.data["edge"]
        new = (a - 1) % self.k if cert.which == 0 else (a + 1) % self.k
        tri = self.diagram.triangles[key]
        for o in key:
            if o != s and tri.delta[o] == new:
                return o
        return None

    def _handle_bisector(self, t, cert):
        pr, old = cert.data["pair"], cert.data["label"]
        edge = self.diagram.edges.get(pr)
        if edge is None or old not in edge.labels[1:-1]:
            raise InconsistentCertificate(f"bisector certificate {cert.key} no longer describes the diagram")
        frame = Frame(self.Q, self.points, Probe(t, AFTER))
        st = frame.structure(*pr)
        pos = edge.labels.index(old)
        before_lab = edge.labels[pos - 1]
        after_lab = edge.labels[pos + 1]
        i, j = st.labels.index(before_lab), st.labels.index(after_lab)
        if j - i != 2:
            raise InconsistentCertificate(f"edge {pr} does not keep one internal edgelet after the event")
        new = st.labels[i + 1]
        rec = self.diagram.replace_internal_edgelet(pr, old, new)
        tris = [x for x in (edge.start, edge.end) if x is not None]
        self._refresh(tris)
        ids = tuple(self.diagram.site_id(s) for s in pr)
        return [EventRecord(t, "GenericBisector", ids, None, [rec], f"edgelet {old} -> {new}")]

    def _handle_corner(self, t, cert):
        key, p, a = cert.data["tri"], cert.data["site"], cert.data["edge"]
        tri = self.diagram.triangles.get(key)
        if tri is None or tri.delta[p] != a:
            raise InconsistentCertificate(f"vertex certificate {cert.key} is stale")
        new = (a - 1) % self.k if cert.which == 0 else (a + 1) % self.k
        others = [s for s in key if s != p]
        losing = gaining = None
        for o in others:
            edge = self.diagram.edges[pair_key(p, o)]
            at_start = edge.start == key
            lab_new = _with_contact(edge, edge.labels[0] if at_start else edge.labels[-1], p, new)
            if len(edge.labels) >= 2:
                nb = edge.labels[1] if at_start else edge.labels[-2]
                if nb == lab_new:
                    losing = o
                    continue
            gaining = o
        if losing is None or gaining is None:
            raise InconsistentCertificate(f"corner event at {key} has no losing/gaining edge pair")
        rec = self.diagram.transfer_edgelet((p, losing), (p, gaining), key, p, new)
        self._refresh([key])
        ids = tuple(self.diagram.site_id(s) for s in (p, losing, gaining))
        return [EventRecord(t, "GenericCorner", ids, None, [rec], f"site {ids[0]} contact e{a} -> e{new}")]

    def _handle_flip(self, t, cert):
        d = cert.data
        pr = d["pair"]
        if "tri" not in d:
            raise InconsistentCertificate(f"edge certificate {cert.key} without a failure polynomial fired")
        edge = self.diagram.edges.get(pr)
        if edge is None or not edge.non_corner:
            raise InconsistentCertificate(f"edge certificate {cert.key} is stale")
        r = self.diagram.triangles[d["tri"]].third(*pr)
        w = d["w"]
        frame = Frame(self.Q, self.points, Probe(t, AFTER))
        rec = self.diagram.flip_edge(pr, (r, w), frame)
        p, q = pr
        new_tris = [tri_key(r, w, p), tri_key(r, w, q)]
        self._refresh(new_tris, extra_pairs=[pr])
        for key in (d["tri"], d["other"]):
            self._build_vertex_certs(key)
        ids = tuple(self.diagram.site_id(s) for s in (p, q, r, w))
        return [EventRecord(t, "GenericFlip", ids, None, [rec], f"{ids[0]}{ids[1]} -> {ids[2]}{ids[3]}")]

    # ------------------------------------------------------------ singular sequences
    def handle_singular_pair(self, t, bcert, vcert):
        """Rotational sweep at frozen time ``t``.

        The pair ``A, B`` becomes parallel to edge e_i; B is the site on e_i.
        The terminal ray moves from vertex v_m to the other endpoint v_m' of
        e_i. The walk around A from the old ray's vertex to the new one flips
        every ``A r_j`` to ``B r_{j+1}``.
        """
        d = self.diagram
        k, n = self.k, self.n
        pr, end = bcert.data["pair"], bcert.data["end"]
        edge = d.edges.get(pr)
        if edge is None:
            raise InconsistentCertificate(f"singular certificate {bcert.key} is stale")
        lab = edge.labels[0] if end == "start" else edge.labels[-1]
        if lab != bcert.data["label"]:
            raise InconsistentCertificate(f"singular certificate {bcert.key} is stale")
        x, y = lab
        i = (x, y)[bcert.which]
        a, b = pr
        B, A = (a, b) if i == x else (b, a)
        v_old = x if (x - 1) % k == y else y  # shared vertex of e_x and e_y
        v_new = (i + 1) % k if v_old == i else i
        other = (i + 1) % k if v_new == (i + 1) % k else (i - 1) % k
        start_tri = edge.start if end == "start" else edge.end
        if vcert is not None:
            if vcert.data["tri"] != start_tri or vcert.data["site"] != A:
                raise InconsistentCertificate("singular vertex and bisector certificates disagree")
        elif self._finite_tri(start_tri):
            raise InconsistentCertificate("singular bisector fired alone at a finite vertex")
        ids = lambda *ss: tuple(d.site_id(s) for s in ss)  # noqa: E731
        before_frame = Frame(self.Q, self.points, Probe(t, BEFORE))
        old_edges = {pk: list(e.labels) for pk, e in d.edges.items()}
        records = [EventRecord(t, "SingularBisectorStart", ids(A, B), 0, [],
                               f"{d.site_id(A)}{d.site_id(B)} parallel to e{i}")]
        rot = 1
        if vcert is not None:
            records.append(EventRecord(t, "SingularInitialCorner", ids(A, B, start_tri and d.triangles[start_tri].third(A, B)),
                                       rot, [], f"site {d.site_id(A)} reaches v{v_old}"))
            rot += 1
        r_plus, m_plus = self._sweep_target(t, A, B, v_new, i, other)
        cur = start_tri
        r = d.triangles[cur].third(A, B)
        chain = [r]
        touched = {cur}
        removed = set()
        limit = len(d.triangles) + 1
        while r != r_plus:
            if len(chain) > limit:
                raise SweepInconsistency("rotational walk does not reach the new ray")
            nxt = d.other_triangle(A, r, cur)
            if nxt is None:
                raise SweepInconsistency(f"walk around {A} stops at neighbour {r}")
            r2 = d.triangles[nxt].third(A, r)
            if r2 == B or pair_key(B, r2) in d.pair_tris:
                raise SweepInconsistency(f"flip {A}{r} -> {B}{r2} would duplicate an edge")
            old = d.triangles[nxt]
            if old.delta[A] != i:
                raise SweepInconsistency(f"vertex {nxt} is not inside the swept region")
            j = len(chain) - 1
            records.extend(self._intermediate_corners(t, A, r, j, len(chain) == 1, old_edges, rot, ids))
            rot = records[-1].rotation + 1
            d.remove_triangle(cur)
            d.remove_triangle(nxt)
            removed.update({cur, nxt})
            delta_b = {B: i, r: old.delta[r], r2: old.delta[r2]}
            kb = d.add_triangle(Triangle(tri_key(B, r, r2), delta_b, d.kind_of((B, r, r2))))
            ka = d.add_triangle(Triangle(tri_key(A, B, r2), {A: i, B: other, r2: old.delta[r2]}, d.kind_of((A, B, r2))))
            touched.update({kb, ka})
            records.append(EventRecord(t, "SingularFlip", ids(A, r, B, r2), rot, [],
                                       f"{d.site_id(A)}{d.site_id(r)} -> {d.site_id(B)}{d.site_id(r2)}"))
            rot += 1
            if self.audit_enabled:
                self.audit_counts["subevent"] += 1
                problems = self._structural_audit()
                if problems:
                    self.audit_failures.append(("SingularFlip", float(t), problems))
            cur, r = ka, r2
            chain.append(r)
        s_count = len(chain) - 1
        records.extend(self._final_corners(t, A, r, i, m_plus, s_count, old_edges, before_frame, rot, ids,
                                           start_tri, v_old))
        rot = records[-1].rotation + 1
        final = d.triangles[cur]
        final.delta = {A: i, B: other, r: (m_plus if r < n else r - n)}
        records.append(EventRecord(t, "SingularFinalCorner", ids(A, B, r), rot, [],
                                   f"new ray at v{v_new}, third site {d.site_id(r)}"))
        touched = {tk for tk in touched if tk in d.triangles}
        gone_pairs = set()
        for tk in removed:
            a_, b_, c_ = tk
            gone_pairs.update({(a_, b_), (a_, c_), (b_, c_)})
        for tk in removed:
            for ck in list(self.by_tri.pop(tk, ())):
                self._drop(ck)
        self._refresh(sorted(touched), extra_pairs=gone_pairs, verify=False)
        return records

    def _sweep_target(self, t, A, B, v_new, i, other):
        """Third site ``r+`` of the new ray's vertex and its contact edge.

        Placements along the new ray pin v_m' at B and grow; site s enters at
        the largest ratio over the edges not at v_m'. The first site to
        enter wins; if none is inside the cone at v_m', the ray is unbounded.
        """
        Q, k, n = self.Q, self.k, self.n
        vb = Q.vertex(v_new)
        adj = (i, other)
        best = None
        Bp = self.points[B].poly
        for s in range(n):
            if s in (A, B):
                continue
            rel = sub(self.points[s].poly, Bp)
            signs = [sign_at(dot(Q.normals[e], rel), t, AT) for e in adj]
            if 0 in signs:
                raise SweepInconsistency(f"site {s} lies on the boundary of the sweep cone")
            if any(sg > 0 for sg in signs):
                continue
            cands = []
            for e in range(k):
                if e in adj:
                    continue
                ratio = dot(Q.normals[e], rel) * (1 / (1 - dot(Q.normals[e], vb)))
                cands.append((e, ratio))
            e_best, r_best = cands[0]
            for e, ratio in cands[1:]:
                sg = sign_at(ratio - r_best, t, AT)
                if sg == 0:
                    raise SweepInconsistency(f"site {s} enters the sweep at a vertex")
                if sg > 0:
                    e_best, r_best = e, ratio
            if best is None:
                best = (s, e_best, r_best)
                continue
            sg = sign_at(r_best - best[2], t, AT)
            if sg == 0:
                raise SweepInconsistency("two sites enter the sweep simultaneously")
            if sg < 0:
                best = (s, e_best, r_best)
        if best is None:
            return n + v_new, v_new
        return best[0], best[1]

    def _a_labels(self, A, r, old_edges):
        pk = pair_key(A, r)
        labs = old_edges.get(pk, [])
        if not labs or labs[0][1] is None:
            return []
        return labs if A < r else [(y, x) for x, y in reversed(labs)]

    def _intermediate_corners(self, t, A, r, j, first, old_edges, rot, ids):
        labs = self._a_labels(A, r, old_edges)
        count = max(len(labs) - (2 if first else 1), 0) if labs else 0
        return [EventRecord(t, "SingularIntermediateCorner", ids(A, r), rot + c, [], f"breakpoint on {ids(A, r)}")
                for c in range(count)]

    def _final_corners(self, t, A, r, i, m_plus, s_count, old_edges, frame, rot, ids, start_tri, v_old):
        if r >= self.n:
            return []
        try:
            st = frame.structure(A, r) if A < r else None
            labels = st.labels if st else [(y, x) for x, y in reversed(frame.structure(r, A).labels)]
        except DiagramError:
            return []
        f = (i, m_plus)
        if s_count == 0:
            start = (i, self.diagram.triangles[start_tri].delta[r]) if start_tri in self.diagram.triangles else None
        else:
            labs = self._a_labels(A, r, old_edges)
            start = (i, labs[0][1]) if labs else None
        if start is None or f not in labels or start not in labels:
            return []
        count = abs(labels.index(f) - labels.index(start))
        return [EventRecord(t, "SingularIntermediateCorner", ids(A, r), rot + c, [], f"breakpoint on {ids(A, r)}")
                for c in range(count)]

    # ------------------------------------------------------------ checks
    def _structural_audit(self):
        d = self.diagram
        problems = []
        expected = 2 * (d.n + d.k) - 2 - d.k
        if len(d.triangles) != expected:
            problems.append(f"triangle count {len(d.triangles)} != {expected}")
        for pr, tris in d.pair_tris.items():
            want = 1 if (pr[0] >= d.n and pr[1] >= d.n) else 2
            if len(tris) != want:
                problems.append(f"edge {pr} bounds {len(tris)} triangles")
        if (d.n + d.k) - len(d.pair_tris) + len(d.triangles) + 1 != 2:
            problems.append("Euler relation fails")
        return problems

    def _run_audit(self, what):
        self.audit_counts["event"] += 1
        problems = self.diagram.audit(self.frame) + self.census()
        if problems:
            self.audit_failures.append((what, float(self.now), problems))

    def validate_triangle(self, key, probe):
        """Exact local check of a vertex placement at ``probe``."""
        d, Q = self.diagram, self.Q
        tri = d.triangles[key]
        fin = [s for s in key if s < self.n]
        opposite = []
        for x, y in ((key[0], key[1]), (key[0], key[2]), (key[1], key[2])):
            o = d.other_triangle(x, y, key)
            if o is not None:
                w = d.triangles[o].third(x, y)
                if w < self.n:
                    opposite.append(w)
        bad = []
        if len(fin) == 3:
            c, lam = self._placement_polys(key)
            for s in key:
                n0, n1 = edge_parameters(Q, self.points[s].poly, c, lam, tri.delta[s])
                if probe.sign(n0) <= 0 or probe.sign(n1) >= 0:
                    bad.append(f"site {s} off its contact edge")
            for w in opposite:
                wp = self.points[w].poly
                if not any(probe.sign(dot(Q.normals[e], sub(wp, c)) - lam) > 0 for e in range(self.k)):
                    bad.append(f"site {w} inside the placement")
        elif len(fin) == 2:
            m = [s for s in key if s >= self.n][0] - self.n
            p = next(s for s in fin if tri.delta[s] == (m - 1) % self.k)
            q = next(s for s in fin if tri.delta[s] == m)
            a1 = sub(Q.vertex(m - 1), Q.vertex(m))
            a2 = sub(Q.vertex(m + 1), Q.vertex(m))
            pp, qp = self.points[p].poly, self.points[q].poly
            s_, mu = cone_coordinates(a1, a2, sub(pp, qp))
            if probe.sign(s_) <= 0 or probe.sign(mu) >= 0:
                bad.append("wedge arms inverted")
            apex = sub(pp, (s_ * a1[0], s_ * a1[1]))
            for w in opposite:
                al, be = cone_coordinates(a1, a2, sub(self.points[w].poly, apex))
                if probe.sign(al) > 0 and probe.sign(be) > 0:
                    bad.append(f"site {w} inside the wedge")
        else:
            p = fin[0]
            m = tri.delta[p]
            for w in opposite:
                if probe.sign(dot(Q.normals[m], sub(self.points[w].poly, self.points[p].poly))) <= 0:
                    bad.append(f"site {w} beyond the halfplane of {p}")
        if bad:
            raise InconsistentCertificate(f"triangle {key} invalid just after {self.now!r}: {bad}")


def _cross_poly(d, w):
    return d[0] * w[1] - d[1] * w[0]


def _with_contact(edge, end_label, site, new):
    """``end_label`` with ``site``'s contact replaced by ``new``."""
    lab = list(end_label)
    lab[0 if site == edge.a else 1] = new
    return tuple(lab)


__all__ = ["KineticEngine", "Certificate", "EventRecord", "EVENT_KINDS", "FINITE", "WEDGE"]
