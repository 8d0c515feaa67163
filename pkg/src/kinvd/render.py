"""Deterministic SVG rendering of a diagram at a rational time.

Geometry is computed exactly; floats appear only when coordinates are
written out.
"""

from __future__ import annotations

from fractions import Fraction

from kinvd.diagram import FINITE, Diagram, Frame, cell_neighbours, pair_key
from kinvd.motion import Probe
from kinvd.placements import bisector_polyline, solve_contacts
from kinvd.polygon import add, as_fraction, scale

_PALETTE = ("#f4cccc", "#fce5cd", "#fff2cc", "#d9ead3", "#d0e0e3", "#cfe2f3", "#d9d2e9", "#ead1dc")


def vertex_centers(diagram: Diagram, pos):
    """Center and scale of every finite Delaunay triangle's placement."""
    out = {}
    Q = diagram.Q
    for key, tri in diagram.triangles.items():
        if tri.kind != FINITE:
            continue
        c, lam = solve_contacts(Q, [pos[s] for s in key], [tri.delta[s] for s in key])
        out[key] = (c, lam)
    return out


def view_box(pos, centers):
    """Site bounding box padded by twice the largest placement scale."""
    xs = [p[0] for p in pos]
    ys = [p[1] for p in pos]
    pad = 2 * max((lam for _, lam in centers.values()), default=Fraction(0))
    if pad == 0:
        pad = Fraction(1)
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


def _far(box):
    return 4 * max(box[2] - box[0], box[3] - box[1]) + 4 * max(abs(c) for c in box)


def edge_geometry(diagram: Diagram, frame: Frame, centers, a, b, far):
    """``(polyline, breakpoints)`` of the finite-finite edge (a, b), from its
    start vertex to its end vertex; infinite ends are pushed out to ``far``."""
    Q = diagram.Q
    pos = frame.pos
    edge = diagram.edges[(a, b)]
    d_first, bps, d_last = bisector_polyline(Q, pos[a], pos[b])
    labels = frame.structure(a, b).labels
    i = labels.index(edge.labels[0])
    j = labels.index(edge.labels[-1])
    inner = list(bps[i:j])
    if edge.start is not None and diagram.triangles[edge.start].kind == FINITE:
        head = centers[edge.start][0]
    else:
        head = add(bps[0], scale(far, d_first))
    if edge.end is not None and diagram.triangles[edge.end].kind == FINITE:
        tail = centers[edge.end][0]
    else:
        tail = add(bps[-1], scale(far, d_last))
    return [head, *inner, tail], inner


def cell_polygon(diagram: Diagram, frame: Frame, centers, s, far):
    """Boundary of the cell of finite site ``s`` (counterclockwise), with
    unbounded parts closed far away along the directions of infinite sites."""
    ring = []
    nbrs = cell_neighbours(diagram, s)
    for r in nbrs:
        if diagram.is_infinite(r):
            m = r - diagram.n
            v = diagram.Q.vertex(m)
            ring.append(scale(far * 2, (-v[0], -v[1])))
            continue
        poly, _ = edge_geometry(diagram, frame, centers, *pair_key(s, r), far)
        # s on the left of the stored orientation means counterclockwise traversal
        ring.extend(poly if s < r else poly[::-1])
    return ring


def clip(ring, box):
    """Sutherland-Hodgman clip of a ring against an axis-aligned box."""
    x0, y0, x1, y1 = box
    planes = (
        (lambda p: p[0] >= x0, 0, x0),
        (lambda p: p[0] <= x1, 0, x1),
        (lambda p: p[1] >= y0, 1, y0),
        (lambda p: p[1] <= y1, 1, y1),
    )
    out = list(ring)
    for inside, axis, val in planes:
        if not out:
            break
        src, out = out, []
        for idx, cur in enumerate(src):
            prev = src[idx - 1]
            if inside(cur):
                if not inside(prev):
                    out.append(_cut(prev, cur, axis, val))
                out.append(cur)
            elif inside(prev):
                out.append(_cut(prev, cur, axis, val))
    return out


def _cut(p, q, axis, val):
    t = (val - p[axis]) / (q[axis] - p[axis])
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def clip_segment(p, q, box):
    """Liang-Barsky clip; ``None`` when the segment misses the box."""
    x0, y0, x1, y1 = box
    t0, t1 = Fraction(0), Fraction(1)
    dx, dy = q[0] - p[0], q[1] - p[1]
    for pk, qk in ((-dx, p[0] - x0), (dx, x1 - p[0]), (-dy, p[1] - y0), (dy, y1 - p[1])):
        if pk == 0:
            if qk < 0:
                return None
            continue
        r = Fraction(qk) / pk
        if pk < 0:
            t0 = max(t0, r)
        else:
            t1 = min(t1, r)
        if t0 > t1:
            return None
    return (p[0] + t0 * dx, p[1] + t0 * dy), (p[0] + t1 * dx, p[1] + t1 * dy)


def _fmt(x):
    return f"{float(x):.6f}".rstrip("0").rstrip(".")


def render_svg(diagram: Diagram, points, t, *, delaunay=False, width=800) -> str:
    """SVG of the diagram at rational time ``t`` (which must be event-free)."""
    t = as_fraction(t)
    frame = Frame(diagram.Q, points, Probe(t))
    pos = frame.pos
    n = diagram.n
    centers = vertex_centers(diagram, pos)
    box = view_box(pos[:n], centers)
    far = _far(box)
    x0, y0, x1, y1 = box
    w, h = x1 - x0, y1 - y0
    height = max(1, round(width * float(h / w)))

    def pt(p):
        # flip y so the picture is in the usual orientation
        return f"{_fmt(p[0])},{_fmt(y0 + y1 - p[1])}"

    stroke = _fmt(w / 400)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">',
        f'<title>t = {t.numerator}/{t.denominator}</title>',
        '<g id="cells">',
    ]
    for s in range(n):
        ring = clip(cell_polygon(diagram, frame, centers, s, far), box)
        if len(ring) < 3:
            continue
        d = "M " + " L ".join(pt(p) for p in ring) + " Z"
        color = _PALETTE[s % len(_PALETTE)]
        lines.append(f'<path class="cell" data-site="{diagram.site_id(s)}" d="{d}" fill="{color}" stroke="none"/>')
    lines.append("</g>")
    lines.append('<g id="edges" fill="none" stroke="black" stroke-width="%s">' % stroke)
    markers = []
    for a, b in sorted(diagram.edges):
        if b >= n:
            continue
        poly, inner = edge_geometry(diagram, frame, centers, a, b, far)
        pieces = [clip_segment(p, q, box) for p, q in zip(poly, poly[1:])]
        kept = [seg for seg in pieces if seg is not None]
        if not kept:
            continue
        chain = [kept[0][0]]
        for seg in kept:
            if seg[0] != chain[-1]:
                chain.append(seg[0])
            chain.append(seg[1])
        lines.append(
            f'<polyline class="edge" data-sites="{diagram.site_id(a)} {diagram.site_id(b)}" '
            f'points="{" ".join(pt(p) for p in chain)}"/>'
        )
        for bp in inner:
            if x0 <= bp[0] <= x1 and y0 <= bp[1] <= y1:
                markers.append(f'<rect class="breakpoint" x="{_fmt(bp[0] - w / 200)}" '
                               f'y="{_fmt(y0 + y1 - bp[1] - w / 200)}" width="{_fmt(w / 100)}" '
                               f'height="{_fmt(w / 100)}" fill="red"/>')
    lines.append("</g>")
    lines.append('<g id="breakpoints">')
    lines.extend(markers)
    lines.append("</g>")
    if delaunay:
        lines.append('<g id="delaunay" stroke="blue" stroke-width="%s" stroke-dasharray="%s">' % (stroke, stroke))
        for a, b in sorted(diagram.edges):
            if b < n:
                lines.append(f'<line x1="{_fmt(pos[a][0])}" y1="{_fmt(y0 + y1 - pos[a][1])}" '
                             f'x2="{_fmt(pos[b][0])}" y2="{_fmt(y0 + y1 - pos[b][1])}"/>')
        lines.append("</g>")
    lines.append('<g id="sites">')
    for s in range(n):
        lines.append(f'<circle class="site" data-site="{diagram.site_id(s)}" cx="{_fmt(pos[s][0])}" '
                     f'cy="{_fmt(y0 + y1 - pos[s][1])}" r="{_fmt(w / 150)}" fill="black"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
