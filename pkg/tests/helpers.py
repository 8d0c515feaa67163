"""Shared test helpers: exact polyline intersection and the acceptance registry."""

from fractions import Fraction

from kinvd.placements import bisector_polyline
from kinvd.polygon import add, cross, sub

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record(criterion, ok, detail):
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def bisector_pieces(Q, p, q):
    """Bisector as ``(origin, direction, lo, hi)`` pieces; ``hi`` None is a ray."""
    d0, pts, d1 = bisector_polyline(Q, p, q)
    pieces = [(pts[0], d0, Fraction(0), None)]
    for a, b in zip(pts, pts[1:]):
        pieces.append((a, sub(b, a), Fraction(0), Fraction(1)))
    pieces.append((pts[-1], d1, Fraction(0), None))
    return pieces


def _within(s, lo, hi):
    return s >= lo and (hi is None or s <= hi)


def piece_intersection(u, v):
    """``set`` of intersection points, or ``None`` for a 1-dimensional overlap."""
    (o1, d1, lo1, hi1), (o2, d2, lo2, hi2) = u, v
    den = cross(d1, d2)
    w = sub(o2, o1)
    if den == 0:
        if cross(w, d1) != 0:
            return set()
        # collinear: project the second piece onto the first's parameter
        dd = d1[0] * d1[0] + d1[1] * d1[1]
        def par(x):
            return ((x[0] - o1[0]) * d1[0] + (x[1] - o1[1]) * d1[1]) / dd
        a = par(add(o2, (d2[0] * lo2, d2[1] * lo2)))
        sign2 = 1 if (d1[0] * d2[0] + d1[1] * d2[1]) > 0 else -1
        if hi2 is None:
            lo, hi = (a, None) if sign2 > 0 else (None, a)
        else:
            b = par(add(o2, (d2[0] * hi2, d2[1] * hi2)))
            lo, hi = min(a, b), max(a, b)
        lo = lo1 if lo is None else max(lo, lo1)
        hi = hi1 if hi is None else (hi if hi1 is None else min(hi, hi1))
        if hi is not None and lo > hi:
            return set()
        if hi is not None and lo == hi:
            return {(o1[0] + d1[0] * lo, o1[1] + d1[1] * lo)}
        return None
    s = cross(w, d2) / den
    r = cross(w, d1) / den
    if _within(s, lo1, hi1) and _within(r, lo2, hi2):
        return {(o1[0] + d1[0] * s, o1[1] + d1[1] * s)}
    return set()


def polyline_intersections(a_pieces, b_pieces):
    """Exact intersection of two piecewise-linear curves; ``None`` if infinite."""
    pts = set()
    for u in a_pieces:
        for v in b_pieces:
            got = piece_intersection(u, v)
            if got is None:
                return None
            pts |= got
    return pts
