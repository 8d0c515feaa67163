"""Acceptance criteria 1-9. Each test prints one PASS/FAIL line; the same
lines are repeated in the pytest terminal summary.

Run directly with ``python tests/test_acceptance.py`` to get only the lines.
"""

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import bisector_pieces, polyline_intersections, record  # noqa: E402

from kinvd.cli import check_scenario, monotonicity_warnings, stats_rows  # noqa: E402
from kinvd.engine import KineticEngine  # noqa: E402
from kinvd.errors import DegenerateConfiguration, DegenerateDirection  # noqa: E402
from kinvd.generate import random_polygon, random_scenario  # noqa: E402
from kinvd.oracle import build_diagram, compare_with_kinetic  # noqa: E402
from kinvd.placements import bisector_labels  # noqa: E402
from kinvd.polygon import interval_of, regular_polygon  # noqa: E402
from kinvd.realroots import AlgebraicTime, RatPolynomial, compare, isolate_roots, root_bound, square_free  # noqa: E402
from kinvd.scenario_io import load  # noqa: E402

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def criterion1_scenarios():
    """The 50 seeded scenarios shared by criteria 1 and 7."""
    out = []
    for seed in range(50):
        rng = random.Random(1000 + seed)
        n, k, deg = rng.randint(4, 10), rng.randint(3, 8), rng.randint(1, 2)
        out.append(random_scenario(n, k, seed=seed, degree=deg))
    return out


def _rand_dir(rng):
    return (Fraction(rng.randint(-10**6, 10**6), 10**6), Fraction(rng.randint(-10**6, 10**6), 10**6))


# ---------------------------------------------------------------- 1


def test_criterion_1_oracle_equivalence():
    start = time.time()
    failures = []
    for seed, sc in enumerate(criterion1_scenarios()):
        found = check_scenario(sc, 20, seed)
        if found is not None:
            failures.append((seed, found[0], str(found[1])[:200]))
    elapsed = time.time() - start
    ok = not failures and elapsed < 600
    record(1, ok, f"50 scenarios x 20 samples, {len(failures)} with diffs, {elapsed:.0f}s"
           + (f"; first: {failures[0]}" if failures else ""))
    assert ok


# ---------------------------------------------------------------- 2


def test_criterion_2_bisector_labels():
    rng = random.Random(2)
    bad = []
    checked = 0
    while checked < 1000:
        k = rng.randint(3, 8)
        Q = random_polygon(k, rng)
        d = _rand_dir(rng)
        try:
            s = bisector_labels(Q, d)
        except DegenerateDirection:
            continue
        checked += 1
        if len(s.labels) != k - 1:
            bad.append(("count", k, s.labels))
            continue
        for (a, b), (a2, b2), (side, _) in zip(s.labels, s.labels[1:], s.corners):
            step = ((a - 1) % k, b) if side == "p" else (a, (b + 1) % k)
            if (a2, b2) != step:
                bad.append(("step", k, s.labels))
                break
        iv = interval_of(Q, d)
        for _ in range(3):
            d2 = iv.interior_direction(rng.randint(1, 1000), rng.randint(1, 1000))
            if bisector_labels(Q, d2).labels != s.labels:
                bad.append(("interval", k, d, d2))
                break
    record(2, not bad, f"{checked} (polygon, direction) pairs, {len(bad)} violations")
    assert not bad


# ---------------------------------------------------------------- 3


def test_criterion_3_regular_polygons_alternate():
    rng = random.Random(3)
    bad = []
    total = 0
    for k in range(3, 13):
        Q = regular_polygon(k)
        done = 0
        while done < 100:
            try:
                s = bisector_labels(Q, _rand_dir(rng))
            except DegenerateDirection:
                continue
            done += 1
            sides = [c[0] for c in s.corners]
            if any(x == y for x, y in zip(sides, sides[1:])):
                bad.append((k, sides))
        total += done
    record(3, not bad, f"{total} directions over k=3..12, {len(bad)} non-alternating")
    assert not bad


# ---------------------------------------------------------------- 4


def test_criterion_4_bisectors_meet_at_most_once():
    rng = random.Random(4)
    bad = []
    done = 0
    while done < 500:
        Q = random_polygon(rng.randint(3, 8), rng)
        p, q1, q2 = [(Fraction(rng.randint(-200, 200), 7), Fraction(rng.randint(-200, 200), 7)) for _ in range(3)]
        try:
            a, b = bisector_pieces(Q, p, q1), bisector_pieces(Q, p, q2)
        except DegenerateDirection:
            continue
        if len({p, q1, q2}) < 3:
            continue
        done += 1
        pts = polyline_intersections(a, b)
        if pts is None or len(pts) > 1:
            bad.append((Q.vertices, p, q1, q2, pts))
    record(4, not bad, f"{done} triples, {len(bad)} with more than one intersection")
    assert not bad


# ---------------------------------------------------------------- 5


class OracleScan:
    """Oracle diagram cores at rational times, nudging off degenerate instants."""

    def __init__(self, sc):
        self.sc = sc
        self.cache = {}

    def core(self, t):
        if t not in self.cache:
            u = t
            for attempt in range(20):
                try:
                    self.cache[t] = build_diagram(self.sc, u).diagram.core()
                    break
                except DegenerateConfiguration:
                    u = t + (self.sc.t_end - self.sc.t_start) * Fraction(1, 10**12 * (attempt + 2))
            else:
                raise RuntimeError(f"no regular instant near {t}")
        return self.cache[t]

    def changes(self, samples, eps):
        """Intervals of width < eps in which the oracle diagram changes."""
        out = []
        stack = [(a, b) for a, b in zip(samples, samples[1:]) if self.core(a) != self.core(b)]
        while stack:
            a, b = stack.pop()
            if b - a < eps:
                out.append((a, b))
                continue
            m = (a + b) / 2
            cm = self.core(m)
            if cm != self.core(a):
                stack.append((a, m))
            if cm != self.core(b):
                stack.append((m, b))
        return sorted(out)


def _event_times(records):
    times = []
    for r in records:
        if not times or compare(times[-1], r.time) != 0:
            times.append(r.time)
    return times


def test_criterion_5_event_completeness():
    failures = []
    total_events = total_changes = 0
    for seed in range(20):
        rng = random.Random(5000 + seed)
        sc = random_scenario(rng.randint(4, 6), rng.randint(3, 8), seed=5000 + seed, degree=rng.randint(1, 2))
        span = sc.t_end - sc.t_start
        eps = span / 10**6
        scan = OracleScan(sc)
        samples = [sc.t_start + span * Fraction(i, 400) for i in range(401)]
        # keep the sample grid off event times
        eng = KineticEngine(sc)
        times = _event_times(eng.run_until())
        grid = []
        for s in samples:
            while any(compare(t, AlgebraicTime.rational(s)) == 0 for t in times):
                s = s + eps / 7 if s < sc.t_end else s - eps / 7
            grid.append(s)
        changes = scan.changes(grid, eps)
        total_events += len(times)
        total_changes += len(changes)
        for a, b in changes:
            if not any(compare(AlgebraicTime.rational(a), t) < 0 and compare(t, AlgebraicTime.rational(b)) < 0
                       for t in times):
                failures.append((seed, "missed", float(a)))
        for i, t in enumerate(times):
            if any(compare(AlgebraicTime.rational(a), t) < 0 and compare(t, AlgebraicTime.rational(b)) < 0
                   for a, b in changes):
                continue
            # not bracketed by the scan: check that something changes right at t
            lo_gap = t.approx() - times[i - 1].approx() if i else 1.0
            hi_gap = times[i + 1].approx() - t.approx() if i + 1 < len(times) else 1.0
            h = Fraction(min(float(eps), lo_gap / 3, hi_gap / 3)).limit_denominator(10**15) or eps / 10**6
            t.refine_to(h / 4)
            before, after = t.lo - h, t.hi + h
            if before <= sc.t_start or after >= sc.t_end:
                continue
            if scan.core(before) == scan.core(after):
                failures.append((seed, "spurious", t.approx()))
    record(5, not failures, f"20 scenarios, {total_events} engine event times, {total_changes} oracle changes,"
           f" {len(failures)} mismatches" + (f"; first: {failures[0]}" if failures else ""))
    assert not failures


# ---------------------------------------------------------------- 6


def test_criterion_6_singular_sequence():
    sc = load(SCENARIOS / "singular_five_flips.json")
    eng = KineticEngine(sc, audit=True, check_geometry=True)
    recs = eng.run_until()
    problems = []
    kinds = [r.kind for r in recs]
    if not recs or any(compare(r.time, recs[0].time) != 0 for r in recs):
        problems.append("events do not share one time")
    if [r.rotation for r in recs] != list(range(len(recs))):
        problems.append("rotational indices are not 0..N")
    if kinds[:2] != ["SingularBisectorStart", "SingularInitialCorner"] or kinds[-1] != "SingularFinalCorner":
        problems.append(f"sequence shape {kinds}")
    middle = set(kinds[2:-1])
    if not middle <= {"SingularFlip", "SingularIntermediateCorner"}:
        problems.append(f"unexpected kinds {middle}")
    flips = [r for r in recs if r.kind == "SingularFlip"]
    if len(flips) != 5:
        problems.append(f"{len(flips)} flips")
    p, q = recs[0].sites
    for f, g in zip(flips, flips[1:]):
        # A r_j -> B r_{j+1}, and the next flip starts from r_{j+1}
        if f.sites[0] != p or f.sites[2] != q or g.sites[1] != f.sites[3]:
            problems.append(f"flip chain broken at {f.sites} / {g.sites}")
    t0 = recs[0].time
    t0.refine_to(Fraction(1, 10**12))
    span = sc.t_end - sc.t_start
    for t in (t0.lo - span / 10**6, t0.hi + span / 10**6):
        e = KineticEngine(sc)
        e.advance_before(t)
        diff = compare_with_kinetic(build_diagram(sc, t), e.diagram)
        if diff:
            problems.append(f"oracle diff at {float(t)}")
    if eng.audit_failures:
        problems.append(f"audit: {eng.audit_failures[0]}")
    summary = " ".join(f"{f.sites[1]}->{f.sites[3]}" for f in flips)
    record(6, not problems, f"{len(recs)} events at t0={t0.approx():.9f}, flips {summary}"
           + (f"; problems: {problems}" if problems else ""))
    assert not problems


# ---------------------------------------------------------------- 7


def test_criterion_7_audit_after_every_event():
    failures = []
    events = subevents = 0
    for seed, sc in enumerate(criterion1_scenarios()):
        eng = KineticEngine(sc, audit=True, check_geometry=True)
        batches = 0
        while eng.step() is not None:
            batches += 1
        flips = sum(r.kind == "SingularFlip" for r in eng.log)
        if eng.audit_counts != {"event": batches + 1, "subevent": flips}:
            failures.append((seed, "audit not run after every event", eng.audit_counts, batches, flips))
        if eng.audit_failures:
            failures.append((seed, eng.audit_failures[0]))
        events += batches
        subevents += flips
    record(7, not failures, f"{events} event batches and {subevents} singular flips audited,"
           f" {len(failures)} failures" + (f"; first: {str(failures[0])[:200]}" if failures else ""))
    assert not failures


# ---------------------------------------------------------------- 8


def _random_poly(rng):
    deg = rng.randint(1, 4)
    if rng.random() < 0.3:
        # products of small rational roots exercise repeated and rational roots
        p = RatPolynomial([rng.randint(1, 5)])
        for _ in range(deg):
            p = p * RatPolynomial([-Fraction(rng.randint(-6, 6), rng.randint(1, 3)), 1])
        return p
    while True:
        coeffs = [Fraction(rng.randint(-20, 20), rng.choice((1, 1, 2, 3))) for _ in range(deg + 1)]
        if coeffs[-1] != 0:
            return RatPolynomial(coeffs)


def test_criterion_8_roots_and_compare():
    rng = random.Random(8)
    bad = []
    pool = []
    for _ in range(10_000):
        p = _random_poly(rng)
        bound = root_bound(p)
        roots = isolate_roots(p, (-bound, bound))
        simple = square_free(p)
        ref = np.roots([float(c) for c in reversed(simple.coeffs)])
        real = sorted(r.real for r in ref if abs(r.imag) < 1e-7)
        got = [r.approx() for r in roots]
        if len(real) != len(got) or any(abs(a - b) > 1e-9 * max(1.0, abs(b)) for a, b in zip(got, real)):
            bad.append(("roots", p.coeffs, got, real))
        pool.extend(roots)
    triples = 0
    while triples < 10_000:
        a, b, c = (rng.choice(pool) for _ in range(3))
        triples += 1
        ab, ba, bc, ac = compare(a, b), compare(b, a), compare(b, c), compare(a, c)
        if ab != -ba:
            bad.append(("antisymmetry", a, b))
        if ab <= 0 and bc <= 0 and ac > 0:
            bad.append(("transitivity", a, b, c))
        if ab >= 0 and bc >= 0 and ac < 0:
            bad.append(("transitivity", a, b, c))
        if abs(a.approx() - b.approx()) > 1e-9 and (ab > 0) != (a.approx() > b.approx()):
            bad.append(("order vs numeric", a, b))
    record(8, not bad, f"10000 polynomials, {len(pool)} roots, {triples} triples, {len(bad)} failures"
           + (f"; first: {str(bad[0])[:200]}" if bad else ""))
    assert not bad


# ---------------------------------------------------------------- 9


def test_criterion_9_stats_sweep():
    start = time.time()
    rows = stats_rows([4, 6, 8, 10, 12], [3, 4, 6, 8], 5)
    warnings = monotonicity_warnings(rows)
    ok = len(rows) == 100 and all(r["total"] >= 0 for r in rows)
    detail = f"{len(rows)} runs in {time.time() - start:.0f}s"
    if warnings:
        detail += f"; soft warnings: {'; '.join(warnings)}"
    else:
        detail += "; mean total events nondecreasing in n for every k"
    record(9, ok, detail)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
