"""Command line interface: ``kinvd validate | run | check | snapshot | stats``.

Exit codes: 0 success, 1 validation failure or oracle diff, 2 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from collections import Counter
from fractions import Fraction
from statistics import mean

from kinvd.engine import EVENT_KINDS, KineticEngine
from kinvd.errors import (
    DegenerateConfiguration,
    DegenerateScenario,
    EventTimeCollision,
    IdenticallyZero,
    KinvdError,
    ParseError,
    PolygonError,
)
from kinvd.generate import random_scenario
from kinvd.motion import validate_trajectories
from kinvd.oracle import build_diagram, compare_with_kinetic
from kinvd.render import render_svg
from kinvd.scenario_io import load, parse_rational

EXIT_OK, EXIT_FAIL, EXIT_INTERNAL = 0, 1, 2

# errors that describe bad input rather than a bug
INPUT_ERRORS = (ParseError, PolygonError, EventTimeCollision, DegenerateScenario, IdenticallyZero,
                DegenerateConfiguration, ValueError, OSError)


def _err(msg):
    print(msg, file=sys.stderr)


def _describe(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def _load_valid(path):
    sc = load(path)
    report = validate_trajectories(sc)
    return sc, report


# ------------------------------------------------------------------ validate


def cmd_validate(args) -> int:
    sc, report = _load_valid(args.path)
    for w in report.warnings:
        print(f"warning: {w}")
    print(f"ok: n={sc.n} k={sc.k} degree={sc.degree} span=[{sc.t_start}, {sc.t_end}]")
    return EXIT_OK


# ------------------------------------------------------------------ run


def run_scenario(sc, t_end=None, *, audit=False):
    """Run the engine over the span; returns ``(engine, records)``."""
    eng = KineticEngine(sc, audit=audit, t_end=t_end)
    records = eng.run_until()
    return eng, records


def event_counts(records) -> Counter:
    counts = Counter({kind: 0 for kind in EVENT_KINDS})
    counts.update(r.kind for r in records)
    return counts


def cmd_run(args) -> int:
    sc, _ = _load_valid(args.path)
    t_end = parse_rational(args.t_end) if args.t_end is not None else None
    eng = KineticEngine(sc, audit=args.audit, t_end=t_end)
    out = open(args.log, "w", encoding="utf-8") if args.log else sys.stdout
    try:
        try:
            records = eng.run_until()
        except KinvdError as exc:
            _err(f"engine failure near t={eng.now.to_record()}: {_describe(exc)}")
            return EXIT_INTERNAL
        for rec in records:
            out.write(json.dumps(rec.to_record(), sort_keys=True) + "\n")
        counts = event_counts(records)
        summary = {"summary": {"events": len(records), "counts": dict(counts)}}
        out.write(json.dumps(summary, sort_keys=True) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if eng.audit_failures:
        _err(f"audit failures: {eng.audit_failures[:3]}")
        return EXIT_FAIL
    if args.log:
        print(f"{len(records)} events written to {args.log}")
    return EXIT_OK


# ------------------------------------------------------------------ check


def sample_times(sc, m, seed, denominator=10**6):
    rng = random.Random(seed)
    span = sc.t_end - sc.t_start
    return sorted({sc.t_start + span * Fraction(rng.randint(1, denominator - 1), denominator) for _ in range(m)})


def check_scenario(sc, samples, seed, *, fault_hook=None, audit=False):
    """Compare the kinetic diagram with the oracle at event-free sample
    times. Returns ``(time, diff)`` for the first mismatch, else ``None``."""
    eng = KineticEngine(sc, audit=audit)
    eng.fault_hook = fault_hook
    rng = random.Random(seed + 1)
    for t in sample_times(sc, samples, seed):
        while True:
            try:
                eng.advance_before(t)
                break
            except EventTimeCollision:
                # nudge off the event time; the nudge stays inside the span
                t = t + (sc.t_end - t) * Fraction(1, rng.randint(10**6, 10**7))
        diff = compare_with_kinetic(build_diagram(sc, t), eng.diagram)
        if diff:
            return t, diff
        if eng.audit_failures:
            return t, {"audit": eng.audit_failures[:3]}
    eng.run_until()
    if eng.audit_failures:
        return sc.t_end, {"audit": eng.audit_failures[:3]}
    return None


def cmd_check(args) -> int:
    sc, _ = _load_valid(args.path)
    if args.samples <= 0:
        print("warning: no samples requested, nothing compared")
        return EXIT_OK
    try:
        found = check_scenario(sc, args.samples, args.seed, audit=args.audit)
    except KinvdError as exc:
        _err(f"engine failure: {_describe(exc)}")
        return EXIT_INTERNAL
    if found is not None:
        t, diff = found
        print(f"diff at t={t}: {json.dumps(diff, default=str)}")
        return EXIT_FAIL
    print(f"ok: {args.samples} samples match the oracle")
    return EXIT_OK


# ------------------------------------------------------------------ snapshot


def snapshot_svg(sc, t, *, delaunay=False) -> str:
    t = parse_rational(t) if isinstance(t, str) else Fraction(t)
    if not sc.t_start <= t <= sc.t_end:
        raise ValueError(f"time {t} outside the scenario span")
    eng = KineticEngine(sc)
    if t > sc.t_start:
        eng.advance_before(t)
    return render_svg(eng.diagram, sc.points, t, delaunay=delaunay)


def cmd_snapshot(args) -> int:
    sc, _ = _load_valid(args.path)
    svg = snapshot_svg(sc, args.t, delaunay=args.delaunay)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return EXIT_OK


# ------------------------------------------------------------------ stats


def _grid(text):
    return [int(x) for x in text.split(",") if x.strip()]


def parse_sweep(items):
    grid = {"n": [4, 8], "k": [4]}
    for item in items or ():
        key, _, val = item.partition("=")
        if key not in grid or not val:
            raise ParseError(f"bad sweep parameter {item!r}; use n=4,6 or k=3,4")
        grid[key] = _grid(val)
    return grid


def stats_rows(ns, ks, seeds, *, degree=1):
    """One row per (n, k, seed): per-kind event counts of a random
    linear-motion scenario over [0, 1]."""
    rows = []
    for k in ks:
        for n in ns:
            for seed in range(seeds):
                sc = random_scenario(n, k, seed=10_000 * k + 100 * n + seed, degree=degree)
                _, records = run_scenario(sc)
                counts = event_counts(records)
                rows.append({"n": n, "k": k, "seed": seed, "total": len(records), **counts})
    return rows


def monotonicity_warnings(rows):
    out = []
    for k in sorted({r["k"] for r in rows}):
        means = [(n, mean(r["total"] for r in rows if r["k"] == k and r["n"] == n))
                 for n in sorted({r["n"] for r in rows if r["k"] == k})]
        for (n1, m1), (n2, m2) in zip(means, means[1:]):
            if m2 < m1:
                out.append(f"mean total events drops from {m1:.1f} (n={n1}) to {m2:.1f} (n={n2}) at k={k}")
    return out


def cmd_stats(args) -> int:
    fields = ["n", "k", "seed", "total", *EVENT_KINDS]
    if args.path:
        sc, _ = _load_valid(args.path)
        _, records = run_scenario(sc)
        rows = [{"n": sc.n, "k": sc.k, "seed": sc.meta.get("seed", ""), "total": len(records),
                 **event_counts(records)}]
    else:
        grid = parse_sweep(args.sweep)
        rows = stats_rows(grid["n"], grid["k"], args.seeds, degree=args.degree)
    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    for w in monotonicity_warnings(rows):
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------------ main


def build_parser():
    ap = argparse.ArgumentParser(prog="kinvd", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a scenario file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run the kinetic engine and write an event log")
    p.add_argument("path")
    p.add_argument("t_end", nargs="?", help="stop time (rational), default span end")
    p.add_argument("--log", help="JSONL output file (default stdout)")
    p.add_argument("--audit", action="store_true", help="audit the structure after every event")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="compare against the static oracle at sample times")
    p.add_argument("path")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--audit", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("snapshot", help="render the diagram at time t as SVG")
    p.add_argument("path")
    p.add_argument("t", help="event-free rational time, e.g. 1/3")
    p.add_argument("--out", required=True)
    p.add_argument("--delaunay", action="store_true", help="overlay the Delaunay edges")
    p.set_defaults(func=cmd_snapshot)

    p = sub.add_parser("stats", help="per-kind event counts")
    p.add_argument("path", nargs="?", help="single scenario instead of a sweep")
    p.add_argument("--sweep", nargs="*", metavar="KEY=LIST", help="grids such as n=4,6,8 k=3,4")
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--csv", help="write the table to this file (default stdout)")
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (KinvdError, ValueError, OSError) as exc:
        _err(_describe(exc))
        if isinstance(exc, INPUT_ERRORS):
            return EXIT_FAIL
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - report anything unexpected as internal
        _err(f"internal error: {_describe(exc)}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
