"""Event-count sweep over n and k with linear motion; prints per-(n, k) means
and writes the per-run table as CSV.

    python scripts/stats_sweep.py --out stats.csv
"""

import argparse
import csv
from statistics import mean

from kinvd.cli import monotonicity_warnings, stats_rows
from kinvd.engine import EVENT_KINDS


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[4, 6, 8, 10, 12])
    ap.add_argument("--k", type=int, nargs="+", default=[3, 4, 6, 8])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--out", default="stats.csv")
    args = ap.parse_args()
    rows = stats_rows(args.n, args.k, args.seeds)
    with open(args.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["n", "k", "seed", "total", *EVENT_KINDS])
        w.writeheader()
        w.writerows(rows)
    short = [kind.replace("Singular", "S.").replace("Generic", "G.") for kind in EVENT_KINDS]
    print(f"{'k':>3} {'n':>3} {'total':>7} " + " ".join(f"{s:>16}" for s in short))
    for k in args.k:
        for n in args.n:
            sel = [r for r in rows if r["n"] == n and r["k"] == k]
            cells = " ".join(f"{mean(r[kind] for r in sel):>16.1f}" for kind in EVENT_KINDS)
            print(f"{k:>3} {n:>3} {mean(r['total'] for r in sel):>7.1f} {cells}")
    for warning in monotonicity_warnings(rows):
        print(f"warning: {warning}")
    print(f"per-run table written to {args.out}")


if __name__ == "__main__":
    main()
