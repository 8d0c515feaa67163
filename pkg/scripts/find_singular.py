"""Search seeded random scenarios for singular sequences with a given number
of flips.

    python scripts/find_singular.py --flips 5 --seeds 100 300
"""

import argparse
import random

from kinvd.engine import KineticEngine
from kinvd.generate import random_scenario
from kinvd.realroots import compare


def sequences(records):
    """Group singular records by their shared event time."""
    groups = []
    for r in records:
        if not r.kind.startswith("Singular"):
            continue
        if groups and compare(groups[-1][0].time, r.time) == 0:
            groups[-1].append(r)
        else:
            groups.append([r])
    return groups


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--flips", type=int, default=5)
    ap.add_argument("--seeds", type=int, nargs=2, default=(100, 300))
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--n", type=int, nargs=2, default=(9, 13))
    args = ap.parse_args()
    for seed in range(*args.seeds):
        rng = random.Random(seed)
        n = rng.randint(*args.n)
        sc = random_scenario(n, args.k, seed=seed, degree=1)
        for group in sequences(KineticEngine(sc).run_until()):
            flips = sum(r.kind == "SingularFlip" for r in group)
            if flips == args.flips:
                kinds = [r.kind.removeprefix("Singular") for r in group]
                print(f"seed={seed} n={n} k={args.k} t0={group[0].time.approx():.12f} {' '.join(kinds)}", flush=True)


if __name__ == "__main__":
    main()
