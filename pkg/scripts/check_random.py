"""Oracle cross-check of seeded random scenarios (the criterion-1 harness).

    python scripts/check_random.py --count 50 --samples 20
"""

import argparse
import random
import time

from kinvd.cli import check_scenario
from kinvd.generate import random_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--audit", action="store_true")
    args = ap.parse_args()
    start = time.time()
    failures = 0
    for seed in range(args.count):
        rng = random.Random(1000 + seed)
        n, k, deg = rng.randint(4, 10), rng.randint(3, 8), rng.randint(1, 2)
        t = time.time()
        sc = random_scenario(n, k, seed=seed, degree=deg)
        found = check_scenario(sc, args.samples, seed, audit=args.audit)
        status = "ok" if found is None else f"DIFF at {found[0]}: {str(found[1])[:200]}"
        failures += found is not None
        print(f"seed={seed:3d} n={n:2d} k={k} degree={deg} {time.time() - t:6.1f}s {status}", flush=True)
    print(f"{failures} failing scenarios, {time.time() - start:.0f}s total")


if __name__ == "__main__":
    main()
