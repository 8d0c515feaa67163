"""Render SVG snapshots of the bundled scenarios, including both sides of the
five-flip singular event.

    python scripts/render_examples.py --out figures
"""

import argparse
from fractions import Fraction
from pathlib import Path

from kinvd.cli import snapshot_svg
from kinvd.scenario_io import load

ROOT = Path(__file__).resolve().parent.parent / "scenarios"
SHOTS = [
    ("square_two_sites.json", Fraction(1, 2)),
    ("square_flip.json", Fraction(199, 100)),
    ("square_flip.json", Fraction(201, 100)),
    # the singular event is at 42495/118067 ~ 0.35992
    ("singular_five_flips.json", Fraction(359, 1000)),
    ("singular_five_flips.json", Fraction(361, 1000)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    for name, t in SHOTS:
        svg = snapshot_svg(load(ROOT / name), t, delaunay=True)
        path = out / f"{Path(name).stem}_t{t.numerator}_{t.denominator}.svg"
        path.write_text(svg)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
