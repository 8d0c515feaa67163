"""Write the small hand-made scenario files under scenarios/."""

from pathlib import Path

from kinvd.generate import random_scenario
from kinvd.motion import MovingPoint, Scenario
from kinvd.polygon import validate_polygon
from kinvd.scenario_io import save

OUT = Path(__file__).resolve().parent.parent / "scenarios"
SQUARE = [(1, 1), (1, -1), (-1, -1), (-1, 1)]


def square():
    return validate_polygon(SQUARE, require_distinct_orientations=False)


def main():
    OUT.mkdir(exist_ok=True)
    Q = square()
    static = [MovingPoint.from_coeffs(f"p{i}", [x], [y]) for i, (x, y) in enumerate([(0, 0), (3, "1/3"), ("1/2", "-7/3")])]
    save(Scenario(Q, static, 0, 1, degree=0), OUT / "square_static.json")
    pair = [MovingPoint.from_coeffs("p", [0], [0]), MovingPoint.from_coeffs("q", [2], [1])]
    save(Scenario(Q, pair, 0, 1, degree=0), OUT / "square_two_sites.json")
    # s reaches the top edge of the placement of p, q, r (center (2, 0), scale 2) at t = 2
    flip = [
        MovingPoint.from_coeffs("p", [0], [0]),
        MovingPoint.from_coeffs("q", [4], ["1/2"]),
        MovingPoint.from_coeffs("r", [1], [-2]),
        MovingPoint.from_coeffs("s", ["11/5"], [0, 1]),
    ]
    save(Scenario(Q, flip, "3/2", "21/10", degree=1), OUT / "square_flip.json")
    single = [MovingPoint.from_coeffs("p", [0, 1], [0])]
    save(Scenario(Q, single, 0, 1, degree=1), OUT / "square_single.json")
    # found by scripts/find_singular.py: one singular sequence with five flips
    # at t0 = 42495/118067 and no other event inside the window
    base = random_scenario(13, 3, seed=297, degree=1)
    meta = {"seed": 297, "generator": "random_scenario(13, 3, degree=1)"}
    save(Scenario(base.polygon, base.points, "17/50", "37/100", degree=1, meta=meta),
         OUT / "singular_five_flips.json")


if __name__ == "__main__":
    main()
