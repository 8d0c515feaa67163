"""Scenario files: JSON with every rational written as a ``"num/den"`` string.

Layout::

    {
      "polygon": [["1/1", "1/1"], ...],
      "allow_parallel_chords": false,
      "points": [{"id": "p0", "x": ["0/1", "1/1"], "y": ["2/1"]}, ...],
      "time_span": ["0/1", "1/1"],
      "degree": 2,
      "meta": {...}
    }

Coefficient lists run from the constant term upward.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from kinvd.errors import ParseError
from kinvd.motion import DEFAULT_DEGREE, MovingPoint, Scenario
from kinvd.polygon import validate_polygon

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text) -> Fraction:
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"rationals must be strings, got {text!r}")
    m = _RATIONAL.match(text)
    if not m:
        raise ParseError(f"malformed rational {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def scenario_to_dict(sc: Scenario) -> dict:
    out = {
        "polygon": [[format_rational(c) for c in v] for v in sc.polygon.vertices],
        "allow_parallel_chords": not sc.polygon.distinct_orientations,
        "points": [
            {
                "id": p.id,
                "x": [format_rational(c) for c in (p.x.coeffs or (0,))],
                "y": [format_rational(c) for c in (p.y.coeffs or (0,))],
            }
            for p in sc.points
        ],
        "time_span": [format_rational(sc.t_start), format_rational(sc.t_end)],
        "degree": sc.degree,
    }
    if sc.meta:
        out["meta"] = sc.meta
    return out


def dumps(sc: Scenario) -> str:
    return json.dumps(scenario_to_dict(sc), indent=2, sort_keys=True) + "\n"


def scenario_from_dict(data: dict) -> Scenario:
    try:
        verts = [(parse_rational(x), parse_rational(y)) for x, y in data["polygon"]]
        allow = bool(data.get("allow_parallel_chords", False))
        span = data["time_span"]
        if len(span) != 2:
            raise ParseError("time_span needs two entries")
        pts = []
        for entry in data["points"]:
            xs = [parse_rational(c) for c in entry["x"]]
            ys = [parse_rational(c) for c in entry["y"]]
            pts.append(MovingPoint.from_coeffs(str(entry["id"]), xs, ys))
        degree = int(data.get("degree", DEFAULT_DEGREE))
        meta = data.get("meta", {})
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed scenario: {exc!r}") from exc
    Q = validate_polygon(verts, require_distinct_orientations=not allow)
    try:
        return Scenario(Q, pts, parse_rational(span[0]), parse_rational(span[1]), degree=degree, meta=meta)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc


def loads(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("scenario must be a JSON object")
    return scenario_from_dict(data)


def load(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(sc: Scenario, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(sc))
