"""Polynomial trajectories, scenarios, and the synthetic points at infinity."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from kinvd.errors import DegenerateScenario, IdenticallyZero
from kinvd.polygon import ConvexPolygon, as_fraction, cross
from kinvd.realroots import AT, AlgebraicTime, RatPolynomial, isolate_roots, poly_gcd, sign_at

DEFAULT_DEGREE = 2
MAX_DEGREE = 4


@dataclass(frozen=True)
class MovingPoint:
    """A site moving along ``(x(t), y(t))``."""

    id: str
    x: RatPolynomial
    y: RatPolynomial

    @classmethod
    def from_coeffs(cls, id, xs, ys):
        return cls(str(id), RatPolynomial(as_fraction(c) for c in xs), RatPolynomial(as_fraction(c) for c in ys))

    @classmethod
    def static(cls, id, p):
        return cls.from_coeffs(id, [p[0]], [p[1]])

    @property
    def degree(self) -> int:
        return max(self.x.degree, self.y.degree, 0)

    def at(self, t):
        t = as_fraction(t)
        return (self.x(t), self.y(t))

    @property
    def poly(self):
        return (self.x, self.y)


@dataclass(frozen=True)
class InfinitePoint:
    """Stationary site at infinity in direction ``-v_i``."""

    index: int
    direction: tuple

    @property
    def id(self) -> str:
        return f"inf{self.index}"


@dataclass(frozen=True)
class Scenario:
    polygon: ConvexPolygon
    points: tuple
    t_start: Fraction
    t_end: Fraction
    degree: int = DEFAULT_DEGREE
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "t_start", as_fraction(self.t_start))
        object.__setattr__(self, "t_end", as_fraction(self.t_end))
        if self.t_start > self.t_end:
            raise ValueError("empty time span")
        if not self.points:
            raise ValueError("a scenario needs at least one point")
        if not 0 <= self.degree <= MAX_DEGREE:
            raise ValueError(f"degree bound must be in 0..{MAX_DEGREE}")
        ids = [p.id for p in self.points]
        if len(set(ids)) != len(ids):
            raise ValueError("point ids must be unique")
        for p in self.points:
            if p.degree > self.degree:
                raise ValueError(f"point {p.id} exceeds degree bound {self.degree}")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def k(self) -> int:
        return self.polygon.k

    def positions(self, t):
        return [p.at(t) for p in self.points]


def augment_with_infinity(scenario: Scenario):
    Q = scenario.polygon
    return [InfinitePoint(i, (-v[0], -v[1])) for i, v in enumerate(Q.vertices)]


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def relative_motion(p: MovingPoint, q: MovingPoint):
    return (q.x - p.x, q.y - p.y)


def cross_poly(d, w):
    """cross(d(t), w) for polynomial vector d and constant vector w."""
    return d[0] * w[1] - d[1] * w[0]


def validate_trajectories(scenario: Scenario) -> ValidationReport:
    """Check collisions and permanently degenerate orientations.

    Raises :class:`DegenerateScenario` on the first hard violation; coincident
    degenerate orientations at ``t_start`` are reported as warnings.
    """
    Q = scenario.polygon
    report = ValidationReport()
    window = (scenario.t_start, scenario.t_end)
    chords = [(i, j) for i, j in combinations(range(Q.k), 2)]
    for p, q in combinations(scenario.points, 2):
        dx, dy = relative_motion(p, q)
        if dx.is_zero() and dy.is_zero():
            raise DegenerateScenario(f"points {p.id} and {q.id} collide for all t", sites=(p.id, q.id))
        if dx.is_zero() or dy.is_zero():
            common = dy if dx.is_zero() else dx
        else:
            common = poly_gcd(dx, dy)
        if common.degree >= 1 and isolate_roots(common, window):
            raise DegenerateScenario(f"points {p.id} and {q.id} collide inside the time span", sites=(p.id, q.id))
        for i, j in chords:
            c = cross_poly((dx, dy), Q.chord(i, j))
            if c.is_zero():
                raise IdenticallyZero(
                    f"{p.id}{q.id} stays parallel to chord v{i}v{j}", sites=(p.id, q.id), chord=(i, j)
                )
            if c(scenario.t_start) == 0:
                report.warnings.append(f"{p.id}{q.id} is parallel to chord v{i}v{j} at t_start")
    return report


class Probe:
    """Exact signs of trajectory polynomials at a moment.

    ``side`` is ``at`` for the instant itself, or ``after``/``before`` for the
    one-sided limits used right after (before) an event at ``t``.
    """

    def __init__(self, t, side=AT):
        self.t = t
        self.side = side
        self.rational = isinstance(t, (int, Fraction)) or (isinstance(t, AlgebraicTime) and t.is_rational)
        self.value = (Fraction(t) if not isinstance(t, AlgebraicTime) else t.lo) if self.rational else None

    def sign(self, poly) -> int:
        if not isinstance(poly, RatPolynomial):
            poly = RatPolynomial.constant(poly)
        if self.rational and self.side == AT:
            v = poly(self.value)
            return (v > 0) - (v < 0)
        return sign_at(poly, self.t, self.side)

    def __repr__(self):
        return f"Probe({self.t!r}, {self.side})"
