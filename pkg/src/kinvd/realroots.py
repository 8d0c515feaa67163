"""Exact real roots of rational polynomials and algebraic event times.

Roots are isolated with Sturm sequences over :class:`~fractions.Fraction`
and refined by bisection. :class:`AlgebraicTime` values are totally ordered
exactly: equality is decided through the gcd of the defining polynomials,
never through a tolerance.
"""

from __future__ import annotations

import functools
from fractions import Fraction

from kinvd.errors import ZeroPolynomial

AT, BEFORE, AFTER = "at", "before", "after"


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class RatPolynomial:
    """Polynomial with rational coefficients, stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim(Fraction(c) for c in coeffs)

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def t(cls):
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _lift(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return RatPolynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self):
        return RatPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatPolynomial):
            other = Fraction(other)
            return RatPolynomial(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RatPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return RatPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / Fraction(other))

    def __eq__(self, other):
        if not isinstance(other, RatPolynomial):
            other = _lift(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPolynomial({[str(c) for c in self.coeffs]})"

    def derivative(self):
        return RatPolynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        dl = other.lc()
        dd = other.degree
        while len(rem) - 1 >= dd and rem:
            shift = len(rem) - 1 - dd
            f = rem[-1] / dl
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return RatPolynomial(q), RatPolynomial(rem)

    def monic(self):
        if self.is_zero():
            return self
        return self * (1 / self.lc())

    def to_string(self, var="t") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            s = "-" if c < 0 else "+"
            if i == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else f"{mag}*") + (var if i == 1 else f"{var}^{i}")
            terms.append((s, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for s, body in terms[1:]:
            out += f" {s} {body}"
        return out


def _lift(x):
    return x if isinstance(x, RatPolynomial) else RatPolynomial.constant(x)


def poly_gcd(a: RatPolynomial, b: RatPolynomial) -> RatPolynomial:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def square_free(p: RatPolynomial) -> RatPolynomial:
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return p.divmod(g)[0].monic()


def sturm_sequence(p: RatPolynomial):
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2].divmod(seq[-1])[1]))
    seq.pop()
    return seq


def _variations(seq, x) -> int:
    count, last = 0, 0
    for s in seq:
        v = s(x)
        if v != 0:
            sv = 1 if v > 0 else -1
            if last and sv != last:
                count += 1
            last = sv
    return count


def count_roots(seq, lo, hi) -> int:
    """Distinct roots in the half-open interval (lo, hi]."""
    return _variations(seq, lo) - _variations(seq, hi)


def root_bound(p: RatPolynomial) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lc = abs(p.lc())
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@functools.total_ordering
class AlgebraicTime:
    """A real algebraic number given by a square-free defining polynomial and
    an isolating interval.

    Either ``lo == hi`` and the value is that rational, or the unique root of
    ``poly`` in the open interval ``(lo, hi)`` with ``poly`` nonzero at both
    endpoints. Refinement only narrows the interval.
    """

    __slots__ = ("poly", "lo", "hi", "multiple", "_sturm")

    def __init__(self, poly, lo, hi, multiple=False, _sturm=None):
        self.poly = poly
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self.multiple = multiple
        self._sturm = _sturm

    @classmethod
    def rational(cls, value):
        value = Fraction(value)
        return cls(RatPolynomial((-value, 1)), value, value)

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def sturm(self):
        if self._sturm is None:
            self._sturm = sturm_sequence(self.poly)
        return self._sturm

    def refine(self):
        """Halve the isolating interval once."""
        if self.is_rational:
            return
        mid = (self.lo + self.hi) / 2
        v = self.poly(mid)
        if v == 0:
            self.lo = self.hi = mid
        elif _sign(v) == _sign(self.poly(self.lo)):
            self.lo = mid
        else:
            self.hi = mid

    def refine_to(self, width):
        width = Fraction(width)
        while self.hi - self.lo > width:
            self.refine()

    def approx(self) -> float:
        self.refine_to(Fraction(1, 2**60) * max(1, abs(self.hi)))
        return float((self.lo + self.hi) / 2)

    def __float__(self):
        return self.approx()

    def compare(self, other) -> int:
        return compare(self, other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraicTime):
            other = AlgebraicTime.rational(other)
        return compare(self, other) == 0

    def __lt__(self, other):
        if not isinstance(other, AlgebraicTime):
            other = AlgebraicTime.rational(other)
        return compare(self, other) < 0

    def __hash__(self):
        # equal values may have different representations
        return 0

    def __repr__(self):
        if self.is_rational:
            return f"AlgebraicTime({self.lo})"
        return f"AlgebraicTime(root of {self.poly.to_string()} in ({self.lo}, {self.hi}))"

    def to_record(self):
        return {
            "poly": [str(c) for c in self.poly.coeffs],
            "interval": [str(self.lo), str(self.hi)],
            "approx": self.approx(),
        }


def _ensure_time(x) -> AlgebraicTime:
    return x if isinstance(x, AlgebraicTime) else AlgebraicTime.rational(x)


def isolate_roots(p: RatPolynomial, window):
    """All distinct real roots of ``p`` in the closed window, ascending.

    Each returned time has ``multiple`` set when the square-free part of ``p``
    differs from ``p`` itself.
    """
    if not isinstance(p, RatPolynomial):
        p = RatPolynomial(p)
    if p.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    a, b = Fraction(window[0]), Fraction(window[1])
    if p.degree == 0 or a > b:
        return []
    sf = square_free(p)
    multiple = sf.degree != p.degree
    if sf.degree == 1:
        r = -sf.coeffs[0] / sf.coeffs[1]
        return [AlgebraicTime(sf, r, r, multiple)] if a <= r <= b else []
    seq = sturm_sequence(sf)
    out = []
    if sf(a) == 0:
        out.append(AlgebraicTime(sf, a, a, multiple, seq))
    stack = [(a, b)]
    found = []
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            if sf(hi) == 0:
                found.append(AlgebraicTime(sf, hi, hi, multiple, seq))
                continue
            if sf(lo) != 0:
                found.append(AlgebraicTime(sf, lo, hi, multiple, seq))
                continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.extend(found)
    out.sort(key=lambda r: (r.lo, r.hi))
    return out


def sign_at(p: RatPolynomial, t, side=AT) -> int:
    """Exact sign of ``p`` at ``t``, or the one-sided limit sign just
    before/after ``t``."""
    if not isinstance(p, RatPolynomial):
        p = RatPolynomial(p)
    t = _ensure_time(t)
    if side == AT:
        return _sign_exact(p, t)
    q, order = p, 0
    while not q.is_zero():
        s = _sign_exact(q, t)
        if s != 0:
            if side == BEFORE and order % 2 == 1:
                return -s
            return s
        q = q.derivative()
        order += 1
    return 0


def _interval_sign(p: RatPolynomial, lo, hi) -> int:
    """Sign of p on [lo, hi] if interval Horner evaluation excludes zero."""
    a = b = Fraction(0)
    for c in reversed(p.coeffs):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(cands) + c, max(cands) + c
    if a > 0:
        return 1
    if b < 0:
        return -1
    return 0


def _sign_exact(p: RatPolynomial, t: AlgebraicTime) -> int:
    if p.is_zero():
        return 0
    if p.degree == 0:
        return _sign(p.coeffs[0])
    if t.is_rational:
        return _sign(p(t.lo))
    quick = _interval_sign(p, t.lo, t.hi)
    if quick:
        return quick
    g = poly_gcd(p, t.poly)
    if g.degree >= 1:
        # roots of g are roots of t.poly, and (lo, hi] holds only t's root
        if count_roots(sturm_sequence(g), t.lo, t.hi) > 0:
            return 0
    pseq = sturm_sequence(square_free(p))
    while not t.is_rational and count_roots(pseq, t.lo, t.hi) > 0:
        t.refine()
    if t.is_rational:
        return _sign(p(t.lo))
    return _sign(p((t.lo + t.hi) / 2))


def compare(a, b) -> int:
    """Exact three-way comparison of two algebraic times."""
    a, b = _ensure_time(a), _ensure_time(b)
    if a is b:
        return 0
    if a.is_rational and b.is_rational:
        return _sign(a.lo - b.lo)
    if a.is_rational:
        return -compare(b, a)
    # a is irrational here
    if b.is_rational:
        v = b.lo
        while a.lo < v < a.hi:
            if a.poly(v) == 0:
                return 0
            a.refine()
            if a.is_rational:
                return _sign(a.lo - v)
        if v <= a.lo:
            return 1
        return -1
    if a.hi <= b.lo:
        return -1
    if b.hi <= a.lo:
        return 1
    if _sign_exact(b.poly, a) == 0:
        # a is a root of b.poly; equal iff it lies inside b's isolating
        # interval (a is irrational, so it never sits on an endpoint)
        while True:
            if b.lo <= a.lo and a.hi <= b.hi:
                return 0
            if a.is_rational and b.lo < a.lo < b.hi:
                return 0
            if a.hi <= b.lo:
                return -1
            if b.hi <= a.lo:
                return 1
            a.refine()
    while True:
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        a.refine()
        b.refine()
        if a.is_rational or b.is_rational:
            return compare(a, b)
