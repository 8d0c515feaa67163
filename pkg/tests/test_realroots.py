from fractions import Fraction

import pytest

from kinvd.errors import ZeroPolynomial
from kinvd.realroots import (
    AFTER,
    BEFORE,
    AlgebraicTime,
    RatPolynomial,
    compare,
    count_roots,
    isolate_roots,
    poly_gcd,
    sign_at,
    square_free,
    sturm_sequence,
)


def P(*coeffs):
    return RatPolynomial(Fraction(c) for c in coeffs)


def from_roots(*roots):
    p = P(1)
    for r in roots:
        p = p * P(-Fraction(r), 1)
    return p


def same(roots, values):
    return len(roots) == len(values) and all(
        compare(r, AlgebraicTime.rational(v)) == 0 for r, v in zip(roots, values)
    )


def test_three_simple_roots_in_order():
    roots = isolate_roots(from_roots(1, 2, 3), (0, 10))
    assert same(roots, [1, 2, 3])


def test_window_is_closed():
    roots = isolate_roots(from_roots(0, 1, 5), (0, 1))
    assert same(roots, [0, 1])


def test_irrational_root_refines():
    (r,) = isolate_roots(P(-2, 0, 1), (0, 2))
    r.refine_to(Fraction(1, 10**12))
    assert abs(r.approx() - 2 ** 0.5) < 1e-11
    assert compare(r, AlgebraicTime.rational(Fraction(3, 2))) == -1
    assert compare(AlgebraicTime.rational(Fraction(7, 5)), r) == -1


def test_zero_polynomial_rejected():
    with pytest.raises(ZeroPolynomial):
        isolate_roots(P(0), (0, 1))


def test_multiple_roots_are_flagged():
    roots = isolate_roots(from_roots(1, 1, 2), (0, 5))
    assert same(roots, [1, 2])
    assert all(r.multiple for r in roots)


def test_square_free_and_gcd():
    p = from_roots(1, 1, 3)
    assert square_free(p).monic() == from_roots(1, 3).monic()
    assert poly_gcd(from_roots(1, 2), from_roots(2, 5)).monic() == from_roots(2).monic()


def test_count_roots_half_open():
    seq = sturm_sequence(from_roots(0, 1, 2))
    assert count_roots(seq, 0, 2) == 2
    assert count_roots(seq, -1, 2) == 3


def test_compare_distinct_rational_roots():
    a = isolate_roots(P(-1, 1), (0, 5))[0]
    b = isolate_roots(P(-2, 1), (0, 5))[0]
    assert compare(a, b) == -1 and compare(b, a) == 1 and compare(a, a) == 0


def test_equal_algebraic_numbers_from_different_polynomials():
    (a,) = isolate_roots(P(-2, 0, 1), (0, 2))
    (b,) = isolate_roots(P(-2, 0, 1) * P(-5, 1), (0, 2))
    assert compare(a, b) == 0


def test_sign_at_exact_and_one_sided():
    (r,) = isolate_roots(P(-2, 0, 1), (0, 2))
    assert sign_at(P(-2, 0, 1), r) == 0
    assert sign_at(P(-2, 0, 1), r, AFTER) == 1
    assert sign_at(P(-2, 0, 1), r, BEFORE) == -1
    # double root: positive on both sides
    t1 = AlgebraicTime.rational(1)
    assert sign_at(from_roots(1, 1), t1, BEFORE) == 1
    assert sign_at(from_roots(1, 1), t1, AFTER) == 1
    assert sign_at(P(3), t1) == 1


def test_sign_of_polynomial_vanishing_elsewhere():
    (r,) = isolate_roots(P(-2, 0, 1), (0, 2))
    assert sign_at(P(-3, 2), r) == -1  # 2*sqrt2 - 3 < 0
    assert sign_at(P(-14, 10), r) == 1  # 10*sqrt2 - 14 > 0


def test_time_record_is_serializable():
    (r,) = isolate_roots(P(-2, 1), (0, 5))
    rec = r.to_record()
    assert rec["poly"] == ["-2", "1"] and rec["approx"] == 2.0


def test_compare_with_itself_and_with_a_copy():
    (a,) = isolate_roots(P(Fraction(-1, 327), Fraction(28, 109), 1), (0, Fraction(1, 32)))
    assert compare(a, a) == 0
    b = AlgebraicTime(a.poly, a.lo, a.hi)
    assert compare(a, b) == 0 and compare(b, a) == 0
