import random
from fractions import Fraction
from math import isqrt

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from supportcert.ellcurve import (
    CURVE_A,
    CURVE_B,
    INFINITY,
    POINT_R,
    BadReductionError,
    CurveOverQ,
    PointError,
    ScanCache,
    ScanRecord,
    enumerate_count,
    factorize,
    good_primes,
    is_prime,
    legendre,
    legendre_count,
    non_isogeny_witness,
    order_sequence_compare,
    primes_up_to,
    rational_roots,
    rational_two_torsion,
    reduce,
    root_degree_check,
    search_point,
    sp_scan,
    spm_scan,
    torsion_bound,
    twist_check,
)
from supportcert.poly import Poly


def brute_order(red, pt):
    """Order by repeated addition; only for tiny fields."""
    acc, n = pt, 1
    while acc is not INFINITY:
        acc = red.add(acc, pt)
        n += 1
    return n


def test_primes_against_sympy():
    assert primes_up_to(200) == list(sympy.primerange(2, 201))
    for n in range(-3, 300):
        assert is_prime(n) == sympy.isprime(n)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10**9))
def test_factorize_against_sympy(n):
    assert factorize(n) == dict(sympy.factorint(n))


def test_legendre_against_sympy():
    for p in (5, 7, 11, 13, 101):
        for a in range(-20, 40):
            expected = 0 if a % p == 0 else sympy.legendre_symbol(a % p, p)
            assert legendre(a, p) == expected


def test_discriminant_and_validation():
    assert CURVE_B.discriminant == -16 * 27 * 25
    with pytest.raises(ValueError):
        CurveOverQ(0, 0)


def test_reduce_examples():
    assert reduce(CURVE_B, 7).group_order == 7
    with pytest.raises(ValueError):
        reduce(CURVE_B, 3)
    with pytest.raises(BadReductionError):
        reduce(CURVE_B, 5)
    with pytest.raises(ValueError):
        reduce(CURVE_B, 9)


def test_group_order_examples():
    b7, b11, a7 = reduce(CURVE_B, 7), reduce(CURVE_B, 11), reduce(CURVE_A, 7)
    assert (b7.group_order, b7.trace) == (7, 1)
    assert (b11.group_order, b11.trace) == (12, 0)
    assert a7.group_order == 7
    assert 40 % 7 == 5


@pytest.mark.parametrize("curve", [CURVE_A, CURVE_B, CurveOverQ(-1, 0), CurveOverQ(2, 3)])
def test_legendre_sum_matches_enumeration(curve):
    for p in primes_up_to(101):
        if curve.is_good_prime(p):
            assert legendre_count(curve.a, curve.b, p) == enumerate_count(curve.a, curve.b, p)


def test_hasse_and_supersingular():
    for p in good_primes((CURVE_A, CURVE_B), 2000):
        for c in (CURVE_A, CURVE_B):
            ap = reduce(c, p).trace
            assert ap * ap <= 4 * p
            if p % 3 == 2:
                assert ap == 0


def test_point_order_examples():
    b7 = reduce(CURVE_B, 7)
    assert b7.point_order(INFINITY) == 1
    assert b7.point_order(b7.reduce_point(POINT_R)) == 7
    with pytest.raises(PointError):
        b7.point_order((1, 1))


def test_point_orders_divide_group_order():
    rng = random.Random(12)
    for p in (7, 13, 31, 97, 211):
        red = reduce(CURVE_B, p)
        pts = red.points()
        assert len(pts) == red.group_order
        for pt in rng.sample(pts, min(8, len(pts))):
            n = red.point_order(pt)
            assert red.group_order % n == 0
            assert n == brute_order(red, pt)
            k = rng.randint(1, 50)
            assert n % red.point_order(red.mul(k, pt)) == 0


def test_rational_group_law():
    two_r = CURVE_B.mul(2, POINT_R)
    assert two_r == (Fraction(41, 16), Fraction(-299, 64))
    assert CURVE_B.contains(two_r)
    assert CURVE_B.add(POINT_R, CURVE_B.neg(POINT_R)) is INFINITY
    # reduction commutes with the group law
    for p in (7, 11, 13, 17):
        red = reduce(CURVE_B, p)
        assert red.reduce_point(two_r) == red.mul(2, red.reduce_point(POINT_R))


def test_twist_check():
    res = twist_check(CURVE_A, CURVE_B, 2, 2000)
    assert res.violations == ()
    assert res.primes_checked == len(good_primes((CURVE_A, CURVE_B), 2000))
    assert legendre(2, 7) == 1 and 3 * 3 % 7 == 2
    assert reduce(CURVE_A, 7).trace == reduce(CURVE_B, 7).trace
    assert twist_check(CURVE_B, CURVE_B, 1, 500).violations == ()


def test_twist_detects_wrong_twist():
    # twisting by 3 is not the relation between A and B
    assert twist_check(CURVE_A, CURVE_B, 3, 500).violations


def test_non_isogeny_witness():
    assert non_isogeny_witness(CURVE_A, CURVE_B, 1000) == 13
    assert non_isogeny_witness(CURVE_B, CURVE_B, 1000) is None
    # brute-force traces at 13 by counting points directly
    a13 = 13 + 1 - enumerate_count(0, 40, 13)
    b13 = 13 + 1 - enumerate_count(0, 5, 13)
    assert a13 == -b13 != 0
    for p in good_primes((CURVE_A, CURVE_B), 12):
        assert reduce(CURVE_A, p).trace == reduce(CURVE_B, p).trace


def test_torsion_bound():
    assert torsion_bound(CURVE_B, [7, 11]) == 1
    assert torsion_bound(CURVE_A, [7, 11]) == 1
    assert torsion_bound(CURVE_B, [7, 7]) == 7
    with pytest.raises(BadReductionError):
        torsion_bound(CURVE_B, [5, 7])
    with pytest.raises(ValueError):
        torsion_bound(CURVE_B, [7])
    # y^2 = x^3 - x has rational 2-torsion of order 4, which survives reduction
    assert torsion_bound(CurveOverQ(-1, 0), [5, 7, 11, 13]) % 4 == 0


def test_two_torsion_and_root_degree():
    assert rational_two_torsion(CURVE_B) == []
    assert rational_roots(Poly([5, 0, 0, 1])) == []
    assert not root_degree_check(Poly([5, 0, 0, 1]), 2)
    assert root_degree_check(Poly([5, 0, 0, 1]), 3)
    assert root_degree_check(Poly([-8, 0, 0, 1]), 2)
    pts = rational_two_torsion(CurveOverQ(-1, 0))
    assert pts == [(-1, 0), (0, 0), (1, 0)]
    with pytest.raises(ValueError):
        root_degree_check(Poly([1, 0, 1]), 2)


def test_rational_roots_against_sympy():
    x = sympy.symbols("x")
    rng = random.Random(3)
    for _ in range(30):
        roots = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3)]
        poly = Poly([1])
        for r in roots:
            poly = poly * Poly([-r, 1])
        expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(poly.coeffs))
        expected = sorted(Fraction(int(r.p), int(r.q)) for r in sympy.roots(expr, filter="Q"))
        assert rational_roots(poly) == expected


def test_sp_scan_examples():
    r = (CURVE_B, POINT_R)
    inf = (CURVE_B, INFINITY)
    assert sp_scan([r], [r], 500).violations == ()
    forward = sp_scan([r, inf], [inf, r], 1000)
    backward = sp_scan([inf, r], [r, inf], 1000)
    assert forward.violations == () and backward.violations == ()
    two_r = (CURVE_B, CURVE_B.mul(2, POINT_R))
    assert sp_scan([r], [two_r], 1000).violations == ()
    reversed_roles = sp_scan([two_r], [r], 1000).violations
    assert reversed_roles
    for p in reversed_roles:
        assert reduce(CURVE_B, p).point_order(reduce(CURVE_B, p).reduce_point(POINT_R)) % 2 == 0


def test_sp_scan_rejects_bad_points():
    with pytest.raises(PointError):
        sp_scan([(CURVE_B, (0, 0))], [(CURVE_B, POINT_R)], 100)


def test_spm_scan():
    r = (CURVE_B, POINT_R)
    two_r = (CURVE_B, CURVE_B.mul(2, POINT_R))
    assert spm_scan([r, two_r], [r], 500).violations == ()
    assert spm_scan([two_r], [r], 500).violations == sp_scan([two_r], [r], 500).violations


def test_order_sequence_compare():
    r = (CURVE_B, POINT_R)
    assert order_sequence_compare(r, r, 2, 1000) is None
    pt = search_point(CURVE_A)
    assert pt == (6, 16) and CURVE_A.contains(pt)
    first = order_sequence_compare(r, (CURVE_A, pt), 2, 1000)
    assert first is not None and first < 1000
    # independent recomputation at the reported prime
    ra, rb = reduce(CURVE_B, first), reduce(CURVE_A, first)
    na = brute_order(ra, ra.reduce_point(POINT_R))
    nb = brute_order(rb, rb.reduce_point(pt))
    assert (na & -na) != (nb & -nb)
    # ell = 1009 exceeds every group order in range
    assert order_sequence_compare(r, (CURVE_A, pt), 1009, 500) is None


def test_search_point():
    pt = search_point(CURVE_B)
    x, y = pt
    assert y != 0 and y * y == x**3 + 5 and isqrt(int(y * y)) == abs(y)


def test_cache_roundtrip(tmp_path):
    path = str(tmp_path / "cache.jsonl")
    cache = ScanCache(path)
    before = sp_scan([(CURVE_B, POINT_R)], [(CURVE_B, INFINITY)], 300, cache)
    twist_check(CURVE_A, CURVE_B, 2, 300, cache)
    assert cache.computed > 0
    cache.save()
    text = open(path).read()
    again = ScanCache(path)
    after = sp_scan([(CURVE_B, POINT_R)], [(CURVE_B, INFINITY)], 300, again)
    assert after == before
    assert again.computed == 0
    again.save()
    assert open(path).read() == text
    keys = [(tuple(r.curve), r.p) for r in map(ScanRecord.from_json, text.splitlines())]
    assert keys == sorted(keys)


def test_cache_record_validation():
    with pytest.raises(ValueError):
        ScanRecord.from_json('{"curve":[0,5],"p":7,"N":8,"ap":1,"orders":{}}')
    with pytest.raises(ValueError):
        ScanRecord.from_json('{"curve":[0,5],"p":7,"N":7,"ap":1,"orders":{"-1,2":3}}')


def test_prime_cap():
    with pytest.raises(ValueError):
        good_primes((CURVE_B,), 1000, cap=100)
