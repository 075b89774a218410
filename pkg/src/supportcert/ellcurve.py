"""Short Weierstrass curves over Q and their reductions modulo primes.

Group orders come from the Legendre-symbol sum, vectorised with numpy; point
orders from the factorisation of the group order.  Scans over many primes go
through a ``ScanCache`` which can be persisted as line-delimited JSON.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, lcm

import numpy as np

from .poly import Poly

DEFAULT_PRIME_CAP = 10**5
HARD_PRIME_CAP = 2**31  # x*x of residues must stay below 2**62 in int64

INFINITY = None


class BadReductionError(ValueError):
    """The prime divides the discriminant."""


class PointError(ValueError):
    pass


def is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    f = 17
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def primes_up_to(n):
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, isqrt(n) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def factorize(n):
    """Trial division; fine for the group orders met here (n < 10^12)."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _as_point(pt):
    if pt is INFINITY:
        return INFINITY
    x, y = pt
    return (Fraction(x), Fraction(y))


@dataclass(frozen=True)
class CurveOverQ:
    """y^2 = x^3 + a x + b with integer a, b."""

    a: int
    b: int

    def __post_init__(self):
        if self.discriminant == 0:
            raise ValueError("singular curve")

    @property
    def discriminant(self):
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @property
    def key(self):
        return (self.a, self.b)

    def __str__(self):
        terms = "x^3"
        if self.a:
            terms += f" {'+' if self.a > 0 else '-'} {abs(self.a)}x"
        if self.b:
            terms += f" {'+' if self.b > 0 else '-'} {abs(self.b)}"
        return f"y^2 = {terms}"

    def is_good_prime(self, p):
        return p > 3 and self.discriminant % p != 0

    def contains(self, pt):
        if pt is INFINITY:
            return True
        x, y = _as_point(pt)
        return y * y == x**3 + self.a * x + self.b

    def neg(self, pt):
        if pt is INFINITY:
            return pt
        x, y = _as_point(pt)
        return (x, -y)

    def add(self, p1, p2):
        if p1 is INFINITY:
            return _as_point(p2)
        if p2 is INFINITY:
            return _as_point(p1)
        x1, y1 = _as_point(p1)
        x2, y2 = _as_point(p2)
        if x1 == x2 and y1 == -y2:
            return INFINITY
        if x1 == x2:
            lam = (3 * x1 * x1 + self.a) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - x1 - x2
        return (x3, lam * (x1 - x3) - y1)

    def mul(self, k, pt):
        if k < 0:
            return self.mul(-k, self.neg(pt))
        out, base = INFINITY, _as_point(pt)
        while k:
            if k & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            k >>= 1
        return out


def reduce(curve, p):
    if p <= 3:
        raise ValueError("only primes p > 3 are supported")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if curve.discriminant % p == 0:
        raise BadReductionError(f"{curve} has bad reduction at {p}")
    return CurveOverPrimeField(curve.a % p, curve.b % p, p, source=curve)


def _quadratic_character(p):
    chi = np.full(p, -1, dtype=np.int64)
    r = np.arange(1, p, dtype=np.int64)
    chi[(r * r) % p] = 1
    chi[0] = 0
    return chi


def legendre_count(a, b, p):
    """#E(F_p) = p + 1 + sum over x of (x^3 + a x + b | p)."""
    if p >= HARD_PRIME_CAP:
        raise ValueError("prime too large for vectorised counting")
    x = np.arange(p, dtype=np.int64)
    f = ((x * x % p) * x + a * x + b) % p
    return p + 1 + int(_quadratic_character(p)[f].sum())


def enumerate_count(a, b, p):
    """Group order by listing every affine point; only for small p."""
    squares = {}
    for y in range(p):
        squares[y * y % p] = squares.get(y * y % p, 0) + 1
    return 1 + sum(squares.get((x**3 + a * x + b) % p, 0) for x in range(p))


class CurveOverPrimeField:
    def __init__(self, a, b, p, source=None):
        self.a, self.b, self.p = a % p, b % p, p
        self.source = source
        self._order = None

    def __repr__(self):
        return f"CurveOverPrimeField(a={self.a}, b={self.b}, p={self.p})"

    @property
    def group_order(self):
        if self._order is None:
            n = legendre_count(self.a, self.b, self.p)
            if (self.p + 1 - n) ** 2 > 4 * self.p:
                raise ArithmeticError("Hasse bound violated")
            self._order = n
        return self._order

    @property
    def trace(self):
        return self.p + 1 - self.group_order

    def contains(self, pt):
        if pt is INFINITY:
            return True
        x, y = pt
        p = self.p
        return (y * y - (x * x * x + self.a * x + self.b)) % p == 0

    def points(self):
        """All points, infinity first; small p only."""
        p = self.p
        roots = {}
        for y in range(p):
            roots.setdefault(y * y % p, []).append(y)
        out = [INFINITY]
        for x in range(p):
            for y in roots.get((x**3 + self.a * x + self.b) % p, []):
                out.append((x, y))
        return out

    def reduce_point(self, pt):
        """Reduction of a rational point; p in a denominator sends it to infinity."""
        if pt is INFINITY:
            return INFINITY
        x, y = _as_point(pt)
        if x.denominator % self.p == 0 or y.denominator % self.p == 0:
            return INFINITY
        p = self.p
        red = (x.numerator * pow(x.denominator, -1, p) % p, y.numerator * pow(y.denominator, -1, p) % p)
        if not self.contains(red):
            raise PointError("reduced point is not on the reduced curve")
        return red

    def neg(self, pt):
        if pt is INFINITY:
            return pt
        return (pt[0], (-pt[1]) % self.p)

    def add(self, p1, p2):
        if p1 is INFINITY:
            return p2
        if p2 is INFINITY:
            return p1
        p = self.p
        x1, y1 = p1
        x2, y2 = p2
        if x1 == x2 and (y1 + y2) % p == 0:
            return INFINITY
        if x1 == x2:
            lam = (3 * x1 * x1 + self.a) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        return (x3, (lam * (x1 - x3) - y1) % p)

    def mul(self, k, pt):
        if k < 0:
            return self.mul(-k, self.neg(pt))
        out, base = INFINITY, pt
        while k:
            if k & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            k >>= 1
        return out

    def point_order(self, pt):
        if not self.contains(pt):
            raise PointError(f"{pt} is not on {self}")
        n = self.group_order
        order = n
        for q in factorize(n):
            while order % q == 0 and self.mul(order // q, pt) is INFINITY:
                order //= q
        return order


# scan records and cache


def point_label(pt):
    if pt is INFINITY:
        return "inf"
    x, y = _as_point(pt)
    return f"{x},{y}"


@dataclass
class ScanRecord:
    curve: tuple
    p: int
    n: int
    ap: int
    orders: dict = field(default_factory=dict)

    def check(self):
        if self.n != self.p + 1 - self.ap:
            raise ValueError("record violates N = p + 1 - a_p")
        if any(self.n % o for o in self.orders.values()):
            raise ValueError("recorded point order does not divide N")

    def to_json(self):
        return json.dumps(
            {"curve": list(self.curve), "p": self.p, "N": self.n, "ap": self.ap,
             "orders": dict(sorted(self.orders.items()))},
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line):
        d = json.loads(line)
        rec = cls(tuple(d["curve"]), d["p"], d["N"], d["ap"], dict(d.get("orders", {})))
        rec.check()
        return rec


class ScanCache:
    """Per (curve, prime) records; optionally backed by a JSONL file."""

    def __init__(self, path=None):
        self.path = path
        self.records = {}
        self.computed = 0
        self.dirty = False
        if path and os.path.exists(path):
            with open(path) as fh:
                for line in fh:
                    if line.strip():
                        rec = ScanRecord.from_json(line)
                        self.records[(rec.curve, rec.p)] = rec

    def record(self, curve, p):
        key = (curve.key, p)
        rec = self.records.get(key)
        if rec is None:
            red = reduce(curve, p)
            rec = ScanRecord(curve.key, p, red.group_order, red.trace)
            self.records[key] = rec
            self.computed += 1
            self.dirty = True
        return rec

    def trace(self, curve, p):
        return self.record(curve, p).ap

    def point_order(self, curve, p, pt):
        rec = self.record(curve, p)
        label = point_label(pt)
        if label not in rec.orders:
            red = reduce(curve, p)
            red._order = rec.n
            rec.orders[label] = red.point_order(red.reduce_point(pt))
            self.dirty = True
        return rec.orders[label]

    def save(self, path=None):
        path = path or self.path
        if path is None:
            return
        lines = [self.records[k].to_json() for k in sorted(self.records)]
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write("".join(line + "\n" for line in lines))
        os.replace(tmp, path)
        self.dirty = False


def good_primes(curves, bound, cap=DEFAULT_PRIME_CAP):
    if bound > cap:
        raise ValueError(f"prime bound {bound} exceeds the cap {cap}")
    return [p for p in primes_up_to(bound) if all(c.is_good_prime(p) for c in curves)]


# the individual checks


@dataclass(frozen=True)
class TwistResult:
    primes_checked: int
    violations: tuple


def twist_check(a, b, d, bound, cache=None, cap=DEFAULT_PRIME_CAP):
    """Check a_p(a) = (d | p) a_p(b) at every good prime up to the bound."""
    cache = cache or ScanCache()
    primes = [p for p in good_primes((a, b), bound, cap) if d % p]
    bad = tuple(p for p in primes if cache.trace(a, p) != legendre(d, p) * cache.trace(b, p))
    return TwistResult(len(primes), bad)


def non_isogeny_witness(a, b, bound, cache=None, cap=DEFAULT_PRIME_CAP):
    """Least good prime with a_p(a) != a_p(b), or None up to the bound."""
    cache = cache or ScanCache()
    for p in good_primes((a, b), bound, cap):
        if cache.trace(a, p) != cache.trace(b, p):
            return p
    return None


def torsion_bound(curve, primes, cache=None):
    """gcd of #E(F_p) over good primes; the rational torsion order divides it."""
    primes = list(primes)
    if len(primes) < 2:
        raise ValueError("need at least two primes")
    cache = cache or ScanCache()
    g = 0
    for p in primes:
        if not curve.is_good_prime(p):
            raise BadReductionError(f"{p} is not a good prime for {curve}")
        g = gcd(g, cache.record(curve, p).n)
    return g


def _divisors(n):
    n = abs(n)
    out = set()
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            out.update((d, n // d))
    return sorted(out)


def rational_roots(poly):
    """Rational roots of a nonzero polynomial with rational coefficients."""
    if poly.degree < 1:
        return []
    den = lcm(*(c.denominator for c in poly.coeffs))
    ints = [int(c * den) for c in poly.coeffs]
    low = next(i for i, c in enumerate(ints) if c)
    ints = ints[low:]
    roots = {Fraction(0)} if low else set()
    if len(ints) > 1:
        for num in _divisors(ints[0]):
            for dd in _divisors(ints[-1]):
                for cand in (Fraction(num, dd), Fraction(-num, dd)):
                    if poly(cand) == 0:
                        roots.add(cand)
    return sorted(roots)


def rational_two_torsion(curve):
    cubic = Poly([curve.b, curve.a, 0, 1])
    return [(r, Fraction(0)) for r in rational_roots(cubic)]


def root_degree_check(poly, field_degree):
    """False when the polynomial provably has no root in any field of that degree.

    The certificate covers cubics: with no rational root a cubic is
    irreducible, so a root generates a degree-3 extension, impossible inside a
    field whose degree is prime to 3.  Otherwise the answer is True
    (a root may exist).
    """
    if poly.degree != 3:
        raise ValueError("the degree argument is implemented for cubics")
    if rational_roots(poly):
        return True
    return field_degree % 3 == 0


def _scan_orders(spec, p, cache):
    """Order of the reduction of a point on a product, as an lcm of components."""
    out = 1
    for curve, pt in spec:
        out = lcm(out, cache.point_order(curve, p, pt))
    return out


@dataclass(frozen=True)
class SPScan:
    primes_checked: int
    violations: tuple  # primes where ord(Q mod p) does not divide ord(P mod p)


def _check_points(spec):
    for curve, pt in spec:
        if not curve.contains(pt):
            raise PointError(f"{point_label(pt)} is not on {curve}")


def sp_scan(p_spec, q_spec, bound, cache=None, cap=DEFAULT_PRIME_CAP):
    _check_points(p_spec)
    _check_points(q_spec)
    cache = cache or ScanCache()
    curves = {c.key: c for c, _ in list(p_spec) + list(q_spec)}.values()
    primes = good_primes(curves, bound, cap)
    bad = []
    for p in primes:
        if _scan_orders(p_spec, p, cache) % _scan_orders(q_spec, p, cache):
            bad.append(p)
    return SPScan(len(primes), tuple(bad))


def spm_scan(module_spec, q_spec, bound, cache=None, cap=DEFAULT_PRIME_CAP):
    """Exponent variant: ord(Q mod p) must divide the exponent of the reduced
    group generated by the listed points."""
    _check_points(module_spec)
    _check_points(q_spec)
    cache = cache or ScanCache()
    curves = {c.key: c for c, _ in list(module_spec) + list(q_spec)}.values()
    primes = good_primes(curves, bound, cap)
    bad = []
    for p in primes:
        exponent = 1
        for entry in module_spec:
            exponent = lcm(exponent, _scan_orders([entry], p, cache))
        if exponent % _scan_orders(q_spec, p, cache):
            bad.append(p)
    return SPScan(len(primes), tuple(bad))


def valuation(n, ell):
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def order_sequence_compare(a_pt, b_pt, ell, bound, cache=None, cap=DEFAULT_PRIME_CAP):
    """First good prime where the ell-adic valuations of the reduced orders differ."""
    (ca, pa), (cb, pb) = a_pt, b_pt
    _check_points([a_pt, b_pt])
    cache = cache or ScanCache()
    for p in good_primes((ca, cb), bound, cap):
        va = valuation(cache.point_order(ca, p, pa), ell)
        vb = valuation(cache.point_order(cb, p, pb), ell)
        if va != vb:
            return p
    return None


def search_point(curve, height=50):
    """A rational point with small integer coordinates and y != 0, or None."""
    for x in sorted(range(-height, height + 1), key=lambda t: (abs(t), t)):
        rhs = x**3 + curve.a * x + curve.b
        if rhs > 0 and isqrt(rhs) ** 2 == rhs:
            return (Fraction(x), Fraction(isqrt(rhs)))
    return None


# fixtures

CURVE_A = CurveOverQ(0, 40)
CURVE_B = CurveOverQ(0, 5)
POINT_R = (Fraction(-1), Fraction(2))
