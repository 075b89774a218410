"""The curves y^2 = x^3 + 40 and y^2 = x^3 + 5 modulo primes."""

from supportcert.ellcurve import (
    CURVE_A,
    CURVE_B,
    INFINITY,
    POINT_R,
    ScanCache,
    non_isogeny_witness,
    reduce,
    sp_scan,
    torsion_bound,
    twist_check,
)

cache = ScanCache()
print(" p   a_p(A)  a_p(B)  ord(R mod p)")
for p in (7, 11, 13, 17, 19, 23, 29, 31):
    red = reduce(CURVE_B, p)
    print(f"{p:3d} {cache.trace(CURVE_A, p):6d} {cache.trace(CURVE_B, p):7d} {red.point_order(red.reduce_point(POINT_R)):9d}")

print("gcd of #B(F_7), #B(F_11):", torsion_bound(CURVE_B, [7, 11], cache))
res = twist_check(CURVE_A, CURVE_B, 2, 5000, cache)
print(f"a_p(A) = (2|p) a_p(B) at {res.primes_checked} primes, violations: {list(res.violations)}")
print("first prime with a_p(A) != a_p(B):", non_isogeny_witness(CURVE_A, CURVE_B, 5000, cache))

P = [(CURVE_B, POINT_R), (CURVE_B, INFINITY)]
Q = [(CURVE_B, INFINITY), (CURVE_B, POINT_R)]
scan = sp_scan(P, Q, 5000, cache)
print(f"(SP) for P = (R, 0), Q = (0, R): {scan.primes_checked} primes, violations {list(scan.violations)}")
