"""Orders in number fields, their elements, and lattices in the fraction field.

An order is given by a Z-basis ``b_0 = 1, b_1, ..., b_{n-1}`` and integer
structure constants.  Orders built from a minimal polynomial also remember
their basis in the power basis of the field, which is what lets two orders of
the same field be compared or nested.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import floor, gcd, lcm

from .linalg import Matrix, block_diag, charpoly, hnf, snf, solve_left
from .poly import Poly


class OrderError(ValueError):
    pass


class NotEuclideanError(OrderError):
    pass


def _frac_vec(v):
    return tuple(Fraction(x) for x in v)


def _is_int_vec(v):
    return all(Fraction(x).denominator == 1 for x in v)


def _integer_rows(rows):
    """Scale rational rows to integers.  Returns (denominator, int rows)."""
    d = 1
    for r in rows:
        for x in r:
            d = lcm(d, Fraction(x).denominator)
    return d, [tuple(int(Fraction(x) * d) for x in r) for r in rows]


def _triangular_basis(rows, n):
    """Canonical basis whose i-th vector has its last nonzero coordinate at i.

    For a lattice containing e_0 and meeting the first axis in Z, the first
    vector is exactly e_0.
    """
    d, ints = _integer_rows(rows)
    rev = Matrix([r[::-1] for r in ints], n)
    h, _ = hnf(rev)
    nz = [r for r in h.rows if any(r)]
    if len(nz) != n:
        raise OrderError(f"expected rank {n}, got rank {len(nz)}")
    return [tuple(Fraction(x, d) for x in r[::-1]) for r in reversed(nz)]


class OrderRing:
    """A commutative order with integer structure constants."""

    def __init__(self, structure, field_basis=None, minpoly=None, name=None, euclidean=False):
        n = len(structure)
        self.structure = tuple(
            tuple(tuple(int(c) for c in structure[i][j]) for j in range(n)) for i in range(n)
        )
        self.rank = n
        self.field_basis = field_basis if field_basis is not None else Matrix.identity(n)
        self.minpoly = minpoly
        self.name = name or f"order of rank {n}"
        self.euclidean = euclidean
        self._check_axioms()

    def _check_axioms(self):
        n, c = self.rank, self.structure
        for j in range(n):
            unit = tuple(int(k == j) for k in range(n))
            if c[0][j] != unit or c[j][0] != unit:
                raise OrderError("b_0 is not a multiplicative identity")
        for i in range(n):
            for j in range(n):
                if c[i][j] != c[j][i]:
                    raise OrderError(f"b_{i} b_{j} != b_{j} b_{i}")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    left = self.mul(c[i][j], self.gen(k).coords)
                    right = self.mul(self.gen(i).coords, c[j][k])
                    if left != right:
                        raise OrderError(f"associativity fails on (b_{i}, b_{j}, b_{k})")

    def __repr__(self):
        return f"OrderRing({self.name!r})"

    def __eq__(self, other):
        if not isinstance(other, OrderRing):
            return NotImplemented
        return (
            self.structure == other.structure
            and self.field_basis == other.field_basis
            and self.minpoly == other.minpoly
        )

    def __hash__(self):
        return hash((self.structure, self.field_basis))

    def mul(self, x, y):
        n = self.rank
        out = [Fraction(0)] * n
        for i in range(n):
            if x[i]:
                for j in range(n):
                    if y[j]:
                        f = x[i] * y[j]
                        for k, c in enumerate(self.structure[i][j]):
                            if c:
                                out[k] += f * c
        return tuple(out)

    def mult_matrix(self, x):
        """Matrix whose i-th row holds the coordinates of b_i * x."""
        n = self.rank
        return Matrix([self.mul(self.gen(i).coords, x) for i in range(n)], n)

    def element(self, coords):
        if len(coords) != self.rank:
            raise OrderError("coordinate vector of the wrong length")
        return OrderElement(self, _frac_vec(coords))

    def one(self):
        return self.gen(0)

    def gen(self, i):
        return OrderElement(self, tuple(Fraction(int(k == i)) for k in range(self.rank)))

    def basis(self):
        return [self.gen(i) for i in range(self.rank)]

    def norm(self, x):
        return self.mult_matrix(x).det()

    def inverse(self, x):
        """Coordinates of 1/x in the fraction field."""
        m = self.mult_matrix(x)
        sol = solve_left(m, self.one().coords)
        if sol is None:
            raise ZeroDivisionError("zero has no inverse")
        return _frac_vec(sol)

    def to_field(self, coords):
        return _frac_vec(coords @ self.field_basis)

    def from_field(self, v):
        sol = solve_left(self.field_basis, v)
        if sol is None:
            raise OrderError("vector outside the field")
        return _frac_vec(sol)

    def same_field(self, other):
        return self.minpoly == other.minpoly and self.rank == other.rank

    def coords_of_order(self, other):
        """Basis of ``other`` written in this order's coordinates."""
        if not self.same_field(other):
            raise OrderError("orders live in different fields")
        return [self.from_field(r) for r in other.field_basis.rows]

    def contains(self, other):
        return all(_is_int_vec(r) for r in self.coords_of_order(other))

    def same_order(self, other):
        return self.contains(other) and other.contains(self)

    def euclidean_divmod(self, a, b):
        """q, r with a = q b + r and |N(r)| < |N(b)|, by coordinate rounding."""
        if not self.euclidean:
            raise NotEuclideanError(f"{self.name} has no supplied Euclidean division")
        quot = self.mul(a, self.inverse(b))
        q = tuple(Fraction(floor(x + Fraction(1, 2))) for x in quot)
        qb = self.mul(q, b)
        r = tuple(x - y for x, y in zip(a, qb))
        if any(r) and abs(self.norm(r)) >= abs(self.norm(b)):
            raise NotEuclideanError(f"rounding division fails in {self.name}")
        return q, r


@dataclass(frozen=True)
class OrderElement:
    owner: OrderRing
    coords: tuple

    def _other(self, other):
        if isinstance(other, OrderElement):
            if other.owner is not self.owner and other.owner != self.owner:
                raise OrderError("elements of different orders")
            return other.coords
        if isinstance(other, (int, Fraction)):
            return tuple(Fraction(other) if i == 0 else Fraction(0) for i in range(self.owner.rank))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return OrderElement(self.owner, tuple(a + b for a, b in zip(self.coords, o)))

    __radd__ = __add__

    def __neg__(self):
        return OrderElement(self.owner, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return OrderElement(self.owner, tuple(a - b for a, b in zip(self.coords, o)))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return OrderElement(self.owner, tuple(a * other for a in self.coords))
        o = self._other(other)
        if o is NotImplemented:
            return o
        return OrderElement(self.owner, self.owner.mul(self.coords, o))

    __rmul__ = __mul__

    def __pow__(self, e):
        out = self.owner.one()
        for _ in range(e):
            out = out * self
        return out

    def is_integral(self):
        return _is_int_vec(self.coords)

    def is_zero(self):
        return not any(self.coords)

    def __repr__(self):
        return f"{self.owner.name}{list(map(str, self.coords))}"


def _reduce_mod(p, minpoly):
    r = p % minpoly
    n = minpoly.degree
    return tuple(r.coeffs[i] if i < len(r.coeffs) else Fraction(0) for i in range(n))


def _as_poly(g):
    if isinstance(g, Poly):
        return g
    return Poly(g)


def order_from_minpoly(minpoly, generators, name=None, euclidean=False):
    """The order Z[g_1, ..., g_m] inside Q[x]/(minpoly).

    ``generators`` are polynomials in the root (``Poly`` or ascending
    coefficient lists).  The basis is triangular in the power basis, so
    ``b_0 = 1`` and, for example, Z[2t, 2t^2] gets the basis 1, 2t, 2t^2.
    """
    if not minpoly.is_monic():
        raise OrderError("minimal polynomial must be monic")
    n = minpoly.degree
    gens = [_reduce_mod(_as_poly(g), minpoly) for g in generators]
    for g in gens:
        # g is integral iff its characteristic polynomial has integer coefficients
        cp = charpoly(_power_mult(g, minpoly))
        if any(c.denominator != 1 for c in cp.coeffs):
            raise OrderError("generator is not integral")
    one = tuple(Fraction(int(i == 0)) for i in range(n))
    cur = _span_basis([one] + gens, n)
    while True:
        prods = [_power_mul(b, g, minpoly) for b in cur for g in gens]
        nxt = _span_basis(cur + prods, n)
        if nxt == cur:
            break
        cur = nxt
    if len(cur) != n:
        raise OrderError("generators do not span the field")
    basis = _triangular_basis(cur, n)
    if basis[0] != one:
        raise OrderError("generated module does not meet Q in Z")
    fb = Matrix(basis, n)
    fb_inv = fb.inverse()
    structure = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = _power_mul(basis[i], basis[j], minpoly)
            c = prod @ fb_inv
            if not _is_int_vec(c):
                raise OrderError("module is not closed under multiplication")
            row.append(tuple(int(x) for x in c))
        structure.append(row)
    return OrderRing(structure, field_basis=fb, minpoly=minpoly, name=name, euclidean=euclidean)


def _span_basis(rows, n):
    d, ints = _integer_rows(rows)
    h, _ = hnf(Matrix(ints, n))
    return [tuple(Fraction(x, d) for x in r) for r in h.rows if any(r)]


def _power_mul(a, b, minpoly):
    return _reduce_mod(Poly(a) * Poly(b), minpoly)


def _power_mult(g, minpoly):
    n = minpoly.degree
    return Matrix(
        [_power_mul(tuple(int(k == i) for k in range(n)), g, minpoly) for i in range(n)], n
    )


def order_from_structure(structure, name=None, euclidean=False):
    return OrderRing(structure, name=name, euclidean=euclidean)


class Lattice:
    """Full-rank Z-lattice in K^k, stored as (denominator, integer HNF).

    Coordinates are taken in the owner's basis, component by component, so a
    vector of K^k has ``k * owner.rank`` rational entries.
    """

    def __init__(self, owner, rows, k=1, ideal=False):
        self.owner = owner
        self.k = k
        dim = k * owner.rank
        rows = [tuple(r) for r in rows]
        if any(len(r) != dim for r in rows):
            raise OrderError("row length does not match the ambient dimension")
        d, ints = _integer_rows(rows)
        h, _ = hnf(Matrix(ints, dim)) if ints else (Matrix.zeros(0, dim), None)
        nz = [r for r in h.rows if any(r)]
        if len(nz) != dim:
            raise OrderError("lattice is not of full rank")
        g = 0
        for r in nz:
            for x in r:
                g = gcd(g, x)
        g = gcd(g, d)
        self.denominator = d // g
        self.hnf = Matrix([[x // g for x in r] for r in nz], dim)
        self.is_ideal = False
        if ideal:
            if not self.closed_under_owner():
                raise OrderError("generated lattice is not an ideal")
            self.is_ideal = True

    @property
    def dim(self):
        return self.k * self.owner.rank

    @property
    def basis(self):
        return self.hnf * Fraction(1, self.denominator)

    def basis_vectors(self):
        return [tuple(r) for r in self.basis.rows]

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return (
            self.owner == other.owner
            and self.k == other.k
            and self.denominator == other.denominator
            and self.hnf == other.hnf
        )

    def __hash__(self):
        return hash((self.k, self.denominator, self.hnf))

    def __repr__(self):
        return f"Lattice(1/{self.denominator} * {self.hnf!r})"

    def coordinates(self, v):
        """Rational coordinates of v in this lattice's basis."""
        return _frac_vec(solve_left(self.basis, v))

    def contains(self, v):
        if isinstance(v, OrderElement):
            self._check_owner(v.owner)
            v = v.coords
        return _is_int_vec(self.coordinates(v))

    def __contains__(self, v):
        return self.contains(v)

    def issubset(self, other):
        self._check_owner(other.owner)
        return all(other.contains(r) for r in self.basis_vectors())

    def index(self):
        """Covolume relative to the owner's standard lattice O^k."""
        return abs(Fraction(self.hnf.det(), self.denominator ** self.dim))

    def index_in(self, other):
        return self.index() / other.index()

    def scale(self, q):
        return Lattice(self.owner, [tuple(x * q for x in r) for r in self.basis_vectors()], self.k)

    def act(self, x, v):
        """Multiply each K-component of v by the owner element x."""
        n = self.owner.rank
        out = []
        for c in range(self.k):
            out.extend(self.owner.mul(v[c * n:(c + 1) * n], x))
        return tuple(out)

    def closed_under_owner(self):
        return all(
            self.contains(self.act(b.coords, v))
            for b in self.owner.basis()
            for v in self.basis_vectors()
        )

    def action_matrix(self, x):
        """Matrix of v -> x v on K^k (row convention)."""
        blocks = self.owner.mult_matrix(x)
        return block_diag([blocks] * self.k)

    def _check_owner(self, owner):
        if owner is not self.owner and owner != self.owner:
            raise OrderError("owner mismatch")


def unit_lattice(owner, k=1):
    return Lattice(owner, Matrix.identity(k * owner.rank).rows, k, ideal=True)


def ideal_from_generators(r, gens):
    """The ideal generated by ``gens``: Z-span of all g * b_i."""
    gens = [g.coords if isinstance(g, OrderElement) else _frac_vec(g) for g in gens]
    if not gens or all(not any(g) for g in gens):
        raise OrderError("zero ideal")
    rows = [r.mul(g, b.coords) for g in gens for b in r.basis()]
    return Lattice(r, rows, ideal=True)


def ideal_membership(x, ideal):
    if x.owner is not ideal.owner and x.owner != ideal.owner:
        raise OrderError("owner mismatch")
    return ideal.contains(x.coords)


def colon_lattice(l1, l2):
    """(l1 : l2) = {x : x * l2 contained in l1}, for lattices in K."""
    if l1.owner is not l2.owner and l1.owner != l2.owner:
        raise OrderError("owner mismatch")
    if l1.k != 1 or l2.k != 1:
        raise OrderError("colon lattices are computed inside the field")
    owner = l1.owner
    n = owner.rank
    l1_inv = l1.basis.inverse()
    blocks = [owner.mult_matrix(g) @ l1_inv for g in l2.basis_vectors()]
    c = blocks[0]
    for b in blocks[1:]:
        c = c.hstack(b)
    # x in result  <=>  x @ c is integral
    d = c.denominator()
    cint = c * d
    dd, left, _ = snf(cint)
    rows = []
    for i in range(n):
        piv = dd[i, i]
        if piv == 0:
            raise OrderError("colon of a degenerate lattice")
        f = Fraction(d, piv)
        rows.append(tuple(f * x for x in left.row(i)))
    return Lattice(owner, rows)


def order_from_lattice(owner, lattice, name=None, euclidean=False):
    """Turn a lattice that is a ring containing 1 into an OrderRing."""
    n = owner.rank
    basis = _triangular_basis(lattice.basis_vectors(), n)
    if basis[0] != tuple(Fraction(int(i == 0)) for i in range(n)):
        raise OrderError("lattice is not a unital ring")
    bm = Matrix(basis, n)
    bm_inv = bm.inverse()
    structure = []
    for i in range(n):
        row = []
        for j in range(n):
            c = owner.mul(basis[i], basis[j]) @ bm_inv
            if not _is_int_vec(c):
                raise OrderError("lattice is not closed under multiplication")
            row.append(tuple(int(x) for x in c))
        structure.append(row)
    return OrderRing(
        structure,
        field_basis=bm @ owner.field_basis,
        minpoly=owner.minpoly,
        name=name,
        euclidean=euclidean,
    )


def multiplier_ring(lattice, name=None):
    """(l : l) with its ring structure."""
    ring = colon_lattice(lattice, lattice)
    return order_from_lattice(lattice.owner, ring, name=name or f"multiplier ring of {lattice.owner.name}-lattice")


@dataclass(frozen=True)
class MaximalIsogeny:
    n: int
    delta: Lattice
    lattice: Lattice


def isogeny_to_maximal(r, lambda_max, lattice):
    """Pass from an r-lattice to one whose multiplier ring is ``lambda_max``.

    Takes the least n >= 1 with n * lambda_max inside r, sets
    delta = n * lambda_max and returns {x : delta * x inside lattice}.
    """
    if not lambda_max.contains(r):
        raise OrderError(f"{lambda_max.name} does not contain {r.name}")
    coords = r.coords_of_order(lambda_max)
    n = 1
    for v in coords:
        for x in v:
            n = lcm(n, x.denominator)
    delta = Lattice(r, [tuple(x * n for x in v) for v in coords])
    return MaximalIsogeny(n, delta, colon_lattice(lattice, delta))


# Fixtures.  t = zeta_7 + zeta_7^{-1} has minimal polynomial x^3 + x^2 - 2x - 1
# and Z[t] is the ring of integers of Q(t); R = Z[2t, 2t^2] is a non-maximal
# order there.  For Q(sqrt(-3)) the ring of integers is Z[zeta_3].

TAU_MINPOLY = Poly([-1, -2, 1, 1])
SQRT_M3_MINPOLY = Poly([3, 0, 1])
GAUSS_MINPOLY = Poly([1, 0, 1])


@cache
def integers():
    return OrderRing([[[1]]], minpoly=Poly([0, 1]), name="Z", euclidean=True)


@cache
def z_tau():
    return order_from_minpoly(TAU_MINPOLY, [[0, 1]], name="Z[t]")


@cache
def r_order():
    return order_from_minpoly(TAU_MINPOLY, [[0, 2], [0, 0, 2]], name="Z[2t,2t^2]")


@cache
def m_ideal():
    """m = (2, 2t, 2t^2) in R, the maximal ideal with residue field F_2."""
    r = r_order()
    return ideal_from_generators(r, [r.element([2, 0, 0]), r.gen(1), r.gen(2)])


@cache
def gaussian_integers():
    return order_from_minpoly(GAUSS_MINPOLY, [[0, 1]], name="Z[i]", euclidean=True)


@cache
def eisenstein_integers():
    # zeta_3 = (-1 + sqrt(-3)) / 2; the order is spanned by 1 and (1 + sqrt(-3)) / 2
    half = Fraction(1, 2)
    return order_from_minpoly(SQRT_M3_MINPOLY, [[-half, half]], name="Z[zeta_3]", euclidean=True)


@cache
def z_sqrt_minus3():
    return order_from_minpoly(SQRT_M3_MINPOLY, [[0, 1]], name="Z[sqrt(-3)]")
