"""The six-dimensional complex torus C^6 / Lambda with multiplication by R.

Everything is symbolic: the real parameters a1..a9 and w of the period
lattice are indeterminates (see ``symbolic``), so each check below holds for
every admissible choice of the real numbers at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import (
    Matrix,
    block_diag,
    charpoly,
    hnf_basis,
    integer_kernel,
    leading_minors,
    minpoly,
    rank,
    solve_left,
)
from .modules import FiniteModule, cyclic_submodule, direct_sum, quotient_by_ideal, quotient_module
from .orders import m_ideal, r_order, unit_lattice
from .poly import Poly, from_roots
from .report import DERIVED, PAPER, TRIVIAL, CheckReport
from .symbolic import OMEGA_INDEX, CSym, SymPoly, SymVector

_M_BLOCK = [[0, 0, 1], [1, 0, 2], [0, 1, -1]]
_X_BLOCK = [[2, -1, 2], [-1, 2, -2], [2, -2, 5]]

TORUS_M = block_diag([Matrix(_M_BLOCK), Matrix(_M_BLOCK)])
TORUS_X = block_diag([Matrix(_X_BLOCK), Matrix(_X_BLOCK)])

M_MINPOLY = Poly([-1, -2, 1, 1])  # x^3 + x^2 - 2x - 1
X_CHARPOLY_ROOTS = ((1, 4), (7, 2))

DIM = 6
RANK = 12


@dataclass(frozen=True)
class TorusConstants:
    m: Matrix = TORUS_M
    x: Matrix = TORUS_X

    def __post_init__(self):
        if self.m.shape != (DIM, DIM) or self.x.shape != (DIM, DIM):
            raise ValueError("torus constants must be 6 x 6")


def verify_matrix_identities(constants=None):
    c = constants or TorusConstants()
    m, x = c.m, c.x
    rep = CheckReport("torus.matrices", "identities satisfied by M and X")
    rep.require("X symmetric", x == x.T, TRIVIAL)
    rep.require("X M = M^T X", x @ m == m.T @ x, PAPER)
    rep.expect("minpoly(M)", str(minpoly(m)), str(M_MINPOLY), PAPER)
    expected_cp = from_roots(X_CHARPOLY_ROOTS)
    rep.expect("charpoly(X)", str(charpoly(x)), str(expected_cp), PAPER)
    minors = leading_minors(x)
    rep.require("X positive definite (leading minors)", all(d > 0 for d in minors), DERIVED, minors)
    if not rep.failures():
        rep.summary = "XM = M^T X, minpoly(M) and charpoly(X) as stated, X positive definite"
    return rep


class PeriodLattice:
    """Basis e1..e12 of the period lattice, 1-based.

    ``r_vars`` and ``s_vars`` name the alpha indices used for the real parts
    of e7 and e10; the defaults are (1..6) and (4..9).
    """

    def __init__(self, constants=None, r_vars=(1, 2, 3, 4, 5, 6), s_vars=(4, 5, 6, 7, 8, 9)):
        self.constants = constants or TorusConstants()
        m = self.constants.m
        w = SymPoly.omega()
        std = [SymVector.real([1 if k == i else 0 for k in range(DIM)]) for i in range(DIM)]
        r = SymVector.real([SymPoly.alpha(i) for i in r_vars])
        s = SymVector.real([SymPoly.alpha(i) for i in s_vars])
        e7 = r + SymVector.from_parts([0] * DIM, [w if k == 0 else 0 for k in range(DIM)])
        e10 = s + SymVector.from_parts([0] * DIM, [w if k == 3 else 0 for k in range(DIM)])
        m2 = m @ m
        self.vectors = tuple(
            std
            + [e7, e7.apply(m * 2), e7.apply(m2 * 2)]
            + [e10, e10.apply(m * 2), e10.apply(m2 * 2)]
        )
        self._coord_system = None

    def e(self, i):
        if not 1 <= i <= RANK:
            raise IndexError("lattice basis indices run from 1 to 12")
        return self.vectors[i - 1]

    def omega_matrix(self):
        """Columns e7..e12, as a 6 x 6 array of complex symbols."""
        return [[self.vectors[6 + j][i] for j in range(DIM)] for i in range(DIM)]

    def riemann_form(self, i, j):
        return riemann_pairing(self.constants.x, self.e(i), self.e(j))

    def riemann_table(self):
        return [[self.riemann_form(i, j) for j in range(1, RANK + 1)] for i in range(1, RANK + 1)]

    # coordinates with respect to e1..e12

    def _system(self):
        if self._coord_system is None:
            slots = {}
            for v in self.vectors:
                for c in range(DIM):
                    for part, poly in (("re", v[c].re), ("im", v[c].im)):
                        for mono in poly.terms:
                            slots.setdefault((c, part, mono), None)
            keys = sorted(slots)
            rows = [[v[c].re.coefficient_of(mono) if part == "re" else v[c].im.coefficient_of(mono)
                     for (c, part, mono) in keys] for v in self.vectors]
            self._coord_system = (keys, set(keys), Matrix(rows, len(keys)))
        return self._coord_system

    def coordinates(self, v):
        """Rational coordinates of v in e1..e12, or None if v is outside their real span."""
        if not isinstance(v, SymVector) or v.dim != DIM:
            raise ValueError("expected a symbolic vector of dimension 6")
        keys, allowed, system = self._system()
        for c in range(DIM):
            for part, poly in (("re", v[c].re), ("im", v[c].im)):
                for mono in poly.terms:
                    if (c, part, mono) not in allowed:
                        raise ValueError(f"coordinate {c + 1} has an unexpected {part} term in {poly}")
        target = [v[c].re.coefficient_of(mono) if part == "re" else v[c].im.coefficient_of(mono)
                  for (c, part, mono) in keys]
        return solve_left(system, target)

    def membership(self, v):
        """Integer coordinates of v in Lambda, or None."""
        x = self.coordinates(v)
        if x is None or any(Fraction(a).denominator != 1 for a in x):
            return None
        return tuple(int(a) for a in x)

    def combination(self, coeffs):
        out = SymVector.real([0] * DIM)
        for a, v in zip(coeffs, self.vectors):
            if a:
                out = out + v * a
        return out


def riemann_pairing(x_form, x, y):
    """E(x, y) = Im(conj(x)^T X y) / w for symbolic vectors x, y."""
    acc = SymPoly()
    for i in range(DIM):
        for j in range(DIM):
            c = x_form[i, j]
            if c:
                acc = acc + (x[i].re * y[j].im - x[i].im * y[j].re) * c
    return acc.divide_by_omega()


def lattice_membership(v, lattice=None):
    return (lattice or PeriodLattice()).membership(v)


def verify_riemann_integrality(lattice=None):
    lat = lattice or PeriodLattice()
    m = lat.constants.m
    rep = CheckReport("torus.riemann", "integrality of the Riemann form on the period lattice")
    table = lat.riemann_table()
    integral = all(
        e.is_constant() and e.constant_value().denominator == 1 for row in table for e in row
    )
    rep.require("E integer valued on all 144 basis pairs", integral, PAPER)
    alternating = all(table[i][j] == -table[j][i] for i in range(RANK) for j in range(RANK))
    rep.require("E alternating", alternating, TRIVIAL)
    images = [v.apply(m) for v in lat.vectors]
    x_form = lat.constants.x
    compatible = all(
        riemann_pairing(x_form, images[i], lat.vectors[j])
        == riemann_pairing(x_form, lat.vectors[i], images[j])
        for i in range(RANK)
        for j in range(RANK)
    )
    rep.require("E(Mx, y) = E(x, My)", compatible, PAPER)
    if integral:
        rep.record("table", [[e.constant_value() for e in row] for row in table], DERIVED)
    return rep


# endomorphisms


@dataclass(frozen=True)
class EndoSolutionSpace:
    """Z-basis of integer tuples (A1, A2, B1, B2) with S = A1 + Omega A2."""

    basis: tuple
    nrows: int
    omega_square_rows: int
    omega_square_rank: int

    @property
    def rank(self):
        return len(self.basis)

    def s_components(self):
        return [a1 for a1, _, _, _ in self.basis]

    def a2_vanishes(self):
        return all(not any(x for r in a2.rows for x in r) for _, a2, _, _ in self.basis)

    def s_span(self):
        return hnf_basis([_flat(s) for s in self.s_components()], DIM * DIM)


def _flat(m):
    return tuple(x for r in m.rows for x in r)


def _unflat(v):
    return Matrix([v[i * DIM:(i + 1) * DIM] for i in range(DIM)], DIM)


_BLOCKS = ("A1", "A2", "B1", "B2")


def _var(block, i, j):
    return _BLOCKS.index(block) * DIM * DIM + i * DIM + j


def endomorphism_constraints(lattice):
    """Integer rows of the linear system Omega A2 Omega + A1 Omega - Omega B2 - B1 = 0.

    Returns ``(keys, rows)`` where each key is (i, j, part, monomial) and rows
    are sorted by key.
    """
    omega = lattice.omega_matrix()
    one = CSym(1)
    entries = {}
    for i in range(DIM):
        for j in range(DIM):
            acc = {}

            def add(var, coeff):
                acc[var] = acc[var] + coeff if var in acc else coeff

            for k in range(DIM):
                for l in range(DIM):
                    add(_var("A2", k, l), omega[i][k] * omega[l][j])
                add(_var("A1", i, k), omega[k][j])
                add(_var("B2", k, j), -omega[i][k])
            add(_var("B1", i, j), -one)
            entries[(i, j)] = acc
    rows = {}
    for (i, j), acc in entries.items():
        for var, coeff in acc.items():
            for part, poly in (("re", coeff.re), ("im", coeff.im)):
                for mono, c in poly.terms.items():
                    row = rows.setdefault((i, j, part, _mono_key(mono)), {})
                    row[var] = row.get(var, 0) + c
    keys = sorted(rows)
    nvars = 4 * DIM * DIM
    dense = []
    for key in keys:
        r = [Fraction(0)] * nvars
        for var, c in rows[key].items():
            r[var] = c
        dense.append(r)
    return keys, dense


def _mono_key(mono):
    return (sum(mono), mono[::-1])


def _is_omega_square(key):
    degree, reversed_mono = key[3]
    return degree == 2 and reversed_mono[::-1][OMEGA_INDEX] == 2


def endomorphism_solver(lattice=None):
    lat = lattice or PeriodLattice()
    keys, rows = endomorphism_constraints(lat)
    nvars = 4 * DIM * DIM
    system = Matrix(rows, nvars)
    kernel = integer_kernel(system)
    basis = []
    for v in kernel:
        blocks = [_unflat(v[b * DIM * DIM:(b + 1) * DIM * DIM]) for b in range(4)]
        basis.append(tuple(blocks))
    a2_cols = range(DIM * DIM, 2 * DIM * DIM)
    w2 = [r for key, r in zip(keys, rows) if _is_omega_square(key)]
    w2_rank = rank(Matrix([[r[c] for c in a2_cols] for r in w2], DIM * DIM)) if w2 else 0
    return EndoSolutionSpace(tuple(basis), len(rows), len(w2), w2_rank)


def substitute_endomorphism(lattice, a1, a2, b1, b2):
    """Evaluate Omega A2 Omega + A1 Omega - Omega B2 - B1 symbolically."""
    omega = lattice.omega_matrix()
    out = []
    for i in range(DIM):
        row = []
        for j in range(DIM):
            acc = CSym(-b1[i, j])
            for k in range(DIM):
                acc = acc + omega[k][j] * a1[i, k] - omega[i][k] * b2[k, j]
                for l in range(DIM):
                    if a2[k, l]:
                        acc = acc + omega[i][k] * omega[l][j] * a2[k, l]
            row.append(acc)
        out.append(row)
    return out


def maps_lattice_into_itself(lattice, s):
    return all(lattice.membership(v.apply(s)) is not None for v in lattice.vectors)


def r_span_matrices(m):
    ident = Matrix.identity(DIM)
    return [ident, m * 2, (m @ m) * 2]


def verify_endomorphisms(lattice=None):
    lat = lattice or PeriodLattice()
    m = lat.constants.m
    rep = CheckReport("torus.endomorphisms", "endomorphism ring of the torus")
    sol = endomorphism_solver(lat)
    rep.expect("kernel rank", sol.rank, 3, PAPER)
    rep.require("A2 = 0 in every solution", sol.a2_vanishes(), PAPER)
    expected = hnf_basis([_flat(s) for s in r_span_matrices(m)], DIM * DIM)
    rep.require("S-span equals Z{I, 2M, 2M^2}", sol.s_span() == expected, PAPER)
    resub = all(
        not any(c for row in substitute_endomorphism(lat, *t) for c in row) for t in sol.basis
    )
    rep.require("solutions re-substitute to zero", resub, DERIVED)
    rep.require(
        "every S in Z{I, 2M, 2M^2} maps Lambda into Lambda",
        all(maps_lattice_into_itself(lat, s) for s in r_span_matrices(m)),
        PAPER,
    )
    rep.record("constraint rows", sol.nrows, DERIVED)
    rep.record("w^2 rows", sol.omega_square_rows, DERIVED)
    rep.expect("rank of the w^2 block on A2 (forces A2 = 0)", sol.omega_square_rank, DIM * DIM, DERIVED)
    if not rep.failures():
        rep.summary = "End(torus) = Z[2M, 2M^2], kernel rank 3, A2 = 0"
    return rep


# two-torsion


@dataclass(frozen=True)
class TwoTorsion:
    module: FiniteModule
    g1: Matrix
    g2: Matrix
    kernel_dim: int
    a: int
    b: int
    flagged: tuple  # indices i where 2M^k e_i / 2 is not in (1/2) Lambda


def _f2_rank(rows):
    rows = [int("".join(str(x % 2) for x in r), 2) for r in rows]
    rk = 0
    while rows:
        pivot = max(rows)
        rows.remove(pivot)
        if not pivot:
            break
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows]
        rk += 1
    return rk


def _f2_product_zero(a, b):
    p = a @ b
    return all(x % 2 == 0 for r in p.rows for x in r)


def two_torsion_module(lattice=None):
    """(1/2)Lambda / Lambda as an R-module, with T_i the class of e_i / 2."""
    lat = lattice or PeriodLattice()
    m = lat.constants.m
    flagged = []
    actions = []
    for s in (m, m @ m):  # 2M (e_i / 2) = M e_i, likewise for 2M^2
        rows = []
        for i, v in enumerate(lat.vectors, start=1):
            x = lat.coordinates(v.apply(s))
            if x is None or any((2 * a).denominator != 1 for a in x):
                flagged.append(i)
                rows.append([0] * RANK)
                continue
            rows.append([int(2 * a) % 2 for a in x])
        actions.append(Matrix(rows, RANK))
    g1, g2 = actions
    r = r_order()
    module = FiniteModule(r, [2] * RANK, [Matrix.identity(RANK), g1, g2])
    stacked = [list(g1.row(i)) + list(g2.row(i)) for i in range(RANK)]
    kdim = RANK - _f2_rank(stacked)
    a = RANK - kdim
    b = RANK - 3 * a
    return TwoTorsion(module, g1, g2, kdim, a, b, tuple(sorted(set(flagged))))


def orbit_size_census(module):
    """Histogram of |R x| over all elements x."""
    out = {}
    for x in module.elements():
        n = len(cyclic_submodule(module, x.coords))
        out[n] = out.get(n, 0) + 1
    return dict(sorted(out.items()))


def model_two_torsion(a, b):
    """(R/2R)^a + (R/m)^b built from the order directly."""
    r = r_order()
    two_r = unit_lattice(r).scale(2)
    parts = [quotient_module(two_r, unit_lattice(r))] * a + [quotient_by_ideal(m_ideal())] * b
    return direct_sum(*parts)


def killed_by_m(module):
    """Number of elements x with 2M x = 2M^2 x = 0 (and 2 x = 0)."""
    count = 0
    for x in module.elements():
        if all(not any(module.apply(act, x.coords)) for act in module.actions[1:]) and not any(
            module.reduce([2 * c for c in x.coords])
        ):
            count += 1
    return count


def verify_two_torsion(lattice=None, census=True):
    lat = lattice or PeriodLattice()
    rep = CheckReport("torus.two_torsion", "R-module structure of the 2-torsion")
    tt = two_torsion_module(lat)
    rep.expect("entries outside (1/2)Lambda", list(tt.flagged), [], DERIVED)
    rep.require(
        "2M T_i = 2M^2 T_i = 0 for i = 1..6",
        all(not any(tt.g1.row(i)) and not any(tt.g2.row(i)) for i in range(6)),
        PAPER,
    )
    t = [tuple(1 if k == i else 0 for k in range(RANK)) for i in range(RANK)]
    rep.require("2M T7 = T8", tt.g1.row(6) == t[7], PAPER)
    rep.require("2M^2 T7 = T9", tt.g2.row(6) == t[8], PAPER)
    rep.require(
        "G1^2 = G2^2 = G1 G2 = 0 over F_2",
        _f2_product_zero(tt.g1, tt.g1) and _f2_product_zero(tt.g2, tt.g2) and _f2_product_zero(tt.g1, tt.g2),
        DERIVED,
    )
    rep.expect("dim ker G1 cap ker G2", tt.kernel_dim, 10, DERIVED)
    rep.expect("(a, b)", (tt.a, tt.b), (2, 6), PAPER)
    if census:
        rep.expect("elements killed by m", killed_by_m(tt.module), 2**10, DERIVED)
        hist = orbit_size_census(tt.module)
        model = orbit_size_census(model_two_torsion(2, 6))
        rep.expect("orbit-size census matches (R/2R)^2 + (R/m)^6", hist, model, DERIVED)
    if not rep.failures():
        rep.summary = "A[2] = (R/2R)^2 + (R/m)^6"
    return rep


def relabelled_lattice(perm, constants=None):
    """Period lattice with alpha_i renamed to alpha_perm[i]."""
    base_r, base_s = (1, 2, 3, 4, 5, 6), (4, 5, 6, 7, 8, 9)
    return PeriodLattice(constants, tuple(perm[i] for i in base_r), tuple(perm[i] for i in base_s))


def random_permutation(rng):
    labels = list(range(1, 10))
    rng.shuffle(labels)
    return dict(zip(range(1, 10), labels))


def nonzero_monomials(vectors):
    """Monomials occurring in a family of symbolic vectors, sorted."""
    seen = set()
    for v in vectors:
        for c in v:
            seen.update(c.re.terms)
            seen.update(c.im.terms)
    return sorted(seen, key=_mono_key)


__all__ = [
    "TORUS_M",
    "TORUS_X",
    "TorusConstants",
    "EndoSolutionSpace",
    "PeriodLattice",
    "TwoTorsion",
    "endomorphism_constraints",
    "endomorphism_solver",
    "lattice_membership",
    "maps_lattice_into_itself",
    "model_two_torsion",
    "orbit_size_census",
    "riemann_pairing",
    "substitute_endomorphism",
    "two_torsion_module",
    "verify_endomorphisms",
    "verify_matrix_identities",
    "verify_riemann_integrality",
    "verify_two_torsion",
]
