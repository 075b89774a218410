"""Modules over orders: finite quotients, annihilators, semi-cyclicity, and
the torsion-free submodules of O^k used for the free-module separation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .linalg import (
    Matrix,
    block_diag,
    hnf_basis,
    integer_kernel,
    lattice_intersection,
    row_lattice_contains,
    snf,
    solve_left,
)
from .orders import (
    Lattice,
    NotEuclideanError,
    OrderElement,
    integers,
    r_order,
    unit_lattice,
)

SEMICYCLIC_LIMIT = 2**20
SOLVER_MAX_T = 12


class ModuleError(ValueError):
    pass


class RankOverflowError(ModuleError):
    pass


class FiniteModule:
    """Finite abelian group (+) Z/d_i in Smith form with an action of an order.

    Elements are row vectors reduced modulo the d_i; the owner's basis element
    b_j acts by ``x -> x @ actions[j]``.
    """

    def __init__(self, owner, invariants, actions, check=True):
        self.owner = owner
        self.invariants = tuple(int(d) for d in invariants)
        if any(d < 2 for d in self.invariants):
            raise ModuleError("invariant factors must be at least 2")
        for a, b in zip(self.invariants, self.invariants[1:]):
            if b % a:
                raise ModuleError("invariant factors must form a divisor chain")
        self.actions = tuple(self._reduce_matrix(a) for a in actions)
        if len(self.actions) != owner.rank:
            raise ModuleError("need one action matrix per basis element of the order")
        self.presentation = None
        self.presentation_inverse = None
        self.relations = None
        self.ambient = None
        if check:
            self.check_axioms()

    def _reduce_matrix(self, a):
        d = self.invariants
        return Matrix([[a[i, j] % d[j] for j in range(len(d))] for i in range(len(d))], len(d))

    @property
    def ngens(self):
        return len(self.invariants)

    def __len__(self):
        out = 1
        for d in self.invariants:
            out *= d
        return out

    @property
    def size(self):
        return len(self)

    def exponent(self):
        return self.invariants[-1] if self.invariants else 1

    def __repr__(self):
        group = " + ".join(f"Z/{d}" for d in self.invariants) or "0"
        return f"FiniteModule({group} over {self.owner.name})"

    def reduce(self, coords):
        return tuple(int(x) % d for x, d in zip(coords, self.invariants))

    def element(self, coords):
        if len(coords) != self.ngens:
            raise ModuleError("coordinate vector of the wrong length")
        return ModuleElement(self, self.reduce(coords))

    def zero(self):
        return ModuleElement(self, (0,) * self.ngens)

    def elements(self):
        for c in itertools.product(*(range(d) for d in self.invariants)):
            yield ModuleElement(self, c)

    def apply(self, mat, coords):
        return self.reduce(coords @ mat) if self.ngens else ()

    def act(self, alpha, coords):
        """alpha * x for alpha given by integer coordinates in the owner."""
        if isinstance(alpha, OrderElement):
            alpha = alpha.coords
        out = [0] * self.ngens
        for a, mat in zip(alpha, self.actions):
            a = int(a)
            if a:
                img = self.apply(mat, coords)
                out = [x + a * y for x, y in zip(out, img)]
        return self.reduce(out)

    def element_order(self, coords):
        out = 1
        for x, d in zip(coords, self.invariants):
            out = lcm(out, d // gcd(int(x), d))
        return out

    def check_axioms(self):
        d = self.invariants
        n = self.ngens
        ident = Matrix.identity(n)
        if self._reduce_matrix(ident) != self.actions[0]:
            raise ModuleError("b_0 must act as the identity")
        for a in self.actions:
            for i in range(n):
                for j in range(n):
                    if (d[i] * a[i, j]) % d[j]:
                        raise ModuleError("action is not well defined modulo the invariants")
        for i, ai in enumerate(self.actions):
            for j, aj in enumerate(self.actions):
                prod = self._reduce_matrix(ai @ aj)
                other = self._reduce_matrix(aj @ ai)
                if prod != other:
                    raise ModuleError(f"actions of b_{i} and b_{j} do not commute")
                combo = Matrix.zeros(n, n)
                for k, c in enumerate(self.owner.structure[i][j]):
                    if c:
                        combo = combo + self.actions[k] * c
                if prod != self._reduce_matrix(combo):
                    raise ModuleError(f"actions violate the structure constants at (b_{i}, b_{j})")

    @classmethod
    def from_presentation(cls, owner, relations, actions):
        """Z^m / rowspan(relations) with actions x -> x @ A, put in Smith form."""
        m = relations.ncols
        if relations.nrows == 0:
            raise ModuleError("infinite module: no relations")
        dd, _, right = snf(relations)
        diag = [dd[i, i] if i < min(dd.shape) else 0 for i in range(m)]
        if any(x == 0 for x in diag):
            raise ModuleError("relations do not have full rank: module is infinite")
        right_inv = right.inverse()
        keep = [i for i, x in enumerate(diag) if x != 1]
        new_actions = []
        for a in actions:
            z = right_inv @ a @ right
            new_actions.append(z.submatrix(keep, keep))
        mod = cls(owner, [diag[i] for i in keep], new_actions)
        # presentation coordinates y map to Smith coordinates y @ right, restricted
        mod.presentation = right.submatrix(range(m), keep)
        mod.presentation_inverse = right_inv.submatrix(keep, range(m))
        mod.relations = relations
        return mod

    def from_presentation_coords(self, y):
        if self.presentation is None:
            raise ModuleError("module has no recorded presentation")
        return self.element(y @ self.presentation)

    def to_presentation_coords(self, coords):
        """A representative in presentation coordinates; diagonal relations reduce it."""
        if self.presentation is None:
            raise ModuleError("module has no recorded presentation")
        y = tuple(coords) @ self.presentation_inverse
        rel = self.relations
        if rel.is_square() and all(rel[i, j] == 0 for i in range(rel.nrows) for j in range(rel.ncols) if i != j):
            y = tuple(int(v) % rel[i, i] for i, v in enumerate(y))
        return tuple(int(v) for v in y)


@dataclass(frozen=True)
class ModuleElement:
    module: FiniteModule
    coords: tuple

    def __add__(self, other):
        return self.module.element([a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return self.module.element([-a for a in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        if isinstance(k, int):
            return self.module.element([k * a for a in self.coords])
        return NotImplemented

    def act(self, alpha):
        return ModuleElement(self.module, self.module.act(alpha, self.coords))

    @property
    def order(self):
        return self.module.element_order(self.coords)

    def is_zero(self):
        return not any(self.coords)


def quotient_module(l1, l2):
    """l2 / l1 for lattices l1 inside l2 in K^k, with the induced action."""
    if l1.owner != l2.owner or l1.k != l2.k:
        raise ModuleError("lattices live in different ambient modules")
    if not l1.issubset(l2):
        raise ModuleError("first lattice is not contained in the second")
    rel_rows = [l2.coordinates(v) for v in l1.basis_vectors()]
    relations = Matrix([[int(x) for x in r] for r in rel_rows], l2.dim)
    b2 = l2.basis
    b2_inv = b2.inverse()
    actions = []
    for b in l2.owner.basis():
        a = b2 @ l2.action_matrix(b.coords) @ b2_inv
        if not a.is_integral():
            raise ModuleError("outer lattice is not a module over the order")
        actions.append(a)
    mod = FiniteModule.from_presentation(l2.owner, relations, actions)
    mod.ambient = l2
    return mod


def ambient_element(module, v):
    """Class of an ambient vector v (in the outer lattice) in the quotient."""
    y = module.ambient.coordinates(v)
    if any(Fraction(x).denominator != 1 for x in y):
        raise ModuleError("vector is not in the outer lattice")
    return module.from_presentation_coords(tuple(int(x) for x in y))


def annihilator(x):
    """Ideal of owner elements killing x, via an integer kernel."""
    module = x.module
    owner = module.owner
    n, g = owner.rank, module.ngens
    images = [module.apply(a, x.coords) for a in module.actions]
    # columns: coefficient of b_j, then one slack per invariant factor
    rows = []
    for k in range(g):
        row = [images[j][k] for j in range(n)]
        row += [module.invariants[k] if kk == k else 0 for kk in range(g)]
        rows.append(row)
    if g == 0:
        return unit_lattice(owner)
    kernel = integer_kernel(Matrix(rows, n + g))
    alphas = [v[:n] for v in kernel]
    return Lattice(owner, alphas, ideal=True)


def annihilator_census(module, named_ideals):
    """Count elements by annihilator; ``named_ideals`` maps labels to lattices."""
    counts = {name: 0 for name in named_ideals}
    counts["other"] = 0
    for x in module.elements():
        ann = annihilator(x)
        label = next((name for name, lat in named_ideals.items() if lat == ann), "other")
        counts[label] += 1
    return counts


def _subgroup(module, gens):
    seen = {module.zero().coords}
    frontier = list(seen)
    gens = [g for g in dict.fromkeys(gens) if any(g)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = module.reduce([a + b for a, b in zip(x, g)])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def cyclic_submodule(module, coords):
    """R * x as a set of coordinate tuples."""
    return _subgroup(module, [module.apply(a, coords) for a in module.actions])


def is_semicyclic(module):
    """Decide semi-cyclicity by exhaustion.

    Returns ``(True, None)`` or ``(False, (T1, T2))`` with the lexicographically
    least pair such that ord(T1) | ord(T2) and T1 is not in R * T2.
    """
    if len(module) > SEMICYCLIC_LIMIT:
        raise ModuleError(f"module of size {len(module)} exceeds the exhaustion guard")
    elems = [x.coords for x in module.elements()]
    order = {x: module.element_order(x) for x in elems}
    torsion_size = {}
    for n in set(order.values()):
        torsion_size[n] = sum(1 for x in elems if n % order[x] == 0)
    best = None
    for t2 in elems:
        n = order[t2]
        span = cyclic_submodule(module, t2)
        if len(span) == torsion_size[n]:
            continue
        t1 = min(x for x in elems if n % order[x] == 0 and x not in span)
        if best is None or (t1, t2) < best:
            best = (t1, t2)
    if best is None:
        return True, None
    return False, (module.element(best[0]), module.element(best[1]))


def direct_sum(*modules):
    owner = modules[0].owner
    if any(m.owner != owner for m in modules):
        raise ModuleError("summands over different orders")
    relations = Matrix.diag([d for m in modules for d in m.invariants])
    actions = [block_diag([m.actions[j] for m in modules]) for j in range(owner.rank)]
    return FiniteModule.from_presentation(owner, relations, actions)


def cyclic_group(n):
    """Z/n as a module over Z."""
    z = integers()
    return FiniteModule.from_presentation(z, Matrix([[n]]), [Matrix([[1]])])


def quotient_by_ideal(ideal):
    return quotient_module(ideal, unit_lattice(ideal.owner))


@dataclass(frozen=True)
class SupportConstant:
    t: int
    c: int
    phi1: OrderElement
    phi2: OrderElement

    def check(self):
        """Re-substitute: 2t^2 c == 2 phi1 + 2t phi2 in R, phi_i in 2^t R."""
        r = self.phi1.owner
        lhs = r.gen(2) * self.c
        rhs = self.phi1 * 2 + r.gen(1) * self.phi2
        in_power = all(Fraction(x) % (2**self.t) == 0 for x in self.phi1.coords + self.phi2.coords)
        return lhs == rhs and in_power


def support_constant_solver(t):
    """Least c > 0 with 2t^2 c = 2 phi1 + 2t phi2 for some phi1, phi2 in 2^t R.

    Unknowns are c and the R-coordinates u, v of phi1 = 2^t u, phi2 = 2^t v;
    the solution set is the integer kernel of a 3 x 7 system and its HNF gives
    the least positive c directly.
    """
    if not 0 <= t <= SOLVER_MAX_T:
        raise ModuleError(f"t must lie in 0..{SOLVER_MAX_T}")
    r = r_order()
    s = 2**t
    two_tau = r.mult_matrix(r.gen(1).coords)  # row i: b_i * 2t
    cols = [r.gen(2).coords]
    cols += [tuple(-2 * s * x for x in r.gen(i).coords) for i in range(3)]
    cols += [tuple(-s * x for x in two_tau.row(i)) for i in range(3)]
    system = Matrix([[int(col[k]) for col in cols] for k in range(3)], 7)
    kernel = integer_kernel(system)
    h = hnf_basis(kernel, 7)
    sol = next((row for row in h.rows if row[0]), None)
    if sol is None:
        raise ModuleError("no solution with c != 0")
    c = sol[0]
    result = SupportConstant(t, c, r.element([s * x for x in sol[1:4]]), r.element([s * x for x in sol[4:7]]))
    if not result.check():
        raise ModuleError("solver produced an invalid solution")
    return result


# Torsion-free submodules of O^k


def _act(owner, k, x, v):
    n = owner.rank
    out = []
    for c in range(k):
        out.extend(owner.mul(v[c * n:(c + 1) * n], x))
    return tuple(out)


class Submodule:
    """Finitely generated submodule of O^k, given by generators."""

    def __init__(self, owner, k, gens):
        self.owner = owner
        self.k = k
        dim = k * owner.rank
        self.gens = [tuple(Fraction(x) for x in g) for g in gens]
        if any(len(g) != dim for g in self.gens):
            raise ModuleError("generator of the wrong length")
        if any(Fraction(x).denominator != 1 for g in self.gens for x in g):
            raise ModuleError("generators must lie in O^k")

    @property
    def dim(self):
        return self.k * self.owner.rank

    def zlattice(self):
        """HNF basis of the underlying Z-lattice in Z^(k n)."""
        rows = [
            tuple(int(x) for x in _act(self.owner, self.k, b.coords, g))
            for g in self.gens
            for b in self.owner.basis()
        ]
        return hnf_basis(rows, self.dim)

    def rank(self):
        """Rank over the fraction field."""
        return self.zlattice().nrows // self.owner.rank

    def contains(self, v):
        lat = self.zlattice()
        if lat.nrows == 0:
            return not any(v)
        return row_lattice_contains(lat, tuple(int(x) for x in v))

    def issubset(self, other):
        return all(other.contains(g) for g in self.gens)

    def plus(self, vectors):
        return Submodule(self.owner, self.k, self.gens + [tuple(v) for v in vectors])

    def __repr__(self):
        return f"Submodule(rank {self.rank()} in {self.owner.name}^{self.k})"


class SubmoduleChain:
    """M inside N inside O^k, containment checked on construction."""

    def __init__(self, inner, outer):
        if inner.owner != outer.owner or inner.k != outer.k:
            raise ModuleError("submodules of different ambient modules")
        if not inner.issubset(outer):
            raise ModuleError("inner module is not contained in the outer module")
        self.inner = inner
        self.outer = outer

    @property
    def owner(self):
        return self.inner.owner

    @property
    def k(self):
        return self.inner.k


def independent_point(module, candidate):
    """True iff alpha * P lies outside M for every nonzero alpha.

    In O^k this is equivalent to P leaving the K-span of M, i.e. the rank
    growing when P is added.
    """
    if isinstance(module, SubmoduleChain):
        module = module.inner
    return module.plus([candidate]).rank() > module.rank()


def dependence_witness(module, candidate):
    """A nonzero alpha with alpha * P in M, or None if P is independent.

    When P is in the K-span of M some positive integer multiple already lies
    in M: the least one is the denominator of P in M's Z-lattice coordinates.
    """
    if isinstance(module, SubmoduleChain):
        module = module.inner
    if not any(candidate):
        return module.owner.one()
    if independent_point(module, candidate):
        return None
    lat = module.zlattice()
    coords = solve_left(lat, tuple(int(x) for x in candidate))
    d = 1
    for x in coords:
        d = lcm(d, Fraction(x).denominator)
    alpha = module.owner.one() * d
    if not module.contains(_act(module.owner, module.k, alpha.coords, candidate)):
        raise ModuleError("dependence witness failed verification")
    return alpha


def euclidean_echelon(owner, gens, k):
    """Row echelon form over a Euclidean order.

    Returns ``(rows, transform, rank)`` with ``transform @ gens == rows`` over
    the order; the first ``rank`` rows are a free basis of the span and the
    remaining transform rows are a basis of the relations among the gens.
    """
    if not owner.euclidean:
        raise NotEuclideanError(f"{owner.name} has no supplied Euclidean division")
    n = owner.rank
    m = len(gens)
    zero = (Fraction(0),) * n
    one = owner.one().coords
    rows = [[tuple(g[c * n:(c + 1) * n]) for c in range(k)] for g in gens]
    trans = [[one if i == j else zero for j in range(m)] for i in range(m)]

    def sub_mult(i, src, q):
        rows[i] = [tuple(a - b for a, b in zip(x, owner.mul(q, y))) for x, y in zip(rows[i], rows[src])]
        trans[i] = [tuple(a - b for a, b in zip(x, owner.mul(q, y))) for x, y in zip(trans[i], trans[src])]

    t = 0
    for col in range(k):
        if t == m:
            break
        while True:
            nz = [i for i in range(t, m) if any(rows[i][col])]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(owner.norm(rows[i][col])), i))
            rows[t], rows[p] = rows[p], rows[t]
            trans[t], trans[p] = trans[p], trans[t]
            clean = True
            for i in range(t + 1, m):
                if any(rows[i][col]):
                    q, rem = owner.euclidean_divmod(rows[i][col], rows[t][col])
                    sub_mult(i, t, q)
                    clean = clean and not any(rem)
            if clean:
                break
        if any(rows[t][col]):
            t += 1
    flat_rows = [tuple(x for part in r for x in part) for r in rows]
    flat_trans = [tuple(x for part in r for x in part) for r in trans]
    return flat_rows, flat_trans, t


@dataclass
class FreeSeparation:
    """Output of the free-module separation and the pieces used to build it."""

    free: Submodule
    free_basis: list
    module_basis: list
    fresh: list
    relations: list


def free_separating_module(chain):
    """A free F with M inside F and F meet N equal to M.

    Follows the construction for maximal orders: M is projective (here free,
    the order being Euclidean), so M + A = O^r for the relation module A of a
    generating set.  A is placed on fresh points B_1..B_s chosen one at a time
    independent of N + <B_1..B_{j-1}>, and F = M + <B_1..B_s>.
    """
    owner, k = chain.owner, chain.k
    m_gens = chain.inner.gens
    if not m_gens:
        return FreeSeparation(Submodule(owner, k, []), [], [], [], [])
    rows, trans, rk = euclidean_echelon(owner, m_gens, k)
    module_basis = rows[:rk]
    relations = trans[rk:]
    s = len(relations)
    fresh = []
    current = chain.outer
    n = owner.rank
    for _ in range(s):
        found = None
        for c in range(k):
            e = tuple(Fraction(int(i == c * n)) for i in range(k * n))
            if independent_point(current, e):
                found = e
                break
        if found is None:
            raise RankOverflowError(f"no fresh independent coordinate left in {owner.name}^{k}")
        fresh.append(found)
        current = current.plus([found])
    free_basis = module_basis + fresh
    return FreeSeparation(Submodule(owner, k, free_basis), free_basis, module_basis, fresh, relations)


def verify_free_separation(chain, sep):
    """Independent HNF checks of the three properties of the separation."""
    owner, k = chain.owner, chain.k
    f = sep.free
    n = owner.rank
    basis = sep.free_basis
    # freeness: basis vectors independent over K and spanning F
    independent = Submodule(owner, k, basis).rank() == len(basis)
    spans = Submodule(owner, k, basis).zlattice() == f.zlattice()
    contains_inner = chain.inner.issubset(f)
    meet = lattice_intersection(f.zlattice().rows, chain.outer.zlattice().rows, k * n)
    intersection_ok = meet == chain.inner.zlattice()
    return {
        "free": independent and spans,
        "contains_inner": contains_inner,
        "intersection_is_inner": intersection_ok,
        "rank": len(basis),
    }
