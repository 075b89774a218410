"""Dense exact matrices over the integers and rationals.

Entries are Python ``int`` or :class:`fractions.Fraction`; nothing here ever
rounds.  Lattice routines (Hermite and Smith normal forms, integer kernels)
use row conventions: a lattice is the integer span of the rows of a matrix.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import numpy as np


def _canon(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    raise TypeError(f"exact entries only, got {type(x).__name__}")


class Matrix:
    """Immutable dense matrix with exact entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(_canon(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("empty matrix needs an explicit column count")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, r, c):
        return cls([[0] * c for _ in range(r)], c)

    @classmethod
    def diag(cls, entries):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_square(self):
        return self.nrows == self.ncols

    def is_integral(self):
        return all(isinstance(x, int) for r in self.rows for x in r)

    def denominator(self):
        """Least common multiple of all entry denominators."""
        return reduce(lcm, (Fraction(x).denominator for r in self.rows for x in r), 1)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def tolist(self):
        return [list(r) for r in self.rows]

    @property
    def T(self):
        return Matrix(list(zip(*self.rows)) if self.nrows else [], self.nrows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"

    def __add__(self, other):
        _same_shape(self, other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        _same_shape(self, other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def __mul__(self, k):
        if isinstance(k, Matrix):
            raise TypeError("use @ for matrix products")
        return Matrix([[a * k for a in r] for r in self.rows], self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.T.rows if other.nrows else [()] * other.ncols
            return Matrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows],
                other.ncols,
            )
        # vector on the right, treated as a column
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(_canon(sum(a * b for a, b in zip(r, v))) for r in self.rows)

    def __rmatmul__(self, other):
        # row vector on the left
        v = tuple(other)
        if len(v) != self.nrows:
            raise ValueError("vector length mismatch")
        return tuple(
            _canon(sum(v[i] * self.rows[i][j] for i in range(self.nrows) if v[i]))
            for j in range(self.ncols)
        )

    def __pow__(self, e):
        if not self.is_square() or e < 0:
            raise ValueError("non-negative powers of square matrices only")
        result, base = Matrix.identity(self.nrows), self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def trace(self):
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        return _canon(sum(self.rows[i][i] for i in range(self.nrows)))

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        a = [[Fraction(x) for x in r] for r in self.rows]
        n = self.nrows
        d = Fraction(1)
        for j in range(n):
            p = next((i for i in range(j, n) if a[i][j] != 0), None)
            if p is None:
                return 0
            if p != j:
                a[j], a[p] = a[p], a[j]
                d = -d
            d *= a[j][j]
            for i in range(j + 1, n):
                if a[i][j]:
                    f = a[i][j] / a[j][j]
                    a[i] = [x - f * y for x, y in zip(a[i], a[j])]
        return _canon(d)

    def inverse(self):
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = Matrix([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.rows)])
        red, piv = rref(aug)
        if piv != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix([r[n:] for r in red.rows[:n]], n)

    def submatrix(self, rows, cols):
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix([a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix(self.rows + other.rows, self.ncols)


def _same_shape(a, b):
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def block_diag(blocks):
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    rows = []
    c0 = 0
    for b in blocks:
        for r in b.rows:
            rows.append([0] * c0 + list(r) + [0] * (m - c0 - b.ncols))
        c0 += b.ncols
    return Matrix(rows, m) if n else Matrix.zeros(0, m)


def rref(m):
    """Reduced row echelon form over Q.  Returns (matrix, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in m.rows]
    nr, nc = m.shape
    pivots = []
    k = 0
    for j in range(nc):
        if k == nr:
            break
        p = next((i for i in range(k, nr) if a[i][j] != 0), None)
        if p is None:
            continue
        a[k], a[p] = a[p], a[k]
        pv = a[k][j]
        a[k] = [x / pv for x in a[k]]
        for i in range(nr):
            if i != k and a[i][j]:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        pivots.append(j)
        k += 1
    return Matrix(a, nc), pivots


def rank(m):
    return len(rref(m)[1])


def rational_kernel(m):
    """Basis of {v : m v = 0} over Q, one vector per free column."""
    red, piv = rref(m)
    free = [j for j in range(m.ncols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for i, pj in enumerate(piv):
            v[pj] = -red[i, f]
        basis.append(tuple(_canon(x) for x in v))
    return basis


def solve_left(a, b):
    """Some x with x @ a == b over Q, or None if b is outside the row space."""
    red, piv = rref(a.T.hstack(Matrix([[x] for x in b], 1)))
    if piv and piv[-1] == a.nrows:
        return None
    x = [0] * a.nrows
    for i, pj in enumerate(piv):
        x[pj] = red[i, a.nrows]
    return tuple(_canon(v) for v in x)


def hnf(m):
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``h == u @ m``.  Pivots are
    positive, entries above a pivot lie in ``[0, pivot)``, zero rows come last.
    """
    if not m.is_integral():
        raise ValueError("hnf needs an integer matrix")
    r, c = m.shape
    a = [list(x) for x in m.rows]
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    k = 0
    for j in range(c):
        if k == r:
            break
        while True:
            nz = [i for i in range(k, r) if a[i][j]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][j]))
            a[k], a[p] = a[p], a[k]
            u[k], u[p] = u[p], u[k]
            clean = True
            for i in range(k + 1, r):
                if a[i][j]:
                    q = a[i][j] // a[k][j]
                    a[i] = [x - q * y for x, y in zip(a[i], a[k])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[k])]
                    clean = clean and a[i][j] == 0
            if clean:
                break
        if k == r or a[k][j] == 0:
            continue
        if a[k][j] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
        for i in range(k):
            q = a[i][j] // a[k][j]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[k])]
                u[i] = [x - q * y for x, y in zip(u[i], u[k])]
        k += 1
    return Matrix(a, c), Matrix(u, r)


def hnf_basis(rows, ncols):
    """Nonzero rows of the HNF of the integer span of ``rows``."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return Matrix.zeros(0, ncols)
    h, _ = hnf(Matrix(rows, ncols))
    return Matrix([r for r in h.rows if any(r)], ncols)


def snf(m):
    """Smith normal form.  Returns ``(d, l, r)`` with ``l @ m @ r == d``.

    ``l`` and ``r`` are unimodular and the diagonal of ``d`` is a divisor chain
    of non-negative integers.
    """
    if not m.is_integral():
        raise ValueError("snf needs an integer matrix")
    nr, nc = m.shape
    a = [list(x) for x in m.rows]
    left = [[int(i == j) for j in range(nr)] for i in range(nr)]
    right = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    for t in range(min(nr, nc)):
        cand = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not cand:
            break
        _, i0, j0 = min(cand)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, nr) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
            if rest:
                _, i0, j0 = min(rest)
                if i0 != t:
                    swap_rows(t, i0)
                else:
                    swap_cols(t, j0)
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
    return Matrix(a, nc), Matrix(left, nr), Matrix(right, nc)


def invariant_factors(m):
    d, _, _ = snf(m)
    return [d[i, i] for i in range(min(m.shape))]


_PRIME = 2_147_483_647  # 2**31 - 1: products of residues fit in int64


def _independent_rows_mod_p(rows, ncols):
    """Indices of a maximal set of rows independent modulo a large prime."""
    a = np.array([[x % _PRIME for x in r] for r in rows], dtype=np.int64)
    order = np.arange(len(rows))
    k = 0
    for j in range(ncols):
        if k == len(rows):
            break
        nz = np.nonzero(a[k:, j])[0]
        if nz.size == 0:
            continue
        p = k + nz[0]
        a[[k, p]] = a[[p, k]]
        order[[k, p]] = order[[p, k]]
        inv = pow(int(a[k, j]), _PRIME - 2, _PRIME)
        a[k] = (a[k] * inv) % _PRIME
        below = a[k + 1:, j].copy()
        if below.any():
            # row-by-row update keeps every product below 2**62
            for col in range(ncols):
                if a[k, col]:
                    a[k + 1:, col] = (a[k + 1:, col] - below * a[k, col]) % _PRIME
        k += 1
    return sorted(order[:k].tolist())


def integer_kernel(m):
    """HNF-canonical Z-basis of {v in Z^n : m v = 0}.

    The basis is saturated: it spans the rational kernel intersected with Z^n.
    """
    if not m.is_integral():
        m = m * m.denominator()
    rows = [r for r in dict.fromkeys(m.rows) if any(r)]
    n = m.ncols
    if not rows:
        return [tuple(r) for r in Matrix.identity(n).rows]
    if len(rows) > n:
        picked = [rows[i] for i in _independent_rows_mod_p(rows, n)]
    else:
        picked = rows
    basis = _kernel_from_rows(picked, n)
    if len(picked) < len(rows) and any(
        sum(a * b for a, b in zip(r, v)) for v in basis for r in rows
    ):
        basis = _kernel_from_rows(rows, n)
    return basis


def _kernel_from_rows(rows, n):
    h, u = hnf(Matrix(rows, n).T)
    vecs = [u.row(i) for i in range(h.nrows) if not any(h.row(i))]
    return [tuple(r) for r in hnf_basis(vecs, n).rows]


def lattice_intersection(a, b, ncols):
    """HNF basis of the intersection of two integer row lattices."""
    if not a or not b:
        return Matrix.zeros(0, ncols)
    stacked = Matrix([tuple(r) for r in a] + [tuple(-x for x in r) for r in b], ncols).T
    vecs = []
    for v in integer_kernel(stacked):
        coeffs = v[: len(a)]
        vecs.append(tuple(sum(c * r[j] for c, r in zip(coeffs, a)) for j in range(ncols)))
    return hnf_basis(vecs, ncols)


def row_lattice_contains(basis, v):
    """Membership of ``v`` in the integer row span of ``basis``."""
    if basis.nrows == 0:
        return not any(v)
    x = solve_left(basis, v)
    return x is not None and all(Fraction(c).denominator == 1 for c in x)


def charpoly(m):
    """Characteristic polynomial det(xI - m) by Faddeev-LeVerrier."""
    from .poly import Poly

    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.nrows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = Matrix.identity(n)
    mk = Matrix.zeros(n, n)
    for k in range(1, n + 1):
        mk = m @ mk + ident * coeffs[n - k + 1]
        coeffs[n - k] = Fraction(-(m @ mk).trace()) / k
    return Poly(coeffs)


def minpoly(m):
    """Minimal polynomial: first linear relation among I, m, m^2, ..."""
    from .poly import Poly

    if not m.is_square():
        raise ValueError("minimal polynomial of a non-square matrix")
    n = m.nrows
    powers = [Matrix.identity(n)]
    while True:
        flat = Matrix([[x for r in p.rows for x in r] for p in powers], n * n)
        nxt = powers[-1] @ m
        target = tuple(x for r in nxt.rows for x in r)
        sol = solve_left(flat, target)
        if sol is not None:
            return Poly([-c for c in sol] + [1])
        powers.append(nxt)


def leading_minors(m):
    return [m.submatrix(range(k), range(k)).det() for k in range(1, m.nrows + 1)]


def is_unimodular(m):
    return m.is_integral() and m.is_square() and abs(m.det()) == 1


def content(v):
    return reduce(gcd, (abs(x) for x in v), 0)
