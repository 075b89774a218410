"""Multivariate polynomials over Q in the fixed indeterminates a1..a9, w.

The real numbers alpha_1..alpha_9 and omega of the period-lattice
construction are modelled as formal indeterminates.  Linear independence of
``{1, alpha_1, ..., alpha_9}`` and the condition on ``omega^2`` then become
independence of monomials, so an identity between polynomials here is an
identity for every admissible choice of the real numbers.
"""

from __future__ import annotations

from fractions import Fraction

NVARS = 10
OMEGA_INDEX = 9
VAR_NAMES = tuple(f"a{i}" for i in range(1, 10)) + ("w",)

ZERO_EXP = (0,) * NVARS


def _exp(index, power=1):
    e = [0] * NVARS
    e[index] = power
    return tuple(e)


def _order_key(exp):
    # graded lex with a1 < ... < a9 < w: compare degree, then w first
    return (sum(exp), exp[::-1])


class SymPoly:
    """Canonical sparse polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != NVARS:
                raise ValueError("exponent vector of the wrong length")
            c = Fraction(c)
            if c:
                clean[tuple(e)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SymPoly is immutable")

    @classmethod
    def const(cls, c):
        return cls({ZERO_EXP: c})

    @classmethod
    def var(cls, index):
        return cls({_exp(index): 1})

    @classmethod
    def alpha(cls, i):
        """The indeterminate alpha_i, 1-based."""
        if not 1 <= i <= 9:
            raise ValueError("alpha index runs from 1 to 9")
        return cls.var(i - 1)

    @classmethod
    def omega(cls):
        return cls.var(OMEGA_INDEX)

    def _coerce(self, other):
        if isinstance(other, SymPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return SymPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SymPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return SymPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymPoly({e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SymPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def coefficient_of(self, monomial):
        """Coefficient of a monomial given as an exponent tuple or a SymPoly."""
        if isinstance(monomial, SymPoly):
            if len(monomial.terms) != 1:
                raise ValueError("not a monomial")
            (monomial,) = monomial.terms
        return self.terms.get(tuple(monomial), Fraction(0))

    def monomials(self):
        return sorted(self.terms, key=_order_key)

    def is_constant(self):
        return all(e == ZERO_EXP for e in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(ZERO_EXP, Fraction(0))

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def divide_by_omega(self):
        """Exact division by w; every term must carry a factor w."""
        out = {}
        for e, c in self.terms.items():
            if e[OMEGA_INDEX] == 0:
                raise ArithmeticError(f"{self} is not divisible by w")
            e = list(e)
            e[OMEGA_INDEX] -= 1
            out[tuple(e)] = c
        return SymPoly(out)

    def relabel(self, perm):
        """Rename a_i to a_perm[i] (1-based mapping on alpha indices)."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * NVARS
            ne[OMEGA_INDEX] = e[OMEGA_INDEX]
            for i in range(9):
                if e[i]:
                    ne[perm[i + 1] - 1] += e[i]
            out[tuple(ne)] = c
        return SymPoly(out)

    def __repr__(self):
        return f"SymPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e in reversed(self.monomials()):
            c = self.terms[e]
            mono = "*".join(
                VAR_NAMES[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out


ZERO = SymPoly()
ONE = SymPoly.const(1)


class CSym:
    """A complex symbol re + im*i with SymPoly parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=ZERO, im=ZERO):
        object.__setattr__(self, "re", re if isinstance(re, SymPoly) else SymPoly.const(re))
        object.__setattr__(self, "im", im if isinstance(im, SymPoly) else SymPoly.const(im))

    def __setattr__(self, name, value):
        raise AttributeError("CSym is immutable")

    def __add__(self, other):
        return CSym(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return CSym(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return CSym(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, CSym):
            return CSym(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return CSym(self.re * other, self.im * other)

    __rmul__ = __mul__

    def conjugate(self):
        return CSym(self.re, -self.im)

    def __eq__(self, other):
        if not isinstance(other, CSym):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"CSym({self.re} + ({self.im})*i)"


class SymVector:
    """Point of C^n whose coordinates are complex symbols."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(c if isinstance(c, CSym) else CSym(c) for c in coords))

    def __setattr__(self, name, value):
        raise AttributeError("SymVector is immutable")

    @classmethod
    def from_parts(cls, re, im):
        return cls([CSym(a, b) for a, b in zip(re, im)])

    @classmethod
    def real(cls, values):
        return cls([CSym(v) for v in values])

    @property
    def dim(self):
        return len(self.coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other):
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")

    def __add__(self, other):
        self._check(other)
        return SymVector([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return SymVector([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return SymVector([-a for a in self.coords])

    def __mul__(self, k):
        return SymVector([a * k for a in self.coords])

    __rmul__ = __mul__

    def apply(self, m):
        """Multiply by an exact real matrix on the left."""
        if m.ncols != self.dim:
            raise ValueError("dimension mismatch")
        out = []
        for row in m.rows:
            acc = CSym()
            for a, c in zip(row, self.coords):
                if a:
                    acc = acc + c * a
            out.append(acc)
        return SymVector(out)

    def re(self):
        return tuple(c.re for c in self.coords)

    def im(self):
        return tuple(c.im for c in self.coords)

    def relabel(self, perm):
        return SymVector([CSym(c.re.relabel(perm), c.im.relabel(perm)) for c in self.coords])

    def __eq__(self, other):
        if not isinstance(other, SymVector):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"SymVector({list(self.coords)})"
