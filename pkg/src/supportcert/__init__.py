"""Exact certificates for the support problem on abelian varieties: orders and
their lattices, finite modules, a six-dimensional torus with real
multiplication by Z[2t, 2t^2], and CM elliptic curves over prime fields.
"""

from .linalg import Matrix, charpoly, hnf, integer_kernel, minpoly, snf
from .modules import (
    FiniteModule,
    SubmoduleChain,
    Submodule,
    annihilator,
    free_separating_module,
    independent_point,
    is_semicyclic,
    quotient_module,
    support_constant_solver,
)
from .orders import (
    Lattice,
    OrderRing,
    colon_lattice,
    ideal_from_generators,
    ideal_membership,
    isogeny_to_maximal,
    multiplier_ring,
    order_from_minpoly,
)
from .poly import Poly
from .report import CheckReport
from .symbolic import CSym, SymPoly, SymVector

__version__ = "0.1.0"
