"""Finite R-modules: annihilators, semi-cyclicity and the support constant."""

from supportcert.modules import (
    Submodule,
    SubmoduleChain,
    annihilator_census,
    direct_sum,
    free_separating_module,
    is_semicyclic,
    quotient_by_ideal,
    quotient_module,
    support_constant_solver,
    verify_free_separation,
)
from supportcert.orders import eisenstein_integers, ideal_from_generators, m_ideal, r_order, unit_lattice

r = r_order()
r2 = quotient_module(unit_lattice(r).scale(2), unit_lattice(r))
named = {
    "(1)": unit_lattice(r),
    "(2)": ideal_from_generators(r, [r.one() * 2]),
    "m": m_ideal(),
}
print("R/2R has", len(r2), "elements; annihilator census:", annihilator_census(r2, named))

for name, mod in [("R/m", quotient_by_ideal(m_ideal())), ("R/2R", r2), ("R/2R + R/2R", direct_sum(r2, r2))]:
    ok, witness = is_semicyclic(mod)
    if ok:
        print(f"{name}: semi-cyclic")
    else:
        t1, t2 = witness
        print(f"{name}: not semi-cyclic, T1 = {mod.to_presentation_coords(t1.coords)},"
              f" T2 = {mod.to_presentation_coords(t2.coords)}")

for t in range(5):
    sol = support_constant_solver(t)
    print(f"t = {t}: least c = {sol.c}, phi1 = {[int(x) for x in sol.phi1.coords]}, phi2 = {[int(x) for x in sol.phi2.coords]}")

e = eisenstein_integers()
inner = Submodule(e, 3, [(2, -1, 0, 0, 0, 0)])
outer = Submodule(e, 3, [(1, 0, 0, 0, 0, 0)])
chain = SubmoduleChain(inner, outer)
sep = free_separating_module(chain)
print("free module separating (1 - zeta3) Z[zeta3] inside Z[zeta3]^3:", verify_free_separation(chain, sep))
