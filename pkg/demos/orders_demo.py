"""Walk through R = Z[2t, 2t^2] inside Z[t], where t^3 + t^2 - 2t - 1 = 0."""

from supportcert.orders import (
    colon_lattice,
    ideal_from_generators,
    ideal_membership,
    isogeny_to_maximal,
    m_ideal,
    multiplier_ring,
    r_order,
    unit_lattice,
    z_tau,
)

r = r_order()
print("structure constants of R in the basis 1, 2t, 2t^2:")
for i in range(3):
    print("   ", [r.structure[i][j] for j in range(3)])

m = m_ideal()
print("index of m in R:", m.index_in(unit_lattice(r)))
print("multiplier ring of m is Z[t]:", multiplier_ring(m).same_order(z_tau()))
print("(m : m) has index", colon_lattice(m, m).index_in(unit_lattice(r)), "in R")

ideal = ideal_from_generators(r, [r.one() * 2, r.gen(1)])
for k in range(1, 5):
    print(f"{k} * 2t^2 in (2, 2t):", ideal_membership(r.gen(2) * k, ideal))

iso = isogeny_to_maximal(r, z_tau(), unit_lattice(r))
print("isogeny degree parameter n =", iso.n)
print("image lattice has multiplier ring Z[t]:", multiplier_ring(iso.lattice).same_order(z_tau()))
