"""The six-dimensional period lattice: Riemann form, endomorphisms, 2-torsion."""

from supportcert.torus import (
    PeriodLattice,
    endomorphism_solver,
    two_torsion_module,
    verify_matrix_identities,
)

print(verify_matrix_identities().summary)

lat = PeriodLattice()
print("e7 =", [str(c.re) + (f" + i*({c.im})" if c.im else "") for c in lat.e(7)])
print("Riemann form on e1..e12:")
for row in lat.riemann_table():
    print("   ", " ".join(f"{int(e.constant_value()):3d}" for e in row))

sol = endomorphism_solver(lat)
print(f"constraint rows: {sol.nrows}, integer kernel rank: {sol.rank}, A2 = 0: {sol.a2_vanishes()}")
for s in sol.s_components():
    print("   S =", [list(r) for r in s.rows])

tt = two_torsion_module(lat)
print(f"2-torsion: dim ker G1 cap ker G2 = {tt.kernel_dim}, so A[2] = (R/2R)^{tt.a} + (R/m)^{tt.b}")
