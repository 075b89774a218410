import itertools
from fractions import Fraction

import pytest
from oracles import (
    random_chain,
    ring_mod2_annihilator_census,
    seeded,
    semicyclic_by_definition,
    small_modules,
    support_constant_by_residues,
)

from supportcert.linalg import Matrix
from supportcert.modules import (
    FiniteModule,
    ModuleError,
    RankOverflowError,
    Submodule,
    SubmoduleChain,
    ambient_element,
    annihilator,
    annihilator_census,
    cyclic_group,
    dependence_witness,
    direct_sum,
    free_separating_module,
    independent_point,
    is_semicyclic,
    quotient_by_ideal,
    quotient_module,
    support_constant_solver,
    verify_free_separation,
)
from supportcert.orders import (
    NotEuclideanError,
    eisenstein_integers,
    ideal_from_generators,
    integers,
    m_ideal,
    r_order,
    unit_lattice,
    z_tau,
)


def r_mod(n):
    r = r_order()
    return quotient_module(unit_lattice(r).scale(n), unit_lattice(r))


def named_ideals():
    r = r_order()
    return {
        "(1)": unit_lattice(r),
        "(2)": ideal_from_generators(r, [r.one() * 2]),
        "m": m_ideal(),
    }


def test_quotients():
    q = r_mod(2)
    assert q.invariants == (2, 2, 2) and len(q) == 8
    rm = quotient_by_ideal(m_ideal())
    assert rm.invariants == (2,)
    assert all(a == Matrix([[0]]) for a in rm.actions[1:])
    assert r_mod(4).invariants == (4, 4, 4) and len(r_mod(4)) == 64


def test_quotient_requires_containment():
    r = r_order()
    with pytest.raises(ModuleError):
        quotient_module(unit_lattice(r), m_ideal())


def test_module_axioms_rejected():
    r = r_order()
    with pytest.raises(ModuleError):
        FiniteModule(r, [2], [Matrix([[1]]), Matrix([[1]]), Matrix([[0]])])
    with pytest.raises(ModuleError):
        FiniteModule(r, [2, 3], [Matrix.identity(2)] * 3)


def test_actions_reproduce_structure_constants():
    for m in small_modules().values():
        m.check_axioms()


def test_annihilator_of_zero_is_unit_ideal():
    q = r_mod(2)
    assert annihilator(q.zero()) == unit_lattice(r_order())


def test_annihilators_are_ideals():
    for x in r_mod(2).elements():
        ann = annihilator(x)
        assert ann.closed_under_owner()
        assert all(x.act(a).is_zero() for a in ann.basis_vectors())


def test_r2r_census_matches_ring_oracle():
    r = r_order()
    census = annihilator_census(r_mod(2), named_ideals())
    oracle = ring_mod2_annihilator_census(
        r,
        {"(1)": [r.one().coords], "(2)": [(2, 0, 0)], "m": [(2, 0, 0), r.gen(1).coords, r.gen(2).coords]},
    )
    assert census == oracle
    assert census["other"] == 0
    # 0 -> (1); the four units 1 + m/2R -> (2); the rest of m/2R -> m
    assert census == {"(1)": 1, "(2)": 4, "m": 3, "other": 0}


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_annihilator_of_lift(t):
    r = r_order()
    big = r_mod(2**t)
    t1 = ambient_element(big, r.one().coords)
    assert t1.order == 2**t
    assert annihilator((2 ** (t - 1)) * t1) == ideal_from_generators(r, [r.one() * 2])
    assert annihilator(t1) == ideal_from_generators(r, [r.one() * 2**t])


def r_multiples(x):
    """Every r * x for r in R, using residues mod 2 (enough for 2-torsion)."""
    return {x.act(c).coords for c in itertools.product(range(2), repeat=3)}


def test_semicyclic_examples():
    assert is_semicyclic(cyclic_group(4)) == (True, None)
    assert is_semicyclic(quotient_by_ideal(m_ideal()))[0]
    q = r_mod(2)
    s = direct_sum(q, q)
    ok, (t1, t2) = is_semicyclic(s)
    assert not ok
    assert t2.order % t1.order == 0
    assert t1.coords not in r_multiples(t2)
    # the obvious pair (1, 0), (0, 1) also violates the definition
    one = q.from_presentation_coords((1, 0, 0)).coords
    zero = (0, 0, 0)
    a = s.from_presentation_coords(one + zero)
    b = s.from_presentation_coords(zero + one)
    assert a.coords not in r_multiples(b)


def test_semicyclic_size_guard(monkeypatch):
    import supportcert.modules as md

    monkeypatch.setattr(md, "SEMICYCLIC_LIMIT", 4)
    with pytest.raises(ModuleError):
        md.is_semicyclic(r_mod(2))


def test_cyclic_groups_semicyclic():
    for n in range(2, 40):
        assert is_semicyclic(cyclic_group(n))[0]


def test_semicyclic_matches_definition():
    for name, m in small_modules().items():
        ours, witness = is_semicyclic(m)
        ref, _ = semicyclic_by_definition(m)
        assert ours == ref, name
        if witness:
            t1, t2 = witness
            assert t2.order % t1.order == 0


@pytest.mark.parametrize("t", range(6))
def test_support_constant(t):
    sol = support_constant_solver(t)
    assert sol.c == 2 ** (t + 1)
    assert sol.check()


@pytest.mark.parametrize("t", range(4))
def test_support_constant_residue_oracle(t):
    assert support_constant_by_residues(r_order(), t, 2 ** (t + 2)) == support_constant_solver(t).c


def test_support_constant_guard():
    with pytest.raises(ModuleError):
        support_constant_solver(13)
    with pytest.raises(ModuleError):
        support_constant_solver(-1)


def test_independent_point_examples():
    z = integers()
    empty = Submodule(z, 2, [])
    assert independent_point(empty, (1, 0))
    m = Submodule(z, 2, [(1, 1)])
    assert not independent_point(m, (2, 2))
    assert independent_point(m, (1, 0))
    alpha = dependence_witness(m, (3, 3))
    assert alpha is not None and not alpha.is_zero()


def test_dependence_witness_is_verified():
    z = integers()
    m = Submodule(z, 2, [(2, 4)])
    alpha = dependence_witness(m, (1, 2))
    assert alpha.coords == (2,)
    assert m.contains((2, 4))
    assert dependence_witness(m, (1, 0)) is None


def test_independent_point_basis_vectors():
    # n generators in O^(n+1): some standard basis vector is independent
    rng = seeded(4)
    for owner in (integers(), eisenstein_integers(), r_order()):
        n = owner.rank
        for size in (1, 2, 3):
            k = size + 1
            gens = [tuple(rng.randint(-3, 3) for _ in range(k * n)) for _ in range(size)]
            m = Submodule(owner, k, gens)
            basis = [tuple(int(i == c * n) for i in range(k * n)) for c in range(k)]
            assert any(independent_point(m, e) for e in basis)
            for e in basis:
                if not independent_point(m, e):
                    alpha = dependence_witness(m, e)
                    assert not alpha.is_zero()


def test_free_separation_trivial():
    z = integers()
    chain = SubmoduleChain(Submodule(z, 3, []), Submodule(z, 3, []))
    sep = free_separating_module(chain)
    assert sep.free_basis == []
    assert verify_free_separation(chain, sep)["intersection_is_inner"]


def test_free_separation_over_z():
    z = integers()
    chain = SubmoduleChain(Submodule(z, 3, [(2, 0, 0)]), Submodule(z, 3, [(1, 0, 0)]))
    sep = free_separating_module(chain)
    report = verify_free_separation(chain, sep)
    assert all(report[k] for k in ("free", "contains_inner", "intersection_is_inner"))
    assert sep.free.zlattice() == Matrix([[2, 0, 0]])


def test_free_separation_eisenstein_prime():
    e = eisenstein_integers()
    # p = (1 - zeta_3); in the basis 1, (1 + sqrt(-3))/2 we have zeta_3 = -1 + b1
    zeta = (-1, 1)
    p = e.element((2, -1))
    assert e.element(zeta) * e.element(zeta) * e.element(zeta) == e.one()
    gens = [p.coords + (0,) * 6]
    chain = SubmoduleChain(Submodule(e, 4, gens), Submodule(e, 4, [(1, 0) + (0,) * 6]))
    sep = free_separating_module(chain)
    report = verify_free_separation(chain, sep)
    assert report["rank"] == 1
    assert all(report[k] for k in ("free", "contains_inner", "intersection_is_inner"))


def test_free_separation_with_relations():
    z = integers()
    # M generated by (2,0), (3,0) in Z^3: one relation, so one fresh point
    inner = Submodule(z, 3, [(2, 0, 0), (3, 0, 0)])
    outer = Submodule(z, 3, [(1, 0, 0), (0, 1, 0)])
    chain = SubmoduleChain(inner, outer)
    sep = free_separating_module(chain)
    assert len(sep.relations) == 1 and len(sep.fresh) == 1
    report = verify_free_separation(chain, sep)
    assert all(report[k] for k in ("free", "contains_inner", "intersection_is_inner"))


def test_free_separation_randomized():
    rng = seeded(21)
    for owner in (integers(), eisenstein_integers()):
        for _ in range(15):
            chain = random_chain(owner, rng)
            sep = free_separating_module(chain)
            report = verify_free_separation(chain, sep)
            assert all(report[k] for k in ("free", "contains_inner", "intersection_is_inner"))


def test_free_separation_needs_euclidean_owner():
    o = z_tau()
    chain = SubmoduleChain(Submodule(o, 2, [(1, 0, 0, 0, 0, 0)]), Submodule(o, 2, [(1, 0, 0, 0, 0, 0)]))
    with pytest.raises(NotEuclideanError):
        free_separating_module(chain)


def test_free_separation_rank_overflow():
    z = integers()
    inner = Submodule(z, 1, [(2,), (3,)])
    chain = SubmoduleChain(inner, Submodule(z, 1, [(1,)]))
    with pytest.raises(RankOverflowError):
        free_separating_module(chain)


def test_chain_requires_containment():
    z = integers()
    with pytest.raises(ModuleError):
        SubmoduleChain(Submodule(z, 2, [(1, 0)]), Submodule(z, 2, [(2, 0)]))


def test_submodule_validation():
    z = integers()
    with pytest.raises(ModuleError):
        Submodule(z, 2, [(1, 0, 0)])
    with pytest.raises(ModuleError):
        Submodule(z, 2, [(Fraction(1, 2), 0)])
