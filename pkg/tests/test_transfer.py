import pytest

from gen_random import random_dga
from massey_oracle import (in_massey_coset, massey_admissible,
                           triple_massey_coset)

from ainfty.ainf import (check_strict_unitality,
                         check_strict_unitality_morphism)
from ainfty.dga import (cohomology_ring, kodaira_thurston_model,
                        make_cpn_cohomology, make_free_graded_commutative_dga,
                        make_torus_cohomology)
from ainfty.graded import GradedLinearMap, GradedSpace, MalformedInput, Vector
from ainfty.transfer import (kadeishvili_transfer, strictly_unital_transfer,
                             vanishing_profile, verify_transfer)


def test_transfer_of_formal_algebra_has_no_higher_ops():
    t4 = make_torus_cohomology(4)
    T = kadeishvili_transfer(t4, p_max=5)
    assert T.structure.op(1).is_zero()
    for p in range(3, 6):
        assert T.structure.op(p).is_zero()
    assert all(T.morphism.f(p).is_zero() for p in range(2, 6))
    assert verify_transfer(T).ok


def test_transfer_cpn_is_itself():
    cp2 = make_cpn_cohomology(2)
    T = kadeishvili_transfer(cp2, p_max=5)
    assert [T.structure.space.dim(k) for k in range(5)] == [1, 0, 1, 0, 1]
    assert all(T.structure.op(p).is_zero() for p in range(3, 6))


def test_transfer_m2_matches_cohomology_ring():
    kt = kodaira_thurston_model()
    T = kadeishvili_transfer(kt, p_max=4)
    H = cohomology_ring(kt, splitting=T.splitting)
    assert T.structure.op(2).table == H.ring.product.table


def test_kodaira_thurston_m3_frozen_value():
    # hand computation: f2([e1],[e2]) = -e4, f2([e2],[e1]) = e4, and
    # F3([e1],[e2],[e1]) = -2 e1 e4, a non-exact cocycle
    kt = kodaira_thurston_model()
    T = kadeishvili_transfer(kt, p_max=4)
    val = T.structure.op(3).get(("[e1]", "[e2]", "[e1]"))
    assert val == Vector.basis("[e1*e4]", -2)
    assert verify_transfer(T).ok


def test_kodaira_thurston_m3_in_massey_coset():
    kt = kodaira_thurston_model()
    T = kadeishvili_transfer(kt, p_max=4)
    H = cohomology_ring(kt, splitting=T.splitting)
    X = Vector.basis("[e1]")
    Y = Vector.basis("[e2]")
    assert massey_admissible(H, X, Y, X)
    base, indet = triple_massey_coset(kt, H, X, Y, X)
    val = T.structure.op(3).get(("[e1]", "[e2]", "[e1]"))
    assert in_massey_coset(H, val, base, indet)


def test_transfer_verification_passes_on_random_dgas():
    for seed in range(8):
        dga = random_dga(seed)
        T = kadeishvili_transfer(dga, p_max=4)
        rep = verify_transfer(T)
        assert rep.ok, f"seed {seed}:\n{rep.summary()}"


def test_massey_oracle_agreement_sample():
    hits = 0
    for seed in range(10):
        dga = random_dga(seed)
        T = strictly_unital_transfer(dga, p_max=4)
        H = cohomology_ring(dga, splitting=T.splitting)
        m3 = T.structure.op(3)
        labels = H.ring.space.labels()
        for x in labels:
            for y in labels:
                for z in labels:
                    X, Y, Z = (Vector.basis(l) for l in (x, y, z))
                    if not massey_admissible(H, X, Y, Z):
                        continue
                    base, indet = triple_massey_coset(dga, H, X, Y, Z)
                    assert in_massey_coset(H, m3.get((x, y, z)), base, indet), \
                        (seed, x, y, z)
                    hits += 1
    assert hits > 50


def test_strictly_unital_transfer_kodaira_thurston():
    kt = kodaira_thurston_model()
    T = strictly_unital_transfer(kt, p_max=5)
    assert T.structure.unit == "[1]"
    assert check_strict_unitality(T.structure).ok
    assert check_strict_unitality_morphism(T.morphism).ok
    assert verify_transfer(T).ok          # stasheff + morphism to arity 5


def test_tuple_budget_guard():
    from ainfty.graded import BudgetExceeded
    kt = kodaira_thurston_model()
    with pytest.raises(BudgetExceeded):
        kadeishvili_transfer(kt, p_max=4, tuple_budget=1)


def test_strictly_unital_transfer_rejects_exact_unit():
    # complex with A^{-1} != 0 and d(u) = 1: the unit is exact
    space = GradedSpace([("u", -1), ("1", 0)])
    from ainfty.graded import MultiLinearMap
    d = GradedLinearMap(space, space, 1, {"u": Vector.basis("1")})
    prod = MultiLinearMap(space, space, 2, 0)
    prod.set(("1", "1"), Vector.basis("1"))
    prod.set(("1", "u"), Vector.basis("u"))
    prod.set(("u", "1"), Vector.basis("u"))
    from ainfty.dga import Dga
    A = Dga(space=space, d=d, product=prod, unit="1")
    with pytest.raises(MalformedInput):
        strictly_unital_transfer(A, p_max=3)


def test_vanishing_profile_sphere_like():
    # exterior algebra on one degree-7 generator: classes in degrees 0 and 7
    s7 = make_free_graded_commutative_dga([("x", 7)], {})
    T = strictly_unital_transfer(s7, p_max=4)
    cert = vanishing_profile(T)
    assert cert.connectivity == 6
    assert cert.certified_from == 3
    assert all(row["degree_forced"] for row in cert.per_arity.values())


def test_vanishing_profile_kodaira_thurston_no_forcing():
    kt = kodaira_thurston_model()
    T = strictly_unital_transfer(kt, p_max=4)
    cert = vanishing_profile(T)
    assert cert.connectivity == 0
    assert cert.degree_forced_from is None
    assert cert.certified_from is None
    assert all("degree_forced" not in row for row in cert.per_arity.values())
