import pytest

from massey_oracle import in_massey_coset, massey_admissible, triple_massey_coset

from ainfty.dga import (check_dga_axioms, cohomology_ring,
                        kodaira_thurston_model, make_cpn_cohomology,
                        make_torus_cohomology)
from ainfty.extension import (cpn_formality_witness, extend_dga,
                              extension_morphism,
                              formal_extension_minimal_model,
                              torus_nonformality_witness)
from ainfty.graded import (GradedLinearMap, InvalidWitness, MalformedInput,
                           Vector, compute_splitting)
from ainfty.transfer import strictly_unital_transfer


def torus_omega(A, n):
    w = Vector.zero()
    for j in range(1, n + 1):
        w = w + A.mul(Vector.basis(f"e{2*j-1}"), Vector.basis(f"e{2*j}"))
    return w


def test_extend_cp1():
    cp1 = make_cpn_cohomology(1)
    ext = extend_dga(cp1, Vector.basis("w"))
    assert sorted(ext.dga.space.labels()) == sorted(["1", "w", "theta*1", "theta*w"])
    assert ext.theta_degree == 1
    s = compute_splitting(ext.dga.space, ext.dga.d)
    assert s.betti() == {0: 1, 3: 1}
    # d theta = omega, so Q recovers theta from [omega]
    from ainfty.graded import apply_homotopy_Q
    assert apply_homotopy_Q(s, Vector.basis("w")) == Vector.basis("theta*1")


def test_extend_with_zero_omega():
    cp1 = make_cpn_cohomology(1)
    ext = extend_dga(cp1, Vector.zero(), theta_degree=1)
    assert ext.dga.d.is_zero()
    assert check_dga_axioms(ext.dga).ok


def test_extend_torus_axioms():
    t4 = make_torus_cohomology(4)
    ext = extend_dga(t4, torus_omega(t4, 2))
    assert ext.dga.space.total_dim() == 32
    assert check_dga_axioms(ext.dga).ok


def test_extend_rejects_bad_omega():
    t4 = make_torus_cohomology(4)
    with pytest.raises(MalformedInput):
        extend_dga(t4, Vector.basis("e1"))          # odd degree
    kt = kodaira_thurston_model()
    with pytest.raises(MalformedInput):
        extend_dga(kt, Vector({"e3*e4": 1}))        # not closed


def test_extension_morphism_identity():
    t4 = make_torus_cohomology(4)
    w = torus_omega(t4, 2)
    ext = extend_dga(t4, w)
    f = GradedLinearMap.identity(t4.space)
    g, rep = extension_morphism(f, ext, ext, Vector.zero())
    assert rep.ok
    for l in ext.dga.space.labels():
        assert g.apply_label(l) == Vector.basis(l)


def test_extension_morphism_with_correction_term():
    # target omega differs by an exact term; r reconciles them
    kt = kodaira_thurston_model()
    w = Vector({"e1*e3": 1, "e2*e4": 1})
    assert kt.d.apply(w).is_zero()
    w2 = w + kt.d.apply(Vector.basis("e4"))
    ext_a = extend_dga(kt, w)
    ext_b = extend_dga(kt, w2)
    f = GradedLinearMap.identity(kt.space)
    g, rep = extension_morphism(f, ext_a, ext_b, Vector.basis("e4"))
    assert rep.ok
    with pytest.raises(InvalidWitness):
        extension_morphism(f, ext_a, ext_b, Vector.zero())


def test_extension_morphism_rejects_non_quasi_iso():
    kt = kodaira_thurston_model()
    H = cohomology_ring(kt)
    w = Vector({"e1*e3": 1, "e2*e4": 1})
    ext_a = extend_dga(kt, w)
    wH = H.projection.apply(w)
    ext_b = extend_dga(H.ring, wH)
    # the class projection is a chain map but not multiplicative on KT
    with pytest.raises(MalformedInput):
        extension_morphism(H.projection, ext_a, ext_b, Vector.zero())
    # the zero map is a dga homomorphism (non-unital sense) but fails by rank
    zero = GradedLinearMap(kt.space, H.ring.space, 0)
    with pytest.raises(MalformedInput):
        extension_morphism(zero, ext_a, ext_b, Vector.zero())


def test_formal_extension_requires_zero_differential():
    kt = kodaira_thurston_model()
    with pytest.raises(MalformedInput):
        formal_extension_minimal_model(kt, Vector({"e1*e3": 1, "e2*e4": 1}))


def test_formal_extension_zero_omega_is_formal():
    t4 = make_torus_cohomology(4)
    model = formal_extension_minimal_model(t4, Vector.zero(), p_max=5,
                                           theta_degree=1)
    assert model.structure.op(3).is_zero()
    assert model.morphism.f(2).is_zero()
    assert model.report.ok


def test_cpn_extension_formality():
    for n in (1, 2, 3):
        wit = cpn_formality_witness(n, p_max=6)
        assert wit.h_dims == {0: 1, 2 * n + 1: 1}
        assert wit.higher_ops_zero
        assert wit.certificate.certified_from == 3


def test_torus_witness_n2():
    wit = torus_nonformality_witness(2, p_max=5)
    assert wit.m2_value.is_zero()
    assert wit.nonzero
    assert wit.scalar is not None and wit.scalar != 0
    assert wit.m3_value == wit.expected_direction.scale(wit.scalar)
    assert wit.model.report.ok


def test_torus_witness_rejects_n1():
    with pytest.raises(MalformedInput):
        torus_nonformality_witness(1)


def test_formal_extension_cross_check_with_generic_transfer():
    t4 = make_torus_cohomology(4)
    w = torus_omega(t4, 2)
    model = formal_extension_minimal_model(t4, w, p_max=4)
    ext = model.extension
    generic = strictly_unital_transfer(ext.dga, p_max=4)
    Hgen = cohomology_ring(ext.dga, splitting=generic.splitting)

    # base change: formal model classes -> generic classes
    def t(vec):
        return generic.projection.apply(model.morphism.f(1).eval_vectors([vec]))

    Hf = model.structure.space
    # t is injective degree-wise since both sides have equal dimensions
    for k in Hf.degrees():
        assert Hf.dim(k) == generic.structure.space.dim(k)

    m2f = model.structure.op(2)
    m2g = generic.structure.op(2)
    for x in Hf.labels():
        for y in Hf.labels():
            lhs = t(m2f.get((x, y)))
            rhs = m2g.eval_vectors([t(Vector.basis(x)), t(Vector.basis(y))])
            assert lhs == rhs, (x, y)

    # m3 agreement up to Massey indeterminacy on admissible triples
    m3f = model.structure.op(3)
    m3g = generic.structure.op(3)
    checked = 0
    for (x, y, z) in list(m3f.table)[:40]:
        X, Y, Z = (t(Vector.basis(l)) for l in (x, y, z))
        if not massey_admissible(Hgen, X, Y, Z):
            continue
        base, indet = triple_massey_coset(ext.dga, Hgen, X, Y, Z)
        assert in_massey_coset(Hgen, t(m3f.get((x, y, z))), base, indet)
        assert in_massey_coset(Hgen, m3g.eval_vectors([X, Y, Z]), base, indet)
        checked += 1
    assert checked > 0
