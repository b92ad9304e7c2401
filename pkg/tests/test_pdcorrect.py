import pytest

from pd_instances import s3s3_input, synthetic_cyclic_pd

from ainfty.ainf import (check_morphism, check_strict_unitality,
                         check_strict_unitality_morphism)
from ainfty.graded import MalformedInput
from ainfty.pdcorrect import CyclicPDInput, build_delta, pd_correct


def test_s3s3_identity_correction():
    inp = s3s3_input(p_max=6)
    out = pd_correct(inp)
    assert out.report.ok, out.report.summary()
    assert out.delta_lm1.is_zero() and out.delta_l.is_zero()
    for p, m in inp.pd.structure.ops.items():
        assert out.structure.op(p).table == m.table
    for p, f in inp.morphism.maps.items():
        assert out.morphism.f(p).table == f.table


def test_s3s3_with_acyclic_summand():
    inp = s3s3_input(p_max=5, glue_acyclic=True)
    out = pd_correct(inp)
    assert out.report.ok, out.report.summary()


def test_build_delta_zero_when_b_vanishes():
    inp = s3s3_input(p_max=5)
    b3 = inp.pd.structure.b_op(3)
    assert b3.is_zero()
    delta = build_delta(inp.pd, b3, 2, inp.morphism.f(1), inp.source.space)
    assert delta.is_zero()


def test_build_delta_weights_l3():
    # a single nonzero b_3 entry contributes with weights (3-j)/3 over its orbit
    inp = synthetic_cyclic_pd(0)
    pd = inp.pd
    b3 = pd.structure.b_op(3)
    key = next(iter(b3.sorted_keys()))
    delta = build_delta(pd, b3, 2, inp.morphism.f(1), inp.source.space)
    # delta's coefficients are rational combinations of thirds
    for _, v in delta.table.items():
        for _, c in v.items():
            assert (3 * c).denominator in (1, 2)   # pool has halves
    assert not delta.is_zero()


def test_synthetic_instances_corrected():
    for seed in range(5):
        inp = synthetic_cyclic_pd(seed)
        assert not inp.pd.structure.op(3).is_zero()
        out = pd_correct(inp)
        assert out.report.ok, f"seed {seed}:\n{out.report.summary()}"
        # m''_p = 0 for p >= 3 up to p_max
        for p in range(3, inp.p_max + 1):
            assert out.structure.op(p).is_zero()
        # prefix reproduced, morphism and unitality verified
        assert out.structure.op(2).table == inp.pd.structure.op(2).table
        assert check_morphism(out.morphism, 5).ok
        assert check_strict_unitality(out.structure).ok
        assert check_strict_unitality_morphism(out.morphism).ok
        assert out.certificate.certified_from is not None
        assert out.certificate.certified_from <= 5


def test_refuses_broken_cyclicity():
    inp = synthetic_cyclic_pd(1)
    pd = inp.pd
    # corrupt one b_3 entry so the cyclic sums fail
    space = pd.structure.space
    m3 = pd.structure.op(3).copy()
    key = next(iter(m3.sorted_keys()))
    m3.set(key, m3.get(key).scale(3))
    from ainfty.ainf import AInfStructure, make_pd_structure
    bad_struct = AInfStructure(space=space,
                               ops={2: pd.structure.op(2), 3: m3},
                               p_max=inp.p_max, unit="1")
    bad_pd = make_pd_structure(bad_struct, mu="mu", connectivity=2)
    bad = CyclicPDInput(pd=bad_pd, source=bad_struct,
                        morphism=inp.morphism, splitting=inp.splitting,
                        connectivity=2, target_arity=3, p_max=inp.p_max)
    with pytest.raises(MalformedInput):
        pd_correct(bad)


def test_refuses_bad_dimension_bound():
    inp = synthetic_cyclic_pd(0)
    bad = CyclicPDInput(pd=inp.pd, source=inp.source, morphism=inp.morphism,
                        splitting=inp.splitting, connectivity=1,
                        target_arity=3, p_max=inp.p_max)
    with pytest.raises(MalformedInput):
        pd_correct(bad)
