import json
import random
from fractions import Fraction

import pytest

from toric_endo.builtin import hirzebruch, product_of_lines, projective_space
from toric_endo.commonzero import COMMON_ZERO_FOUND, NO_COMMON_ZERO, RESULTANT, TRIANGULAR, verify_witness
from toric_endo.compositions import compositions
from toric_endo.errors import InputError, SectionNotInSpace
from toric_endo.fiber import FiberPoly
from toric_endo.laurent import LaurentPoly
from toric_endo.sections import SplitBundleSpec, ToricDivisor, h0, lattice_points, polytope_of
from toric_endo.split import (
    ADMISSIBLE,
    NO_BASED_MAP,
    TORSION_NAMES,
    BasedMapData,
    Cocycle,
    HirzebruchFamily,
    TorsionBundle,
    build_fiber_polys,
    classify,
    classify_p1n_tangent,
    fn_split_spec,
    frobenius_data,
    gluing_check,
    gluing_check_charts,
    hirzebruch_enumerate,
    no_common_zero,
    p1_split_spec,
    p1n_slot_divisor,
    pp2_family,
    pp2_spec,
    random_hirzebruch,
    torsion_example,
    wall_pairs,
)


def fn_frobenius(n, d):
    return frobenius_data(fn_split_spec(n, d))


# -- Frobenius and cocycles ---------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_frobenius_on_hirzebruch(n, d):
    data = fn_frobenius(n, d)
    fan = data.spec.base
    for chart in fan.max_cones:
        names = fan.chart_names(chart)
        f1, f2 = build_fiber_polys(data, chart)
        assert f1 == FiberPoly.monomial(names, (d, 0), LaurentPoly.one(names))
        assert f2 == FiberPoly.monomial(names, (0, d), LaurentPoly.one(names))
    report = classify(data)
    assert len(report.gluing.pairs) == 4
    assert report.gluing.passed and not report.out_of_space
    assert (report.common_zero.status, report.common_zero.method) == (NO_COMMON_ZERO, TRIANGULAR)
    assert report.passed


def test_frobenius_needs_q_equal_d():
    fan = projective_space(1)
    spec = SplitBundleSpec(fan, (ToricDivisor.zero(fan), ToricDivisor.zero(fan)), 1, 2)
    with pytest.raises(InputError):
        frobenius_data(spec)


def test_identity_map_passes():
    for n in (1, 2):
        report = classify(fn_frobenius(n, 1))
        assert report.passed


def test_cocycle_conditions_hold():
    for spec in (pp2_spec(), fn_split_spec(1, 2), fn_split_spec(3, 2), p1_split_spec(2, 3)):
        cocycle = Cocycle.from_split_bundle(spec)
        assert cocycle.failing_triples() == []
        for c in cocycle.charts:
            assert all(m == LaurentPoly.one(cocycle.names[c]) for m in cocycle.transitions[(c, c)])


def test_broken_cocycle_is_detected():
    cocycle = Cocycle.from_split_bundle(fn_split_spec(1, 2))
    i, j = cocycle.charts[:2]
    transitions = dict(cocycle.transitions)
    M = transitions[(j, i)]
    transitions[(j, i)] = (M[0], M[1].scale(2))
    broken = Cocycle(cocycle.charts, cocycle.names, transitions, cocycle.convert)
    assert broken.failing_triples()
    assert not broken.check_triple(j, i, i) or not broken.check_triple(i, j, i)


def test_wall_pairs_cover_each_wall_once():
    for fan in (projective_space(2), hirzebruch(2), product_of_lines(2)):
        pairs = wall_pairs(fan)
        assert len({frozenset(p) for p in pairs}) == len(pairs)


# -- failures ----------------------------------------------------------------------


def test_section_outside_its_space_is_irregular():
    data = fn_frobenius(1, 2)
    bad = dict(data.sections)
    bad[(1, (1, 1))] = {(7, 7): Fraction(1)}
    data = BasedMapData(data.spec, bad)
    assert data.out_of_space() == [(1, (1, 1), (7, 7))]
    report = classify(data)
    assert not report.passed
    assert report.gluing.irregular and report.common_zero is None
    raised = 0
    for chart in data.spec.base.max_cones:
        try:
            build_fiber_polys(data, chart)
        except SectionNotInSpace:
            raised += 1
    assert raised


def test_mismatched_chart_polys_fail_gluing():
    data = fn_frobenius(2, 2)
    fan = data.spec.base
    charts = {c: build_fiber_polys(data, c) for c in fan.max_cones}
    first = fan.max_cones[0]
    names = fan.chart_names(first)
    charts[first] = [charts[first][0] + FiberPoly.monomial(names, (1, 1), LaurentPoly.one(names)), charts[first][1]]
    report = gluing_check(data, chart_polys=charts)
    assert not report.passed
    assert any(p.discrepancies for p in report.pairs)
    assert all(d.ell == 1 for p in report.pairs for d in p.discrepancies)


def test_zero_sections_give_zero_forms():
    data = BasedMapData(fn_split_spec(1, 2), {})
    for chart in data.spec.base.max_cones:
        assert all(f.is_zero() for f in build_fiber_polys(data, chart))
    assert no_common_zero(data).status == COMMON_ZERO_FOUND


def test_json_round_trip():
    data = pp2_family(random.Random(0))
    text = json.dumps(data.to_json())
    again = BasedMapData.from_json(json.loads(text))
    assert again.sections == data.sections
    assert again.spec.to_json() == data.spec.to_json()
    with pytest.raises(InputError):
        BasedMapData.from_json({"sections": []})


# -- torsion -------------------------------------------------------------------------


def test_torsion_example():
    report = torsion_example()
    f1, f2 = report.polys
    assert f1 == FiberPoly.parse("z1^2 + z2^2", TORSION_NAMES, 2)
    assert f2 == FiberPoly.parse("z1*z2", TORSION_NAMES, 2)
    assert report.gluing.passed
    assert (report.common_zero.status, report.common_zero.method) == (NO_COMMON_ZERO, RESULTANT)
    assert report.passed


def test_torsion_rejects_sections_in_nontrivial_class():
    bundle = TorsionBundle()
    assert bundle.slot_class(1, (1, 1)) == 1
    assert bundle.slot_class(2, (2, 0)) == 1
    with pytest.raises(SectionNotInSpace):
        bundle.build({(1, (1, 1)): 1})
    with pytest.raises(SectionNotInSpace):
        bundle.build({(2, (0, 2)): 1})
    report = torsion_example(sections={(1, (2, 0)): 1, (1, (0, 2)): -3, (2, (1, 1)): 2})
    assert report.passed


def test_torsion_gluing_sees_the_sign():
    bundle = TorsionBundle()
    cocycle = bundle.cocycle()
    assert cocycle.failing_triples() == []
    polys = bundle.build({(1, (2, 0)): 1, (2, (1, 1)): 1})
    names = TORSION_NAMES
    wrong = [polys[0] + FiberPoly.monomial(names, (1, 1), LaurentPoly.one(names)), polys[1]]
    assert not gluing_check_charts({"U1": wrong, "U2": wrong}, cocycle, bundle.q).passed


# -- (P^1)^n ---------------------------------------------------------------------


def test_p1n_examples():
    v = classify_p1n_tangent(2, (2, 2))
    assert v.status == ADMISSIBLE and v.form == ("f1 = A1*z1^2", "f2 = A2*z2^2")
    assert classify_p1n_tangent(2, (2, 3)).status == NO_BASED_MAP
    assert classify_p1n_tangent(3, (2, 2, 2)).status == ADMISSIBLE
    assert classify_p1n_tangent(1, (3,)).status == ADMISSIBLE
    assert classify_p1n_tangent(2, (1, 3), d=3).status == NO_BASED_MAP
    with pytest.raises(InputError):
        classify_p1n_tangent(2, (2,))


def test_p1n_slot_dimensions():
    for n in (1, 2, 3):
        fan = product_of_lines(n)
        for degrees in ((1,) * n, (2,) * n, tuple(range(1, n + 1))):
            v = classify_p1n_tangent(n, degrees)
            for s in v.slots:
                assert s.allowed == (s.dim > 0)
                assert s.dim == h0(p1n_slot_divisor(fan, degrees, s.ell, s.lam))
                # Product of P^1 sections: prod_k (2 lam_k - 2 d_l [k = l] + 1)_+.
                expected = 1
                for k, v_k in enumerate(s.lam):
                    e = 2 * v_k - (2 * degrees[s.ell - 1] if k == s.ell - 1 else 0)
                    expected *= max(e + 1, 0)
                assert s.dim == expected


def test_p1n_admissible_only_diagonal_slots_are_constant():
    v = classify_p1n_tangent(2, (3, 3))
    for s in v.slots:
        if s.lam[s.ell - 1] == 3:
            assert s.dim == 1


# -- Hirzebruch ---------------------------------------------------------------------


def test_hirzebruch_enumeration():
    t = hirzebruch_enumerate(1, 2)
    assert [s.dim for s in t.slots] == [1, 2, 3, 1]
    assert t.sum_dim == 7
    for n in (1, 2, 3):
        for d in (1, 2, 3):
            t = hirzebruch_enumerate(n, d)
            assert t.sum_dim == sum(n * i + 1 for i in range(d + 1)) + 1
    with pytest.raises(InputError):
        hirzebruch_enumerate(0, 2)


def test_random_hirzebruch_accepted():
    rng = random.Random(0)
    for _ in range(20):
        fam = random_hirzebruch(rng, rng.randint(1, 3), rng.randint(1, 3))
        report = fam.verify()
        assert report.accepted, report.to_json()


def test_hirzebruch_zero_s0_rejected():
    rng = random.Random(1)
    for _ in range(5):
        fam = random_hirzebruch(rng, 2, 2, zero_s0=True)
        report = fam.verify()
        assert not report.accepted
        assert "s_0 = 0: both polynomials are divisible by z_2" in report.diagnostics
        verdict = report.common_zero
        assert verdict.status == COMMON_ZERO_FOUND
        w = verdict.witness
        polys = build_fiber_polys(fam.data(), w.chart)
        assert verify_witness(polys, w)
        # Every form vanishes at [1:0] over any base point.
        for f in polys:
            assert f.evaluate((Fraction(3),), (Fraction(1), Fraction(0))) == 0


def test_hirzebruch_fiber_image():
    spec = p1_split_spec(1, 2)
    s1 = {m: 1 for m in lattice_points(polytope_of(spec.slot_divisor(1, (1, 1))))}
    fam = HirzebruchFamily(1, 2, ({(0,): 2}, s1, {(0,): 1}), 5)
    fan = fam.data().spec.base
    # At t = 1 the charts agree and all transitions are 1.
    images = {fam.fiber_image(c, (Fraction(1),), (Fraction(1), Fraction(2))) for c in fan.max_cones}
    assert len(images) == 1
    for c in fan.max_cones:
        assert fam.fiber_image(c, (Fraction(4),), (Fraction(1), Fraction(0))) == (2, 0)
        assert fam.fiber_image(c, (Fraction(4),), (Fraction(0), Fraction(1)))[1] == 5


def test_hirzebruch_json_shape():
    t = hirzebruch_enumerate(2, 2).to_json()
    assert t["sum_dim"] == 1 + 3 + 5 + 1 and len(t["form"]) == 2


# -- P^2 ----------------------------------------------------------------------------


def test_pp2_family_is_based_map():
    for seed in range(3):
        data = pp2_family(random.Random(seed), constants=(1, -2, 3))
        report = classify(data)
        assert report.gluing.passed
        assert (report.common_zero.status, report.common_zero.method) == (NO_COMMON_ZERO, TRIANGULAR)


def test_pp2_zero_constant_fails():
    data = pp2_family(constants=(1, 0, 1))
    assert no_common_zero(data).status != NO_COMMON_ZERO


def test_pp2_forms_are_triangular():
    # f_l only involves z_l, ..., z_r, and carries a constant times z_l^2.
    data = pp2_family()
    chart = data.spec.base.max_cones[0]
    for ell, f in enumerate(build_fiber_polys(data, chart), start=1):
        for lam in f.coeffs():
            assert all(v == 0 for v in lam[: ell - 1])
        assert tuple(2 * int(k == ell - 1) for k in range(3)) in f.coeffs()
    assert set(compositions(2, 3)) >= {lam for f in build_fiber_polys(data, chart) for lam in f.coeffs()}
