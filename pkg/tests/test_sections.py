import random
from fractions import Fraction
from math import comb

import pytest
from oracles import box_points

from toric_endo.builtin import hirzebruch, product_of_lines, projective_space
from toric_endo.errors import DegreeMismatch, InputError, SectionNotInSpace, UnboundedPolytope
from toric_endo.sections import (
    SplitBundleSpec,
    ToricDivisor,
    family_dimension,
    h0,
    lattice_points,
    polytope_of,
    restrict_section,
    section_space,
)
from toric_endo.split import fn_split_spec, p1_split_spec, pp2_dimensions, pp2_spec


def O(fan, k):
    return ToricDivisor(fan, (k,) + (0,) * (len(fan.rays) - 1))


def test_p1_interval():
    p1 = projective_space(1)
    for k in range(6):
        assert lattice_points(polytope_of(O(p1, k))) == [(m,) for m in range(-k, 1)]
        assert lattice_points(polytope_of(ToricDivisor(p1, (0, k)))) == [(m,) for m in range(k + 1)]
    assert lattice_points(polytope_of(O(p1, -1))) == []
    assert polytope_of(O(p1, -1)).is_empty()


def test_p2_counts():
    p2 = projective_space(2)
    assert len(lattice_points(polytope_of(O(p2, 1)))) == 3
    assert h0(O(p2, 2)) == 6
    assert h0(O(p2, 8)) == 45


def test_h0_is_binomial():
    for n in (1, 2, 3):
        fan = projective_space(n)
        for k in range(11):
            assert h0(O(fan, k)) == comb(n + k, n)


def test_lattice_points_sorted_and_inside():
    fan = hirzebruch(2)
    D = ToricDivisor(fan, (1, 2, 0, 1))
    poly = polytope_of(D)
    pts = lattice_points(poly)
    assert pts == sorted(pts)
    assert all(poly.contains(m) for m in pts)
    normals = fan.rays
    assert pts == box_points(normals, D.ray_coeffs, 12)


def test_principal_divisor_invariance():
    rng = random.Random(0)
    for fan in (projective_space(2), hirzebruch(1), hirzebruch(3), product_of_lines(2)):
        for _ in range(10):
            D = ToricDivisor(fan, tuple(rng.randint(-1, 3) for _ in fan.rays))
            m = tuple(rng.randint(-3, 3) for _ in range(fan.rank))
            assert h0(D + ToricDivisor.principal(fan, m)) == h0(D)


def test_divisor_arithmetic():
    fan = hirzebruch(1)
    A = ToricDivisor(fan, (1, 0, 2, 0))
    B = ToricDivisor(fan, (0, 1, 0, 3))
    assert (A + B).ray_coeffs == (1, 1, 2, 3)
    assert (A - B).ray_coeffs == (1, -1, 2, -3)
    assert (2 * A).ray_coeffs == (2, 0, 4, 0)
    assert (-A).ray_coeffs == (-1, 0, -2, 0)
    with pytest.raises(InputError):
        ToricDivisor(fan, (1, 2))
    with pytest.raises(InputError):
        A + ToricDivisor(projective_space(3), (0, 0, 0, 0))


def test_unbounded_polytope_detected():
    # A fan that is complete in rank 1 but read with only one ray would be incomplete;
    # the boundedness check is exercised directly on an incomplete ray set.
    from toric_endo.sections import _check_bounded

    with pytest.raises(UnboundedPolytope):
        _check_bounded([(1, 0), (0, 1)], 2)


def test_fn_section_spaces():
    for n in (1, 2, 3):
        for d in (1, 2, 3):
            spec = fn_split_spec(n, d)
            for l2 in range(d + 1):
                lam = (d - l2, l2)
                assert len(lattice_points(section_space(spec, 1, lam))) == n * l2 + 1
                if l2 < d:
                    assert section_space(spec, 2, lam).is_empty()
                else:
                    assert len(lattice_points(section_space(spec, 2, lam))) == 1


def test_pp2_slot_dimension():
    spec = pp2_spec()
    assert len(lattice_points(section_space(spec, 2, (0, 1, 1)))) == 6


def test_pp2_family_dimension():
    dims = pp2_dimensions()
    assert tuple(dims.dims[k] for k in "abcdefg") == (15, 6, 45, 15, 28, 15, 6)
    assert dims.product == 45 * 28 * 15 ** 3 * 6 ** 2 == 153_090_000
    assert not dims.matches_reference


def test_family_dimension_examples():
    fan = projective_space(1)
    spec = SplitBundleSpec(fan, (O(fan, 0), O(fan, 0)), 0, 1)
    single = family_dimension(spec, [(1, (1, 0))])
    assert (single.sum_dim, single.product_of_dims) == (1, 1)
    hz = p1_split_spec(1, 2)
    fam = family_dimension(hz, [(1, (1, 1)), (1, (0, 2))])
    assert fam.sum_dim == 5


def test_constant_section_always_available():
    for fan in (projective_space(2), hirzebruch(2), product_of_lines(3)):
        L = O(fan, 3)
        spec = SplitBundleSpec(fan, (L, L, L), 0, 2)
        for ell in (1, 2, 3):
            lam = tuple(2 * int(k == ell - 1) for k in range(3))
            poly = section_space(spec, ell, lam)
            assert poly.contains((0,) * fan.rank)


def test_slot_divisor_validation():
    spec = fn_split_spec(1, 2)
    with pytest.raises(DegreeMismatch):
        spec.slot_divisor(1, (1, 2))
    with pytest.raises(InputError):
        spec.slot_divisor(3, (1, 1))
    with pytest.raises(InputError):
        SplitBundleSpec(spec.base, spec.line_bundles, -1, 2)


def test_restrict_section_to_charts():
    fan = projective_space(1)
    D = O(fan, 2)
    section = {(-2,): Fraction(1), (-1,): Fraction(2), (0,): Fraction(3)}
    on_0 = restrict_section(D, section, (0,))
    on_1 = restrict_section(D, section, (1,))
    assert sorted(e for e, _ in on_0.items()) == [(0,), (1,), (2,)]
    assert sorted(e for e, _ in on_1.items()) == [(0,), (1,), (2,)]
    assert on_0.evaluate((Fraction(1),)) == on_1.evaluate((Fraction(1),)) == 6
    with pytest.raises(SectionNotInSpace):
        restrict_section(D, {(1,): Fraction(1)}, (1,))
    loose = restrict_section(D, {(1,): Fraction(1)}, (1,), strict=False)
    assert min(e[0] for e, _ in loose.items()) < 0


def test_fan_mismatch_rejected():
    p1 = projective_space(1)
    with pytest.raises(InputError):
        SplitBundleSpec(p1, (O(projective_space(2), 0),), 1, 1)
