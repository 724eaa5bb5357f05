import itertools
import random
from fractions import Fraction

import pytest
from oracles import semigroup_bruteforce, witness_bound

from toric_endo.builtin import builtin_fan, hirzebruch, product_of_lines, projective_space
from toric_endo.compositions import unit
from toric_endo.errors import DegreeTooSmall, HypothesisUnmet, InputError
from toric_endo.fiber import FiberPoly, random_fiber_poly
from toric_endo.laurent import LaurentPoly, base_names
from toric_endo.obstruction import (
    CompatInstance,
    certify_variety,
    compat_targets,
    cotangent_certificate,
    sigma_names,
    tangent_certificate,
    verify_compat,
    verify_compat_cotangent,
    verify_compat_tangent,
)
from toric_endo.transition import COTANGENT, TANGENT, cotangent_jacobian, sym_action, tangent_jacobian


def nonzero_walls(n, bound=2):
    return [a for a in itertools.product(range(-bound, bound + 1), repeat=n - 1) if any(a)]


# -- compatibility conditions ----------------------------------------------------


def test_compat_trivial_wall_examples():
    names = base_names(2)
    for d in (1, 2, 3):
        f = [FiberPoly.monomial(names, (d, 0), LaurentPoly.one(names)),
             FiberPoly.monomial(names, (0, d), LaurentPoly.one(names))]
        g = compat_targets(TANGENT, (0,), f)
        u = sigma_names(2)
        assert g[0] == FiberPoly.monomial(u, (d, 0), LaurentPoly.one(u))
        assert g[1] == FiberPoly.monomial(u, (0, d), LaurentPoly.monomial(u, (0, 0), -(-1) ** d))
        assert verify_compat_tangent(CompatInstance((0,), d, f, g, TANGENT)).passed


def test_compat_identity_is_consistent():
    names = base_names(2)
    f = [FiberPoly.parse("z1", names, 2), FiberPoly.parse("z2", names, 2)]
    u = sigma_names(2)
    g = [FiberPoly.parse("z1", u, 2), FiberPoly.parse("z2", u, 2)]
    assert verify_compat_tangent(CompatInstance((0,), 1, f, g, TANGENT)).passed


@pytest.mark.parametrize("kind", [TANGENT, COTANGENT])
def test_compat_tautology_and_perturbation(kind):
    rng = random.Random(0)
    for n in (2, 3):
        names = base_names(n)
        for _ in range(6):
            a = tuple(rng.randint(-2, 2) for _ in range(n - 1))
            d = rng.randint(1, 3)
            f = [random_fiber_poly(rng, names, n, d) for _ in range(n)]
            g = compat_targets(kind, a, f)
            inst = CompatInstance(a, d, f, g, kind)
            report = verify_compat(inst)
            assert report.passed and not any(r for r in report.residuals)
            # Perturb a single coefficient of one g component.
            k = rng.randrange(n)
            lam = rng.choice(sorted(g[k].coeffs()) or [unit(n, 0, d)])
            bump = FiberPoly.monomial(sigma_names(n), lam, LaurentPoly.one(sigma_names(n)))
            bad = list(g)
            bad[k] = bad[k] + bump
            assert not verify_compat(CompatInstance(a, d, f, bad, kind)).passed


def test_compat_kind_mismatch():
    names = base_names(2)
    f = [FiberPoly.parse("z1", names, 2), FiberPoly.parse("z2", names, 2)]
    g = compat_targets(COTANGENT, (1,), f)
    inst = CompatInstance((1,), 1, f, g, COTANGENT)
    assert verify_compat_cotangent(inst).passed
    with pytest.raises(InputError):
        verify_compat_tangent(inst)


def test_compat_json_round_trip():
    names = base_names(2)
    f = [FiberPoly.parse("x1*z1^2", names, 2), FiberPoly.parse("z2^2 + z1*z2", names, 2)]
    inst = CompatInstance((-1,), 2, f, compat_targets(TANGENT, (-1,), f), TANGENT)
    again = CompatInstance.from_json(inst.to_json())
    assert again == inst
    derived = CompatInstance.from_json({k: v for k, v in inst.to_json().items() if k != "g"})
    assert derived == inst


def test_frobenius_fibers_are_irregular_across_p2_wall():
    # The fiberwise Frobenius does not extend: g has negative powers of the chart variables.
    names = base_names(2)
    f = [FiberPoly.parse("z1^2", names, 2), FiberPoly.parse("z2^2", names, 2)]
    g = compat_targets(TANGENT, (1,), f)
    report = verify_compat(CompatInstance((1,), 2, f, g, TANGENT))
    assert report.passed and not all(report.g_regular)


# -- certificates ----------------------------------------------------------------


def test_tangent_certificate_examples():
    cert = tangent_certificate((1,), 2)
    assert cert.valid and cert.verdict == "valid"
    assert {c.case for c in cert.checks} == {"T2", "T4"}
    t4 = next(c for c in cert.checks if c.case == "T4")
    assert t4.monomial == (1, 0) and t4.coefficient == 2 and not t4.in_ring
    assert tangent_certificate((-1,), 2).valid
    for d in (2, 3, 4):
        with pytest.raises(HypothesisUnmet):
            tangent_certificate((0,), d)
        with pytest.raises(HypothesisUnmet):
            tangent_certificate((0, 0), d)
    with pytest.raises(DegreeTooSmall):
        tangent_certificate((1,), 1)


def test_cotangent_certificate_examples():
    assert cotangent_certificate((-2,), 2).valid
    for d in (2, 3):
        with pytest.raises(HypothesisUnmet):
            cotangent_certificate((1,), d)
    with pytest.raises(DegreeTooSmall):
        cotangent_certificate((-1,), 1)


def test_cotangent_zero_coefficient_is_reported_invalid():
    # With a_2 = 0 the C1 coefficient a^{lambda°} vanishes whenever lambda_2 > 0.
    cert = cotangent_certificate((-1, 0), 3)
    assert not cert.valid
    assert all(c.coefficient == 0 for c in cert.failures)
    assert "zero coefficient" in cert.reason
    assert cotangent_certificate((-1, 2), 3).valid


def test_certify_variety_examples():
    assert certify_variety(projective_space(2), TANGENT, 2).verdict == "valid"
    assert certify_variety(builtin_fan("p1xp1"), TANGENT, 3).verdict == "no_applicable_wall"
    assert certify_variety(product_of_lines(3), TANGENT, 2).verdict == "no_applicable_wall"
    report = certify_variety(hirzebruch(1), COTANGENT, 3)
    assert report.verdict == "valid"
    assert report.certificate.a == (-1,)
    p2_cot = certify_variety(projective_space(2), COTANGENT, 2)
    assert p2_cot.verdict == "no_applicable_wall"
    with pytest.raises(DegreeTooSmall):
        certify_variety(projective_space(2), TANGENT, 1)


def test_certify_grid():
    for d in (2, 3, 4):
        assert certify_variety(projective_space(2), TANGENT, d).verdict == "valid"
    for n in (1, 2, 3):
        for d in (2, 3):
            assert certify_variety(hirzebruch(n), TANGENT, d).verdict == "valid"
            assert certify_variety(hirzebruch(n), COTANGENT, d).verdict == "valid"


def test_certificates_in_original_indexing():
    cert = tangent_certificate((2, -1), 2)
    assert cert.permutation == (1, 0)
    assert cert.k == 2
    for c in cert.checks:
        if c.case in ("T1", "T3"):
            # Only the nonpositive direction (original index 2) and y may carry lambda.
            assert c.lam[0] == 0


def _tangent_rederive(a, d, check):
    n = len(a) + 1
    names = base_names(n)
    image = sym_action(tangent_jacobian(a), FiberPoly.monomial(names, check.lam, LaurentPoly.one(names)))
    coeff = image.extract_coeff(check.eta)
    assert len(coeff) == 1
    ((m, c),) = coeff.items()
    m = list(m)
    if check.case == "T1":
        m[-1] += d * a[check.j - 1]
    elif check.case == "T2":
        m[check.j - 1] += d
        m[-1] += d
    else:
        m[-1] += 2 * d
    return tuple(m), c


def _cotangent_rederive(a, d, check):
    n = len(a) + 1
    names = base_names(n)
    j = check.j - 1
    image = sym_action(cotangent_jacobian(a), FiberPoly.monomial(names, check.lam, LaurentPoly.one(names)))
    if check.case == "C1":
        key = unit(n, n - 1, d)
    else:
        key = tuple(d - 1 if i == j else int(i == n - 1) for i in range(n))
    coeff = image.extract_coeff(key)
    if not coeff:
        return None, Fraction(0)
    ((m, c),) = coeff.items()
    m = list(m)
    m[-1] -= d * a[j]
    return tuple(m), c


def test_certificate_soundness_cross_check():
    for n in (2, 3):
        for d in (2, 3):
            for a in nonzero_walls(n):
                cert = tangent_certificate(a, d)
                for c in cert.checks:
                    if c.coefficient == 0:
                        continue
                    mono, coeff = _tangent_rederive(a, d, c)
                    assert mono == c.monomial, (a, d, c)
                    assert coeff == c.coefficient, (a, d, c)
                if min(a) < 0:
                    cot = cotangent_certificate(a, d)
                    for c in cot.checks:
                        mono, coeff = _cotangent_rederive(a, d, c)
                        assert coeff == c.coefficient, (a, d, c)
                        if coeff:
                            assert mono == c.monomial, (a, d, c)


def test_tangent_coefficient_values():
    for n in (2, 3):
        for d in (2, 3):
            for a in nonzero_walls(n):
                cert = tangent_certificate(a, d)
                ak = a[cert.k - 1]
                for c in cert.checks:
                    if c.case == "T4":
                        expected = (-1) ** d * d * ak
                    else:
                        expected = (-ak) ** c.lam[-1]
                    assert c.coefficient == expected != 0


def test_valid_certificate_monomials_fail_bruteforce_membership():
    seen = {}
    for n in (2, 3):
        for d in (2, 3):
            for a in nonzero_walls(n):
                certs = [tangent_certificate(a, d)]
                if min(a) < 0:
                    certs.append(cotangent_certificate(a, d))
                for cert in certs:
                    for c in cert.checks:
                        key = (c.monomial, a)
                        if key not in seen:
                            seen[key] = semigroup_bruteforce(c.monomial, a, witness_bound(c.monomial, a))
                        assert (seen[key] is None) == (not c.in_ring)


def test_certificate_validity_grid():
    # Tangent certificates are valid on every nonzero wall; cotangent ones whenever no a_i vanishes.
    for n in (2, 3):
        for d in (2, 3):
            for a in nonzero_walls(n):
                assert tangent_certificate(a, d).valid, a
                if min(a) < 0:
                    assert cotangent_certificate(a, d).valid == (0 not in a), a


def test_certificate_json_shape():
    cert = tangent_certificate((1,), 3)
    obj = cert.to_json()
    assert obj["verdict"] == "valid" and obj["kind"] == "tangent" and obj["d"] == 3
    assert all(set(c) >= {"case", "lambda", "j", "monomial", "coeff", "in_ring"} for c in obj["checks"])
    assert all(c["in_ring"] is False for c in obj["checks"])
