import itertools
import random

import pytest
from oracles import hand_wall_relation

from toric_endo import linalg
from toric_endo.builtin import builtin_fan, hirzebruch, product_of_lines, projective_space, resolve_fan
from toric_endo.errors import InputError, InvalidFan, NonSimplicialFan, NotToric
from toric_endo.lattice import (
    Fan,
    FrobeniusPower,
    LatticeEndo,
    NotFound,
    ProductDecomposition,
    check_wall_relation,
    dual_chart_coordinates,
    find_walls,
    frobenius_power_analysis,
    wall_relation,
)
from toric_endo.laurent import LaurentPoly, base_names

ALL_FANS = [projective_space(1), projective_space(2), projective_space(3), hirzebruch(0), hirzebruch(1),
            hirzebruch(2), hirzebruch(3), product_of_lines(2), product_of_lines(3)]


def test_wall_counts():
    assert len(find_walls(projective_space(2))) == 3
    assert len(find_walls(hirzebruch(1))) == 4
    assert len(find_walls(builtin_fan("p1xp1"))) == 4
    assert len(find_walls(projective_space(3))) == 6
    assert len(find_walls(product_of_lines(3))) == 12


def test_walls_listed_once():
    for fan in ALL_FANS:
        walls = find_walls(fan)
        pairs = [frozenset((w.sigma, w.sigma_prime)) for w in walls]
        assert len(set(pairs)) == len(pairs)
        for w in walls:
            assert set(w.sigma) & set(w.sigma_prime) == set(w.tau)
            assert len(w.tau) == fan.rank - 1


def test_wall_relation_examples():
    p2 = projective_space(2)
    assert {wall_relation(p2, w).a for w in find_walls(p2)} == {(1,)}
    for n in range(4):
        fan = hirzebruch(n)
        (w,) = [w for w in find_walls(fan) if w.tau == (1,) and {w.v_n, w.v_n_prime} == {0, 2}]
        assert wall_relation(fan, w).a == (-n,)
    p1p1 = builtin_fan("p1xp1")
    assert {wall_relation(p1p1, w).a for w in find_walls(p1p1)} == {(0,)}


def test_wall_relation_matches_hand_solve_and_round_trips():
    for fan in ALL_FANS:
        if fan.rank == 1:
            continue
        for w in find_walls(fan):
            rel = wall_relation(fan, w)
            assert check_wall_relation(fan, w, rel)
            hand = hand_wall_relation([fan.rays[i] for i in w.tau], fan.rays[w.v_n], fan.rays[w.v_n_prime])
            assert rel.a == hand


def test_wall_relation_unique_under_pivot_order():
    for fan in ALL_FANS:
        for w in find_walls(fan):
            ref = wall_relation(fan, w)
            for order in itertools.permutations(range(fan.rank)):
                assert wall_relation(fan, w, pivot_order=order) == ref


def test_smoothness_of_builtin_fans():
    for fan in ALL_FANS:
        for cone in fan.max_cones:
            assert abs(linalg.det(fan.generator_matrix(cone))) == 1


def test_dual_basis_pairs_to_identity():
    for fan in ALL_FANS:
        for cone in fan.max_cones:
            u = fan.dual_basis(cone)
            v = fan.generator_matrix(cone)
            assert linalg.matmul(u, linalg.transpose(v)) == linalg.identity(fan.rank)


@pytest.mark.parametrize(
    "rays, cones, invariant",
    [
        (((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2)), "Completeness"),
        (((2, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)), "PrimitiveRay"),
        (((1, 0), (1, 2), (-1, -1)), ((0, 1), (1, 2), (0, 2)), "Smoothness"),
        (((1, 0), (0, 1), (-1, -1), (1, 1)), ((0, 1), (1, 2), (0, 2)), "RayUsage"),
        (((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 5)), "RayIndex"),
        (((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2), (0, 1)), "DistinctCones"),
        (((1, 0, 0), (0, 1)), ((0, 1),), "RayLength"),
    ],
)
def test_invalid_fans_name_the_invariant(rays, cones, invariant):
    with pytest.raises(InvalidFan) as err:
        Fan(2, rays, cones)
    assert err.value.invariant == invariant


def test_non_simplicial_rejected():
    with pytest.raises(NonSimplicialFan):
        Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1, 2),))


def test_overlapping_cones_rejected():
    # Two cones on the same side of a shared face.
    with pytest.raises(InvalidFan) as err:
        Fan(2, ((1, 0), (0, 1), (1, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2), (0, 3), (1, 3)))
    assert err.value.invariant == "Completeness"


def test_fan_json_round_trip_and_resolution():
    fan = hirzebruch(2)
    assert Fan.from_json(fan.to_json()) == fan
    assert resolve_fan("builtin:f2") == fan
    assert resolve_fan(fan.to_json()) == fan
    with pytest.raises(InputError):
        resolve_fan("f2")
    with pytest.raises(InputError):
        builtin_fan("k3")
    with pytest.raises(InvalidFan):
        Fan.from_json({"rank": 2, "rays": [[1, "x"]], "max_cones": []})


def test_dual_coordinate_examples():
    names = base_names(2)

    def L(text, nm=names):
        return LaurentPoly.parse(text, nm)

    assert dual_chart_coordinates((0,)).images == (L("x1"), L("y^-1"))
    assert dual_chart_coordinates((1,)).images == (L("x1*y^-1"), L("y^-1"))
    n3 = base_names(3)
    assert dual_chart_coordinates((-2, 3)).images == (L("x1*y^2", n3), L("x2*y^-3", n3), L("y^-1", n3))


def test_dual_coordinates_agree_with_chart_change():
    # <u_i^sigma, v> expressed on sigma' rays reproduces the exponent table.
    for fan in ALL_FANS:
        if fan.rank == 1:
            continue
        for w in find_walls(fan):
            rel = wall_relation(fan, w)
            exps = dual_chart_coordinates(rel).exponent_vectors
            sig = list(w.tau) + [w.v_n]
            sigp = list(w.tau) + [w.v_n_prime]
            u = fan.dual_basis(tuple(sorted(sig)))
            pos = {r: k for k, r in enumerate(sorted(sig))}
            for i, ray in enumerate(sig):
                ui = u[pos[ray]]
                assert tuple(linalg.dot(ui, fan.rays[r]) for r in sigp) == exps[i]


def test_frobenius_examples():
    p1p1 = builtin_fan("p1xp1")
    assert frobenius_power_analysis(LatticeEndo(((3, 0), (0, 3))), projective_space(2)) == FrobeniusPower(1, 3)
    assert frobenius_power_analysis(LatticeEndo(((0, 2), (2, 0))), p1p1) == FrobeniusPower(2, 4)
    res = frobenius_power_analysis(LatticeEndo(((2, 0), (0, 3))), p1p1)
    assert isinstance(res, ProductDecomposition)
    assert res.m == 1 and res.scalars == (2, 3)


def test_frobenius_scalar_is_immediate():
    for fan in ALL_FANS:
        for d in range(1, 8):
            phi = LatticeEndo(tuple(tuple(d * int(i == j) for j in range(fan.rank)) for i in range(fan.rank)))
            assert frobenius_power_analysis(phi, fan) == FrobeniusPower(1, d)


def test_frobenius_errors():
    p2 = projective_space(2)
    with pytest.raises(NotToric):
        frobenius_power_analysis(LatticeEndo(((1, 1), (0, 1))), p2)
    with pytest.raises(InputError):
        frobenius_power_analysis(LatticeEndo(((0, 0), (0, 0))), p2)
    with pytest.raises(InputError):
        frobenius_power_analysis(LatticeEndo(((1,),)), p2)


def test_frobenius_not_found_for_unipotent_symmetry():
    # The P^2 rotation has order 3, so a bound of 2 is too small.
    rot = LatticeEndo(((0, -1), (1, -1)))
    assert frobenius_power_analysis(rot, projective_space(2), max_power=2) == NotFound(2)
    assert frobenius_power_analysis(rot, projective_space(2)) == FrobeniusPower(3, 1)


def test_random_fan_symmetries_reach_scalars():
    rng = random.Random(0)
    p1p1 = builtin_fan("p1xp1")
    sym = [((1, 0), (0, 1)), ((0, 1), (1, 0)), ((-1, 0), (0, 1)), ((0, -1), (1, 0))]
    for _ in range(20):
        g = rng.choice(sym)
        d = rng.randint(1, 4)
        phi = LatticeEndo(tuple(tuple(d * c for c in row) for row in g))
        res = frobenius_power_analysis(phi, p1p1)
        assert isinstance(res, (FrobeniusPower, ProductDecomposition))
        power = phi ** res.m
        if isinstance(res, FrobeniusPower):
            assert power.scalar() == res.d
