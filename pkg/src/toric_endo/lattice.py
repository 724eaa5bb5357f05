"""Fans, walls, wall relations and lattice endomorphisms."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import linalg
from .errors import InconsistentWall, InputError, InvalidFan, NonSimplicialFan, NotToric
from .laurent import LaurentPoly, base_names

Vector = tuple[int, ...]
Cone = tuple[int, ...]


@dataclass(frozen=True)
class Fan:
    """A smooth complete simplicial fan.

    ``max_cones`` holds sorted tuples of 0-based ray indices. Construction
    validates every structural invariant and raises :class:`InvalidFan`
    naming the one that fails.
    """

    rank: int
    rays: tuple[Vector, ...]
    max_cones: tuple[Cone, ...]
    name: str = field(default="", compare=False)
    samples: int = field(default=64, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(c) for c in r) for r in self.rays))
        object.__setattr__(self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones))
        _validate(self)

    @classmethod
    def from_json(cls, obj: dict, name: str = "") -> "Fan":
        try:
            rank = obj["rank"]
            rays = obj["rays"]
            cones = obj["max_cones"]
        except (KeyError, TypeError) as exc:
            raise InvalidFan("Schema", f"fan JSON needs rank, rays and max_cones ({exc})") from None
        if not isinstance(rank, int) or isinstance(rank, bool):
            raise InvalidFan("Schema", "rank must be an integer")
        for r in rays:
            if not isinstance(r, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in r):
                raise InvalidFan("Schema", f"ray {r!r} is not a list of integers")
        for c in cones:
            if not isinstance(c, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in c):
                raise InvalidFan("Schema", f"cone {c!r} is not a list of ray indices")
        return cls(rank, tuple(map(tuple, rays)), tuple(map(tuple, cones)), name=name)

    def to_json(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}

    def generator_matrix(self, cone: Cone) -> list[list[int]]:
        """Rows are the cone's rays in ray-index order."""
        return [list(self.rays[i]) for i in cone]

    def dual_basis(self, cone: Cone) -> list[list[int]]:
        """Rows u_1..u_n with <u_i, v_j> = delta_ij for the cone's rays v_j."""
        v = self.generator_matrix(cone)
        return linalg.transpose(linalg.integer_inverse(v))

    def cone_coordinates(self, cone: Cone, vector: Sequence[int]) -> list[Fraction]:
        """Coefficients expressing ``vector`` in the cone's ray basis."""
        return linalg.solve(linalg.transpose(self.generator_matrix(cone)), list(vector))

    def locate(self, vector: Sequence[int]) -> list[int]:
        """Indices of maximal cones containing ``vector``."""
        return [k for k, c in enumerate(self.max_cones) if all(x >= 0 for x in self.cone_coordinates(c, vector))]

    def chart_names(self, cone: Cone) -> tuple[str, ...]:
        return tuple(f"t{i}" for i in range(1, self.rank + 1))


def _validate(fan: Fan):
    n = fan.rank
    if n < 1:
        raise InvalidFan("Rank", "rank must be positive")
    if not fan.rays:
        raise InvalidFan("Rays", "fan has no rays")
    for i, r in enumerate(fan.rays):
        if len(r) != n:
            raise InvalidFan("RayLength", f"ray {i} has {len(r)} coordinates, rank is {n}")
        g = 0
        for c in r:
            g = gcd(g, c)
        if g != 1:
            raise InvalidFan("PrimitiveRay", f"ray {i} = {list(r)} is not primitive (gcd {g})")
    if len(set(fan.rays)) != len(fan.rays):
        raise InvalidFan("DistinctRays", "rays are repeated")
    if not fan.max_cones:
        raise InvalidFan("Cones", "fan has no maximal cones")
    for k, c in enumerate(fan.max_cones):
        if any(i < 0 or i >= len(fan.rays) for i in c):
            raise InvalidFan("RayIndex", f"cone {k} refers to a nonexistent ray")
        if len(set(c)) != len(c):
            raise InvalidFan("RayIndex", f"cone {k} repeats a ray")
        if len(c) != n:
            raise NonSimplicialFan(f"cone {k} has {len(c)} generators, expected {n}")
        dt = linalg.det(fan.generator_matrix(c))
        if dt == 0:
            raise NonSimplicialFan(f"cone {k} has linearly dependent generators")
        if abs(dt) != 1:
            raise InvalidFan("Smoothness", f"cone {k} has generator determinant {dt}")
    if len(set(fan.max_cones)) != len(fan.max_cones):
        raise InvalidFan("DistinctCones", "maximal cones are repeated")
    used = {i for c in fan.max_cones for i in c}
    missing = sorted(set(range(len(fan.rays))) - used)
    if missing:
        raise InvalidFan("RayUsage", f"rays {missing} belong to no maximal cone")
    facets: dict[Cone, list[int]] = {}
    for k, c in enumerate(fan.max_cones):
        for tau in itertools.combinations(c, n - 1):
            facets.setdefault(tau, []).append(k)
    for tau, owners in facets.items():
        if len(owners) != 2:
            raise InvalidFan(
                "Completeness",
                f"face spanned by rays {list(tau)} bounds {len(owners)} maximal cone(s), expected 2",
            )
        normal = linalg.normal_vector([fan.rays[i] for i in tau], n)
        sides = []
        for k in owners:
            (other,) = set(fan.max_cones[k]) - set(tau)
            sides.append(linalg.dot(normal, fan.rays[other]))
        if sides[0] * sides[1] >= 0:
            raise InvalidFan("Completeness", f"cones {owners} overlap across the face spanned by rays {list(tau)}")
    rng = random.Random(0)
    checked = 0
    while checked < fan.samples:
        v = [rng.randint(-10**6, 10**6) for _ in range(n)]
        coords = [fan.cone_coordinates(c, v) for c in fan.max_cones]
        if any(x == 0 for cs in coords for x in cs):
            continue
        hits = sum(all(x > 0 for x in cs) for cs in coords)
        if hits != 1:
            raise InvalidFan("Completeness", f"sample vector {v} lies in {hits} maximal cones")
        checked += 1


@dataclass(frozen=True)
class Wall:
    tau: tuple[int, ...]
    sigma: Cone
    sigma_prime: Cone
    v_n: int
    v_n_prime: int

    def to_json(self) -> dict:
        return {
            "tau": list(self.tau),
            "sigma": list(self.sigma),
            "sigma_prime": list(self.sigma_prime),
            "v_n": self.v_n,
            "v_n_prime": self.v_n_prime,
        }


def find_walls(fan: Fan) -> list[Wall]:
    """Every pair of maximal cones sharing n-1 rays, listed once, in cone order."""
    n = fan.rank
    for k, c in enumerate(fan.max_cones):
        if len(c) != n:
            raise NonSimplicialFan(f"cone {k} has {len(c)} generators, expected {n}")
    walls = []
    for i, j in itertools.combinations(range(len(fan.max_cones)), 2):
        s, t = fan.max_cones[i], fan.max_cones[j]
        shared = tuple(sorted(set(s) & set(t)))
        if len(shared) == n - 1:
            (vn,) = set(s) - set(shared)
            (vnp,) = set(t) - set(shared)
            walls.append(Wall(shared, s, t, vn, vnp))
    return walls


@dataclass(frozen=True)
class WallRelation:
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))

    def __iter__(self):
        return iter(self.a)

    def __len__(self):
        return len(self.a)

    @property
    def rank(self) -> int:
        return len(self.a) + 1


def wall_relation(fan: Fan, wall: Wall, pivot_order: Sequence[int] | None = None) -> WallRelation:
    """Solve a_1 v_1 + ... + a_{n-1} v_{n-1} + v_n + v_n' = 0 exactly."""
    n = fan.rank
    target = [-(p + q) for p, q in zip(fan.rays[wall.v_n], fan.rays[wall.v_n_prime])]
    if n == 1:
        if any(target):
            raise InconsistentWall("v_n + v_n' is not zero on a rank-one wall")
        return WallRelation(())
    cols = [fan.rays[i] for i in wall.tau]
    # Overdetermined n x (n-1) system; pick n-1 independent rows, then check the rest.
    rows = list(range(n))
    order = list(pivot_order) if pivot_order is not None else rows
    chosen = None
    for subset in itertools.combinations(order, n - 1):
        square = [[cols[k][r] for k in range(n - 1)] for r in subset]
        if linalg.det(square) != 0:
            chosen = subset
            break
    if chosen is None:
        raise InconsistentWall(f"rays {list(wall.tau)} of the wall are dependent")
    square = [[cols[k][r] for k in range(n - 1)] for r in chosen]
    sol = linalg.solve(square, [target[r] for r in chosen])
    for r in rows:
        if sum(sol[k] * cols[k][r] for k in range(n - 1)) != target[r]:
            raise InconsistentWall(f"no solution for the wall between cones {list(wall.sigma)} and {list(wall.sigma_prime)}")
    if any(x.denominator != 1 for x in sol):
        raise InconsistentWall(f"wall relation {[str(x) for x in sol]} is not integral")
    return WallRelation(tuple(int(x) for x in sol))


def check_wall_relation(fan: Fan, wall: Wall, rel: WallRelation) -> bool:
    total = [0] * fan.rank
    for ai, i in zip(rel.a, wall.tau):
        total = [t + ai * c for t, c in zip(total, fan.rays[i])]
    total = [t + p + q for t, p, q in zip(total, fan.rays[wall.v_n], fan.rays[wall.v_n_prime])]
    return not any(total)


@dataclass(frozen=True)
class DualCoordinates:
    """sigma-chart coordinates written in the sigma'-chart variables (x_1..x_{n-1}, y)."""

    a: tuple[int, ...]
    images: tuple[LaurentPoly, ...]

    @property
    def exponent_vectors(self) -> list[tuple[int, ...]]:
        return [img.leading()[0] for img in self.images]


def dual_chart_coordinates(rel: WallRelation | Sequence[int]) -> DualCoordinates:
    a = tuple(rel.a if isinstance(rel, WallRelation) else rel)
    n = len(a) + 1
    names = base_names(n)
    images = []
    for i, ai in enumerate(a):
        e = [0] * n
        e[i] = 1
        e[-1] = -ai
        images.append(LaurentPoly.monomial(names, e))
    images.append(LaurentPoly.monomial(names, (0,) * (n - 1) + (-1,)))
    return DualCoordinates(a, tuple(images))


def wall_dual_coordinates(fan: Fan, wall: Wall) -> DualCoordinates:
    return dual_chart_coordinates(wall_relation(fan, wall))


# -- lattice endomorphisms --------------------------------------------------


@dataclass(frozen=True)
class LatticeEndo:
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(int(v) for v in row) for row in self.matrix)
        if not m or any(len(row) != len(m) for row in m):
            raise InputError("lattice endomorphism must be a square integer matrix")
        object.__setattr__(self, "matrix", m)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def det(self) -> int:
        return int(linalg.det(self.matrix))

    def apply(self, v: Sequence[int]) -> Vector:
        return tuple(linalg.matvec(self.matrix, v))

    def __pow__(self, k: int) -> "LatticeEndo":
        out = linalg.identity(self.rank)
        for _ in range(k):
            out = linalg.matmul(self.matrix, out)
        return LatticeEndo(out)

    def scalar(self) -> int | None:
        d = self.matrix[0][0]
        if all(self.matrix[i][j] == (d if i == j else 0) for i in range(self.rank) for j in range(self.rank)):
            return d
        return None


@dataclass(frozen=True)
class FrobeniusPower:
    m: int
    d: int
    kind: str = "scalar"


@dataclass(frozen=True)
class ProductDecomposition:
    m: int
    factors: tuple[tuple[int, tuple[int, ...]], ...]
    kind: str = "product"

    @property
    def scalars(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.factors)


@dataclass(frozen=True)
class NotFound:
    max_power: int
    kind: str = "not_found"


def check_toric(phi: LatticeEndo, fan: Fan) -> None:
    if phi.rank != fan.rank:
        raise InputError(f"matrix has size {phi.rank}, fan has rank {fan.rank}")
    if phi.det() == 0:
        raise InputError("lattice endomorphism must have nonzero determinant")
    for k, cone in enumerate(fan.max_cones):
        images = [phi.apply(fan.rays[i]) for i in cone]
        if not any(all(all(x >= 0 for x in fan.cone_coordinates(c, v)) for v in images) for c in fan.max_cones):
            raise NotToric(f"image of cone {k} lies in no cone of the fan")


def frobenius_power_analysis(phi: LatticeEndo, fan: Fan, max_power: int = 64):
    """Find the least m with phi^m scalar, or split phi^m into scalar blocks on ray groups."""
    if max_power < 1:
        raise InputError("max_power must be positive")
    check_toric(phi, fan)
    power = phi
    for m in range(1, max_power + 1):
        d = power.scalar()
        if d is not None:
            return FrobeniusPower(m, d)
        groups = _eigen_groups(power, fan)
        if groups is not None:
            return ProductDecomposition(m, groups)
        power = LatticeEndo(linalg.matmul(phi.matrix, power.matrix))
    return NotFound(max_power)


def _eigen_groups(power: LatticeEndo, fan: Fan):
    eig: dict[int, list[int]] = {}
    order: list[int] = []
    for i, v in enumerate(fan.rays):
        w = power.apply(v)
        k = next(j for j, c in enumerate(v) if c)
        if w[k] % v[k]:
            return None
        lam = w[k] // v[k]
        if tuple(lam * c for c in v) != w:
            return None
        if lam not in eig:
            eig[lam] = []
            order.append(lam)
        eig[lam].append(i)
    if len(eig) < 2:
        return None
    if sum(linalg.rank([fan.rays[i] for i in eig[lam]]) for lam in order) != fan.rank:
        return None
    return tuple((lam, tuple(eig[lam])) for lam in order)
