"""Torus-invariant divisors, their polytopes, and section spaces of split bundles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, prod
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import DegreeMismatch, InputError, SectionNotInSpace, UnboundedPolytope
from .lattice import Cone, Fan, Vector
from .laurent import LaurentPoly


@dataclass(frozen=True)
class ToricDivisor:
    """sum_rho c_rho D_rho, stored by its ray coefficients."""

    fan: Fan
    ray_coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.ray_coeffs)
        if len(coeffs) != len(self.fan.rays):
            raise InputError(f"divisor has {len(coeffs)} coefficients, fan has {len(self.fan.rays)} rays")
        object.__setattr__(self, "ray_coeffs", coeffs)

    @classmethod
    def zero(cls, fan: Fan) -> "ToricDivisor":
        return cls(fan, (0,) * len(fan.rays))

    @classmethod
    def principal(cls, fan: Fan, m: Sequence[int]) -> "ToricDivisor":
        """div(chi^m) = sum <m, u_rho> D_rho."""
        return cls(fan, tuple(linalg.dot(m, r) for r in fan.rays))

    @classmethod
    def from_json(cls, fan: Fan, obj) -> "ToricDivisor":
        if isinstance(obj, dict):
            obj = obj.get("ray_coeffs")
        if not isinstance(obj, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in obj):
            raise InputError("divisor JSON needs ray_coeffs: a list of integers")
        return cls(fan, tuple(obj))

    def to_json(self) -> dict:
        return {"ray_coeffs": list(self.ray_coeffs)}

    def _other(self, other: "ToricDivisor"):
        if not isinstance(other, ToricDivisor):
            return NotImplemented
        if other.fan != self.fan:
            raise InputError("divisors live on different fans")
        return other

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return ToricDivisor(self.fan, tuple(a + b for a, b in zip(self.ray_coeffs, other.ray_coeffs)))

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return ToricDivisor(self.fan, tuple(a - b for a, b in zip(self.ray_coeffs, other.ray_coeffs)))

    def __neg__(self):
        return ToricDivisor(self.fan, tuple(-a for a in self.ray_coeffs))

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return ToricDivisor(self.fan, tuple(k * a for a in self.ray_coeffs))

    __rmul__ = __mul__

    def local_character(self, cone: Cone) -> Vector:
        """The m_sigma with <m_sigma, v_rho> = -c_rho for every ray of the cone."""
        u = self.fan.dual_basis(cone)
        n = self.fan.rank
        return tuple(-sum(self.ray_coeffs[r] * u[k][p] for k, r in enumerate(cone)) for p in range(n))

    def chart_exponents(self, m: Sequence[int], cone: Cone) -> tuple[int, ...]:
        """Exponents of chi^m, trivialized on the cone's chart."""
        return tuple(linalg.dot(m, self.fan.rays[r]) + self.ray_coeffs[r] for r in cone)


@dataclass
class DivisorPolytope:
    """{m : <m, u_rho> >= -c_rho for all rho}."""

    normals: tuple[Vector, ...]
    offsets: tuple[int, ...]
    divisor: ToricDivisor | None = None
    _points: list[Vector] | None = field(default=None, repr=False)
    _vertices: list[tuple[Fraction, ...]] | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.normals[0])

    def contains(self, m: Sequence[int]) -> bool:
        return all(linalg.dot(m, u) >= -c for u, c in zip(self.normals, self.offsets))

    def vertices(self) -> list[tuple[Fraction, ...]]:
        if self._vertices is None:
            n = self.dim
            found = set()
            for subset in itertools.combinations(range(len(self.normals)), n):
                a = [self.normals[i] for i in subset]
                x = linalg.solve(a, [-self.offsets[i] for i in subset])
                if x is not None and self.contains_rational(x):
                    found.add(tuple(x))
            self._vertices = sorted(found)
        return self._vertices

    def contains_rational(self, x: Sequence[Fraction]) -> bool:
        return all(linalg.dot(x, u) >= -c for u, c in zip(self.normals, self.offsets))

    def is_empty(self) -> bool:
        return not self.vertices()

    def lattice_points(self) -> list[Vector]:
        if self._points is None:
            verts = self.vertices()
            if not verts:
                self._points = []
            else:
                lo = [ceil(min(v[k] for v in verts)) for k in range(self.dim)]
                hi = [floor(max(v[k] for v in verts)) for k in range(self.dim)]
                box = itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))
                self._points = [p for p in box if self.contains(p)]
        return list(self._points)

    def __len__(self):
        return len(self.lattice_points())


def _check_bounded(normals: Sequence[Vector], n: int):
    if linalg.rank(normals) < n:
        raise UnboundedPolytope("the ray normals do not span the lattice")
    for subset in itertools.combinations(normals, n - 1):
        if n > 1 and linalg.rank(subset) < n - 1:
            continue
        w = linalg.normal_vector(subset, n)
        for direction in (w, [-c for c in w]):
            if all(linalg.dot(direction, u) >= 0 for u in normals):
                raise UnboundedPolytope(f"recession direction {direction}")


def polytope_of(divisor: ToricDivisor) -> DivisorPolytope:
    fan = divisor.fan
    _check_bounded(fan.rays, fan.rank)
    return DivisorPolytope(fan.rays, divisor.ray_coeffs, divisor)


def lattice_points(poly: DivisorPolytope) -> list[Vector]:
    return poly.lattice_points()


def h0(divisor: ToricDivisor) -> int:
    return len(polytope_of(divisor).lattice_points())


@dataclass(frozen=True)
class SplitBundleSpec:
    """E = L_1 + ... + L_r over a toric base, with phi^* L = L^q and relative degree d."""

    base: Fan
    line_bundles: tuple[ToricDivisor, ...]
    q: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "line_bundles", tuple(self.line_bundles))
        if not self.line_bundles:
            raise InputError("a split bundle needs at least one line bundle")
        if any(L.fan != self.base for L in self.line_bundles):
            raise InputError("all line bundles must live on the base fan")
        if self.q < 0:
            raise InputError("q must be nonnegative")
        if self.d < 1:
            raise InputError("relative degree d must be positive")

    @property
    def r(self) -> int:
        return len(self.line_bundles)

    def slot_divisor(self, ell: int, lam: Sequence[int]) -> ToricDivisor:
        """sum_k lam_k L_k - q L_ell, with ell counted from 1."""
        if not 1 <= ell <= self.r:
            raise InputError(f"ell must lie in 1..{self.r}")
        if len(lam) != self.r or sum(lam) != self.d or min(lam) < 0:
            raise DegreeMismatch(f"{tuple(lam)} is not a composition of {self.d} with {self.r} parts")
        out = ToricDivisor.zero(self.base)
        for k, L in zip(lam, self.line_bundles):
            out = out + k * L
        return out - self.q * self.line_bundles[ell - 1]

    def to_json(self) -> dict:
        return {
            "fan": self.base.to_json(),
            "line_bundles": [L.to_json() for L in self.line_bundles],
            "q": self.q,
            "d": self.d,
        }


def section_space(spec: SplitBundleSpec, ell: int, lam: Sequence[int]) -> DivisorPolytope:
    return polytope_of(spec.slot_divisor(ell, lam))


@dataclass(frozen=True)
class FamilyDimension:
    dims: dict
    sum_dim: int
    product_of_dims: int


def family_dimension(spec: SplitBundleSpec, pattern: Iterable[tuple[int, Sequence[int]]]) -> FamilyDimension:
    dims = {}
    for ell, lam in pattern:
        dims[(ell, tuple(lam))] = len(section_space(spec, ell, lam).lattice_points())
    nonzero = [v for v in dims.values() if v]
    return FamilyDimension(dims, sum(nonzero), prod(nonzero) if nonzero else 0)


Section = Mapping[Sequence[int], Fraction]


def restrict_section(divisor: ToricDivisor, section: Section, cone: Cone, names: Sequence[str] | None = None,
                     strict: bool = True) -> LaurentPoly:
    """Write sum_m c_m chi^m in the cone's chart coordinates.

    With ``strict`` a lattice point outside the divisor polytope raises
    :class:`SectionNotInSpace`; otherwise the Laurent restriction is returned.
    """
    fan = divisor.fan
    names = tuple(names) if names is not None else fan.chart_names(cone)
    terms = {}
    for m, c in section.items():
        e = divisor.chart_exponents(m, cone)
        if strict and min(e) < 0:
            raise SectionNotInSpace(f"character {list(m)} is not a section of divisor {list(divisor.ray_coeffs)}")
        terms[e] = terms.get(e, 0) + Fraction(c)
    return LaurentPoly(names, terms)
