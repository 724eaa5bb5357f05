"""Based maps of projectivized split bundles E = L_1 + ... + L_r.

A based map with relative degree d is given by sections a_{l,lam} of the
slot divisors sum_k lam_k L_k - q L_l. On a chart they assemble into forms
f_l = sum_lam a_{l,lam} z^lam that must glue and have no common zero.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import linalg
from .builtin import hirzebruch, product_of_lines, projective_space, resolve_fan
from .commonzero import CommonZeroVerdict, NO_COMMON_ZERO, no_common_zero_charts
from .compositions import Composition, compositions, unit
from .errors import DegreeMismatch, InputError, SectionNotInSpace
from .fiber import FiberPoly
from .lattice import Cone, Fan, Vector, find_walls
from .laurent import LaurentPoly, as_fraction, format_rational
from .sections import (
    FamilyDimension,
    SplitBundleSpec,
    ToricDivisor,
    family_dimension,
    h0,
    lattice_points,
    polytope_of,
    restrict_section,
)

Slot = tuple[int, Composition]
Section = dict[Vector, Fraction]


# -- section data --------------------------------------------------------------


@dataclass(frozen=True)
class BasedMapData:
    """A split bundle plus a chosen section for each nonzero slot (l, lam).

    ``ell`` counts from 1. Sections map lattice points to rational
    coefficients. Points outside the slot polytope are kept so that the
    gluing check can report them; :func:`build_fiber_polys` rejects them.
    """

    spec: SplitBundleSpec
    sections: Mapping[Slot, Mapping[Vector, Fraction]]

    def __post_init__(self):
        clean: dict[Slot, Section] = {}
        for (ell, lam), sec in self.sections.items():
            lam = tuple(lam)
            self.spec.slot_divisor(ell, lam)
            entry = clean.setdefault((ell, lam), {})
            for m, c in sec.items():
                m = tuple(m)
                if len(m) != self.spec.base.rank:
                    raise InputError(f"lattice point {list(m)} has the wrong length")
                entry[m] = entry.get(m, Fraction(0)) + as_fraction(c)
            clean[(ell, lam)] = {m: c for m, c in entry.items() if c}
        object.__setattr__(self, "sections", {k: v for k, v in sorted(clean.items()) if v})

    @property
    def r(self) -> int:
        return self.spec.r

    def out_of_space(self) -> list[tuple[int, Composition, Vector]]:
        bad = []
        for (ell, lam), sec in self.sections.items():
            poly = polytope_of(self.spec.slot_divisor(ell, lam))
            bad.extend((ell, lam, m) for m in sec if not poly.contains(m))
        return bad

    @classmethod
    def from_json(cls, obj) -> "BasedMapData":
        if not isinstance(obj, dict) or "bundle" not in obj:
            raise InputError("based-map JSON needs a 'bundle' object")
        spec = spec_from_json(obj["bundle"])
        sections: dict[Slot, Section] = {}
        for entry in obj.get("sections", []):
            try:
                ell = int(entry["ell"])
                lam = tuple(int(v) for v in entry["lambda"])
                terms = entry.get("terms", [])
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"malformed section entry {entry!r}: {exc}") from None
            sec = sections.setdefault((ell, lam), {})
            for t in terms:
                m = tuple(int(v) for v in t["point"])
                sec[m] = sec.get(m, Fraction(0)) + as_fraction(t.get("coeff", 1))
        return cls(spec, sections)

    def to_json(self) -> dict:
        return {
            "bundle": self.spec.to_json(),
            "sections": [
                {
                    "ell": ell,
                    "lambda": list(lam),
                    "terms": [{"point": list(m), "coeff": format_rational(c)} for m, c in sorted(sec.items())],
                }
                for (ell, lam), sec in self.sections.items()
            ],
        }


def spec_from_json(obj) -> SplitBundleSpec:
    if not isinstance(obj, dict):
        raise InputError("bundle must be a JSON object")
    try:
        fan = resolve_fan(obj["fan"])
        bundles = tuple(ToricDivisor.from_json(fan, L) for L in obj["line_bundles"])
        q, d = obj["q"], obj["d"]
    except KeyError as exc:
        raise InputError(f"bundle JSON is missing {exc}") from None
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (q, d)):
        raise InputError("q and d must be integers")
    return SplitBundleSpec(fan, bundles, q, d)


def build_fiber_polys(data: BasedMapData, chart: Cone, strict: bool = True) -> list[FiberPoly]:
    """The forms f_1..f_r on the chart of a maximal cone."""
    fan = data.spec.base
    chart = tuple(chart)
    if chart not in fan.max_cones:
        raise InputError(f"{list(chart)} is not a maximal cone")
    names = fan.chart_names(chart)
    r, d = data.r, data.spec.d
    out = []
    for ell in range(1, r + 1):
        coeffs = {}
        for (l2, lam), sec in data.sections.items():
            if l2 == ell:
                coeffs[lam] = restrict_section(data.spec.slot_divisor(ell, lam), sec, chart, names, strict)
        out.append(FiberPoly(names, r, d, coeffs))
    return out


# -- cocycles ------------------------------------------------------------------


def chart_change_matrix(fan: Fan, src: Cone, dst: Cone) -> list[list[int]]:
    """B with B[p][l] = <u_l(src), v_p(dst)>: src-chart exponents -> dst-chart exponents."""
    u = fan.dual_basis(src)
    return [[linalg.dot(u[l], fan.rays[p]) for l in range(fan.rank)] for p in dst]


def toric_converter(fan: Fan) -> Callable[[LaurentPoly, Cone, Cone], LaurentPoly]:
    cache: dict = {}

    def convert(p: LaurentPoly, src: Cone, dst: Cone) -> LaurentPoly:
        if src == dst:
            return p
        key = (src, dst)
        if key not in cache:
            cache[key] = chart_change_matrix(fan, src, dst)
        return p.linear_exponent_map(cache[key], fan.chart_names(dst))

    return convert


def _identity(p: LaurentPoly) -> LaurentPoly:
    return p


@dataclass(frozen=True)
class Cocycle:
    """Transitions M_{ji}^{(k)} of each L_k from chart i to chart j, in chart-i variables."""

    charts: tuple
    names: Mapping[object, tuple[str, ...]]
    transitions: Mapping[tuple[object, object], tuple[LaurentPoly, ...]]
    convert: Callable[[LaurentPoly, object, object], LaurentPoly]
    reduce: Callable[[LaurentPoly], LaurentPoly] = _identity

    def M(self, j, i, k: int) -> LaurentPoly:
        return self.transitions[(j, i)][k]

    @property
    def rank(self) -> int:
        return len(next(iter(self.transitions.values())))

    def check_triple(self, l, j, i) -> bool:
        for k in range(self.rank):
            lhs = self.reduce(self.convert(self.M(l, j, k), j, i) * self.M(j, i, k))
            if lhs != self.reduce(self.M(l, i, k)):
                return False
        return True

    def failing_triples(self) -> list[tuple]:
        return [t for t in itertools.product(self.charts, repeat=3) if not self.check_triple(*t)]

    @classmethod
    def from_split_bundle(cls, spec: SplitBundleSpec) -> "Cocycle":
        fan = spec.base
        charts = tuple(fan.max_cones)
        local = {c: [L.local_character(c) for L in spec.line_bundles] for c in charts}
        transitions = {}
        for j, i in itertools.product(charts, repeat=2):
            row = []
            for k in range(spec.r):
                diff = [a - b for a, b in zip(local[i][k], local[j][k])]
                exps = tuple(linalg.dot(diff, fan.rays[p]) for p in i)
                row.append(LaurentPoly.monomial(fan.chart_names(i), exps))
            transitions[(j, i)] = tuple(row)
        return cls(charts, {c: fan.chart_names(c) for c in charts}, transitions, toric_converter(fan))


# -- gluing ----------------------------------------------------------------------


@dataclass(frozen=True)
class Discrepancy:
    ell: int
    lam: Composition
    residual: LaurentPoly

    def to_json(self) -> dict:
        return {"ell": self.ell, "lambda": list(self.lam), "residual": str(self.residual)}


@dataclass(frozen=True)
class PairResult:
    j: object
    i: object
    discrepancies: tuple[Discrepancy, ...]

    @property
    def passed(self) -> bool:
        return not self.discrepancies

    def to_json(self) -> dict:
        return {
            "from": _label(self.i),
            "to": _label(self.j),
            "passed": self.passed,
            "discrepancies": [d.to_json() for d in self.discrepancies],
        }


@dataclass(frozen=True)
class Irregularity:
    chart: object
    ell: int
    lam: Composition
    coefficient: LaurentPoly

    def to_json(self) -> dict:
        return {"chart": _label(self.chart), "ell": self.ell, "lambda": list(self.lam), "coefficient": str(self.coefficient)}


@dataclass(frozen=True)
class GluingReport:
    pairs: tuple[PairResult, ...]
    irregular: tuple[Irregularity, ...] = ()

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.pairs) and not self.irregular

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "pairs": [p.to_json() for p in self.pairs],
            "irregular": [x.to_json() for x in self.irregular],
        }


def _label(chart):
    return list(chart) if isinstance(chart, tuple) else chart


def glue_pair(polys_i: Sequence[FiberPoly], polys_j: Sequence[FiberPoly], cocycle: Cocycle, j, i, q: int) -> PairResult:
    """Check f_{i,l}(z_1 M^{(1)}, ..., z_r M^{(r)}) = (M^{(l)})^q f_{j,l} in chart-i variables."""
    r = len(polys_i)
    names = cocycle.names[i]
    zero = LaurentPoly.zero(names)
    images = [
        FiberPoly.linear(names, [cocycle.M(j, i, k) if m == k else zero for m in range(r)]) for k in range(r)
    ]
    found = []
    for ell in range(r):
        lhs = polys_i[ell].substitute(images)
        rhs = polys_j[ell].map_coeffs(lambda c: cocycle.convert(c, j, i), names).scale(cocycle.M(j, i, ell) ** q)
        diff = (lhs - rhs).map_coeffs(cocycle.reduce)
        found.extend(Discrepancy(ell + 1, lam, c) for lam, c in diff.items())
    return PairResult(j, i, tuple(found))


def gluing_check_charts(chart_polys: Mapping[object, Sequence[FiberPoly]], cocycle: Cocycle, q: int,
                        pairs: Iterable[tuple] | None = None) -> GluingReport:
    if pairs is None:
        pairs = [(j, i) for i, j in itertools.permutations(cocycle.charts, 2)]
    results = tuple(glue_pair(chart_polys[i], chart_polys[j], cocycle, j, i, q) for j, i in pairs)
    irregular = []
    for chart, polys in chart_polys.items():
        for ell, f in enumerate(polys, start=1):
            for lam, c in f.items():
                if not cocycle.reduce(c).is_polynomial():
                    irregular.append(Irregularity(chart, ell, lam, c))
    return GluingReport(results, tuple(irregular))


def wall_pairs(fan: Fan) -> list[tuple[Cone, Cone]]:
    """(sigma', sigma) for each wall, in wall order."""
    return [(w.sigma_prime, w.sigma) for w in find_walls(fan)]


def gluing_check(data: BasedMapData, pairs: Iterable[tuple[Cone, Cone]] | None = None,
                 chart_polys: Mapping[Cone, Sequence[FiberPoly]] | None = None) -> GluingReport:
    """Gluing across walls of the base fan plus regularity of every chart coefficient.

    Coefficients are restricted without the polytope test, so a section
    point outside its space shows up as an irregular coefficient.
    """
    fan = data.spec.base
    cocycle = Cocycle.from_split_bundle(data.spec)
    if chart_polys is None:
        chart_polys = {c: build_fiber_polys(data, c, strict=False) for c in fan.max_cones}
    if pairs is None:
        pairs = wall_pairs(fan)
    return gluing_check_charts(chart_polys, cocycle, data.spec.q, pairs)


def no_common_zero(data: BasedMapData) -> CommonZeroVerdict:
    fan = data.spec.base
    charts = {c: build_fiber_polys(data, c) for c in fan.max_cones}
    return no_common_zero_charts(charts, fan.chart_names(fan.max_cones[0]))


@dataclass(frozen=True)
class ClassificationReport:
    gluing: GluingReport
    common_zero: CommonZeroVerdict | None
    out_of_space: tuple

    @property
    def passed(self) -> bool:
        return self.gluing.passed and self.common_zero is not None and self.common_zero.status == NO_COMMON_ZERO

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "gluing": self.gluing.to_json(),
            "out_of_space": [{"ell": e, "lambda": list(l), "point": list(m)} for e, l, m in self.out_of_space],
            "common_zero": self.common_zero.to_json() if self.common_zero is not None else None,
        }


def classify(data: BasedMapData) -> ClassificationReport:
    """Gluing check, then (if every section lies in its space) the common-zero pipeline."""
    bad = tuple(data.out_of_space())
    glue = gluing_check(data)
    verdict = None if bad else no_common_zero(data)
    return ClassificationReport(glue, verdict, bad)


# -- the Frobenius choice ----------------------------------------------------------


def frobenius_data(spec: SplitBundleSpec) -> BasedMapData:
    """a_{l, d e_l} = 1 and every other slot zero, so f_l = z_l^d on each chart."""
    if spec.q != spec.d:
        raise InputError(f"the Frobenius choice needs q = d, got q={spec.q}, d={spec.d}")
    origin = (0,) * spec.base.rank
    return BasedMapData(spec, {(ell, unit(spec.r, ell - 1, spec.d)): {origin: 1} for ell in range(1, spec.r + 1)})


def fn_split_spec(n: int, d: int) -> SplitBundleSpec:
    """O + O(n D_0) over the Hirzebruch surface F_n, with q = d."""
    fan = hirzebruch(n)
    return SplitBundleSpec(fan, (ToricDivisor.zero(fan), ToricDivisor(fan, (n, 0, 0, 0))), d, d)


def p1_split_spec(n: int, d: int) -> SplitBundleSpec:
    """O + O(n) over P^1 with q = d; its projectivization is F_n."""
    fan = projective_space(1)
    return SplitBundleSpec(fan, (ToricDivisor.zero(fan), ToricDivisor(fan, (n, 0))), d, d)


# -- torsion: an abstract two-chart cocycle -------------------------------------------


TORSION_NAMES = ("t1", "tau")


def _mod_tau(order: int):
    def reduce(p: LaurentPoly) -> LaurentPoly:
        return p.map_exponents(lambda e: (e[0], e[1] % order), p.names)

    return reduce


@dataclass(frozen=True)
class TorsionBundle:
    """O + L with L of finite order on an abstract base covered by two charts.

    The transition of L is a formal unit tau with tau^order = 1. Global
    sections of L^k are constants when order divides k and zero otherwise.
    """

    classes: tuple[int, ...] = (0, 1)
    order: int = 2
    q: int = 1
    d: int = 2
    charts: tuple[str, ...] = ("U1", "U2")

    @property
    def r(self) -> int:
        return len(self.classes)

    def slot_class(self, ell: int, lam: Sequence[int]) -> int:
        if len(lam) != self.r or sum(lam) != self.d or min(lam) < 0:
            raise DegreeMismatch(f"{tuple(lam)} is not a composition of {self.d} with {self.r} parts")
        return (sum(k * t for k, t in zip(lam, self.classes)) - self.q * self.classes[ell - 1]) % self.order

    def cocycle(self) -> Cocycle:
        transitions = {}
        for j, i in itertools.product(self.charts, repeat=2):
            power = 0 if i == j else 1
            transitions[(j, i)] = tuple(
                LaurentPoly.monomial(TORSION_NAMES, (0, power * t % self.order)) for t in self.classes
            )
        return Cocycle(
            self.charts,
            {c: TORSION_NAMES for c in self.charts},
            transitions,
            lambda p, src, dst: p,
            _mod_tau(self.order),
        )

    def build(self, sections: Mapping[Slot, object]) -> list[FiberPoly]:
        """Forms from constant sections; a nonzero constant in a nontrivial class is rejected."""
        coeffs: list[dict] = [{} for _ in range(self.r)]
        for (ell, lam), c in sections.items():
            c = as_fraction(c)
            if c and self.slot_class(ell, lam):
                raise SectionNotInSpace(f"slot ({ell}, {list(lam)}) is a nontrivial torsion class with no sections")
            coeffs[ell - 1][tuple(lam)] = c
        return [FiberPoly(TORSION_NAMES, self.r, self.d, cs) for cs in coeffs]


TORSION_SECTIONS = {(1, (2, 0)): 1, (1, (0, 2)): 1, (2, (1, 1)): 1}


@dataclass(frozen=True)
class TorsionReport:
    polys: tuple[FiberPoly, ...]
    gluing: GluingReport
    common_zero: CommonZeroVerdict

    @property
    def passed(self) -> bool:
        return self.gluing.passed and self.common_zero.status == NO_COMMON_ZERO

    def to_json(self) -> dict:
        return {
            "polys": [str(f) for f in self.polys],
            "gluing": self.gluing.to_json(),
            "common_zero": self.common_zero.to_json(),
            "passed": self.passed,
        }


def torsion_example(bundle: TorsionBundle | None = None, sections: Mapping[Slot, object] | None = None) -> TorsionReport:
    bundle = bundle or TorsionBundle()
    polys = bundle.build(TORSION_SECTIONS if sections is None else sections)
    charts = {c: polys for c in bundle.charts}
    glue = gluing_check_charts(charts, bundle.cocycle(), bundle.q)
    verdict = no_common_zero_charts(charts, TORSION_NAMES)
    return TorsionReport(tuple(polys), glue, verdict)


# -- the tangent bundle of (P^1)^n ---------------------------------------------------


ADMISSIBLE = "admissible"
NO_BASED_MAP = "no_based_map_exists"


@dataclass(frozen=True)
class P1nSlot:
    ell: int
    lam: Composition
    dim: int
    allowed: bool

    def to_json(self) -> dict:
        return {"ell": self.ell, "lambda": list(self.lam), "dim": self.dim, "allowed": self.allowed}


@dataclass(frozen=True)
class P1nVerdict:
    n: int
    degrees: tuple[int, ...]
    d: int
    status: str
    reason: str
    slots: tuple[P1nSlot, ...]
    form: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degrees": list(self.degrees),
            "relative_degree": self.d,
            "status": self.status,
            "reason": self.reason,
            "form": list(self.form),
            "slots": [s.to_json() for s in self.slots],
        }


def p1n_slot_divisor(fan: Fan, degrees: Sequence[int], ell: int, lam: Sequence[int]) -> ToricDivisor:
    """sum_k 2 lam_k D_k - 2 d_l D_l on (P^1)^n, D_k the divisor of the ray e_k."""
    coeffs = [0] * len(fan.rays)
    for k, v in enumerate(lam):
        coeffs[2 * k] += 2 * v
    coeffs[2 * (ell - 1)] -= 2 * degrees[ell - 1]
    return ToricDivisor(fan, tuple(coeffs))


def classify_p1n_tangent(n: int, degrees: Sequence[int], d: int | None = None) -> P1nVerdict:
    """Base-toric maps of P(T_X), X = (P^1)^n, with factor degrees d_l and relative degree d."""
    degrees = tuple(int(v) for v in degrees)
    if n < 1 or len(degrees) != n:
        raise InputError(f"need {n} factor degrees, got {len(degrees)}")
    if min(degrees) < 1:
        raise InputError("factor degrees must be positive")
    d = max(degrees) if d is None else d
    if d < 1:
        raise InputError("relative degree must be positive")
    fan = product_of_lines(n)
    slots = []
    for ell in range(1, n + 1):
        for lam in compositions(d, n):
            dim = h0(p1n_slot_divisor(fan, degrees, ell, lam))
            slots.append(P1nSlot(ell, lam, dim, lam[ell - 1] >= degrees[ell - 1]))
    slots = tuple(slots)
    big = [ell for ell, v in enumerate(degrees, start=1) if v > d]
    small = [ell for ell, v in enumerate(degrees, start=1) if v < d]
    if big:
        ell = big[0]
        reason = f"f_{ell} vanishes identically since lambda_{ell} >= d_{ell} = {degrees[ell - 1]} > d; Bezout gives a common zero"
        return P1nVerdict(n, degrees, d, NO_BASED_MAP, reason, slots)
    if small:
        ell = small[0]
        reason = (
            f"the z_{ell}^d coefficient of f_{ell} is a section of O({2 * (d - degrees[ell - 1])}) on factor {ell}; "
            f"it vanishes somewhere, and there the other forms also vanish at e_{ell}"
        )
        return P1nVerdict(n, degrees, d, NO_BASED_MAP, reason, slots)
    form = tuple(f"f{ell} = A{ell}*z{ell}^{d}" for ell in range(1, n + 1))
    return P1nVerdict(n, degrees, d, ADMISSIBLE, "only lambda = d e_l survives, with constant coefficient", slots, form)


# -- Hirzebruch surfaces -------------------------------------------------------------


@dataclass(frozen=True)
class HirzebruchSlot:
    name: str
    ell: int
    lam: Composition
    dim: int


@dataclass(frozen=True)
class HirzebruchTemplate:
    n: int
    d: int
    slots: tuple[HirzebruchSlot, ...]

    @property
    def sum_dim(self) -> int:
        return sum(s.dim for s in self.slots)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "slots": [{"name": s.name, "ell": s.ell, "lambda": list(s.lam), "dim": s.dim} for s in self.slots],
            "sum_dim": self.sum_dim,
            "form": [
                " + ".join(f"s{i}*z1^{self.d - i}*z2^{i}" for i in range(self.d + 1)),
                f"c*z2^{self.d}",
            ],
        }


def hirzebruch_enumerate(n: int, d: int) -> HirzebruchTemplate:
    """Slots s_i in O(n i) (i = 0..d) for f_1 and the constant c for f_2."""
    if n < 1 or d < 1:
        raise InputError("need n >= 1 and d >= 1")
    spec = p1_split_spec(n, d)
    slots = []
    for i in range(d + 1):
        lam = (d - i, i)
        slots.append(HirzebruchSlot(f"s{i}", 1, lam, len(lattice_points(polytope_of(spec.slot_divisor(1, lam))))))
    lam = (0, d)
    slots.append(HirzebruchSlot("c", 2, lam, len(lattice_points(polytope_of(spec.slot_divisor(2, lam))))))
    return HirzebruchTemplate(n, d, tuple(slots))


@dataclass(frozen=True)
class HirzebruchFamily:
    """F_1 = sum_i s_i z_1^{d-i} z_2^i and F_2 = c z_2^d over P^1 for F_n = P(O + O(n))."""

    n: int
    d: int
    s: tuple[Mapping[Vector, Fraction], ...]
    c: Fraction

    def __post_init__(self):
        if len(self.s) != self.d + 1:
            raise InputError(f"need {self.d + 1} sections s_0..s_d, got {len(self.s)}")
        object.__setattr__(self, "s", tuple({tuple(m): as_fraction(v) for m, v in si.items()} for si in self.s))
        object.__setattr__(self, "c", as_fraction(self.c))

    def data(self) -> BasedMapData:
        sections = {(1, (self.d - i, i)): si for i, si in enumerate(self.s)}
        sections[(2, (0, self.d))] = {(0,): self.c}
        return BasedMapData(p1_split_spec(self.n, self.d), sections)

    def diagnostics(self) -> list[str]:
        out = []
        if not any(self.s[0].values()):
            out.append("s_0 = 0: both polynomials are divisible by z_2")
        if not self.c:
            out.append("c = 0: F_2 vanishes identically")
        return out

    def fiber_image(self, chart: Cone, t: Sequence, z: Sequence) -> tuple:
        """[F_1 : F_2] at chart coordinate t and fiber point z."""
        data = self.data()
        f1, f2 = build_fiber_polys(data, chart)
        return f1.evaluate(t, z), f2.evaluate(t, z)

    def verify(self) -> "HirzebruchReport":
        data = self.data()
        glue = gluing_check(data)
        verdict = no_common_zero(data) if not data.out_of_space() else None
        return HirzebruchReport(self, glue, verdict, tuple(self.diagnostics()))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "s": [[{"point": list(m), "coeff": format_rational(v)} for m, v in sorted(si.items())] for si in self.s],
            "c": format_rational(self.c),
        }


@dataclass(frozen=True)
class HirzebruchReport:
    family: HirzebruchFamily
    gluing: GluingReport
    common_zero: CommonZeroVerdict | None
    diagnostics: tuple[str, ...]

    @property
    def accepted(self) -> bool:
        return (
            not self.diagnostics
            and self.gluing.passed
            and self.common_zero is not None
            and self.common_zero.status == NO_COMMON_ZERO
        )

    def to_json(self) -> dict:
        return {
            "family": self.family.to_json(),
            "accepted": self.accepted,
            "diagnostics": list(self.diagnostics),
            "gluing": self.gluing.to_json(),
            "common_zero": self.common_zero.to_json() if self.common_zero is not None else None,
        }


def random_hirzebruch(rng: random.Random, n: int, d: int, *, coeff_range=(-3, 3), zero_s0: bool = False) -> HirzebruchFamily:
    """Random s_i and c; s_0 and c are nonzero unless ``zero_s0``."""
    spec = p1_split_spec(n, d)

    def nonzero():
        v = 0
        while not v:
            v = rng.randint(*coeff_range)
        return v

    s = []
    for i in range(d + 1):
        pts = lattice_points(polytope_of(spec.slot_divisor(1, (d - i, i))))
        if i == 0:
            s.append({} if zero_s0 else {pts[0]: nonzero()})
        else:
            s.append({m: rng.randint(*coeff_range) for m in pts})
    return HirzebruchFamily(n, d, tuple(s), nonzero())


# -- a lower-triangular family on P^2 ------------------------------------------------


PP2_DEGREES = (0, 2, 4)
PP2_SLOTS = {
    "a": (2, (0, 0, 2)),
    "b": (2, (0, 1, 1)),
    "c": (1, (0, 0, 2)),
    "d": (1, (0, 2, 0)),
    "e": (1, (0, 1, 1)),
    "f": (1, (1, 0, 1)),
    "g": (1, (1, 1, 0)),
}
PP2_CONSTANTS = {"c1": (1, (2, 0, 0)), "c2": (2, (0, 2, 0)), "c3": (3, (0, 0, 2))}
# A count that circulates for this family; it disagrees with the section-space dimensions.
PP2_REFERENCE_PRODUCT = 714_420_000


def pp2_spec() -> SplitBundleSpec:
    """O + O(2) + O(4) on P^2 with q = d = 2."""
    fan = projective_space(2)
    return SplitBundleSpec(fan, tuple(ToricDivisor(fan, (k, 0, 0)) for k in PP2_DEGREES), 2, 2)


@dataclass(frozen=True)
class PP2Dimensions:
    dims: dict[str, int]
    family: FamilyDimension

    @property
    def product(self) -> int:
        return self.family.product_of_dims

    @property
    def matches_reference(self) -> bool:
        return self.product == PP2_REFERENCE_PRODUCT

    def to_json(self) -> dict:
        return {
            "dims": self.dims,
            "sum": self.family.sum_dim,
            "product": self.product,
            "reference_product": PP2_REFERENCE_PRODUCT,
            "matches_reference": self.matches_reference,
        }


def pp2_dimensions() -> PP2Dimensions:
    spec = pp2_spec()
    fam = family_dimension(spec, PP2_SLOTS.values())
    dims = {name: fam.dims[slot] for name, slot in PP2_SLOTS.items()}
    return PP2Dimensions(dims, fam)


def pp2_family(rng: random.Random | None = None, constants: Sequence = (1, 1, 1), coeff_range=(-3, 3)) -> BasedMapData:
    """A member of the family: random slot sections (all ones without ``rng``) and constants c_1..c_3."""
    spec = pp2_spec()
    sections: dict[Slot, Section] = {}
    for ell, lam in PP2_SLOTS.values():
        pts = lattice_points(polytope_of(spec.slot_divisor(ell, lam)))
        sections[(ell, lam)] = {m: (rng.randint(*coeff_range) if rng else 1) for m in pts}
    for (ell, lam), c in zip(PP2_CONSTANTS.values(), constants):
        sections[(ell, lam)] = {(0, 0): c}
    return BasedMapData(spec, sections)
