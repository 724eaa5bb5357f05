"""Compatibility conditions across a wall and nonexistence certificates.

Indices in reports are 1-based: ``j`` and ``k`` refer to the wall rays
v_1..v_{n-1} in the fan's ray order, and ``j = n`` refers to the last
(``y``) direction. Internally the wall vector is sorted ascending; the
permutation is recorded and every reported object is mapped back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .compositions import Composition, compositions, poset_leq, unit
from .errors import DegreeTooSmall, HypothesisUnmet, InputError, VariableMismatch
from .fiber import FiberPoly
from .laurent import Exponents, LaurentPoly, base_names, format_rational
from .lattice import Fan, Wall, WallRelation, find_walls, wall_relation
from .semigroup import SemigroupRing, semigroup_member
from .transition import (
    COTANGENT,
    TANGENT,
    closed_form_coeff,
    cotangent_jacobian,
    sym_action,
    tangent_jacobian,
)


def sigma_names(n: int) -> tuple[str, ...]:
    """Coordinates u1..un of the chart on the other side of the wall."""
    return tuple(f"u{i}" for i in range(1, n + 1))


def sigma_to_xy(a: Sequence[int]):
    """Exponent map u^e -> x^{e°} y^{-a.e° - e_n} (u_i = x_i y^{-a_i}, u_n = y^{-1})."""
    a = tuple(a)

    def fn(e):
        return tuple(e[:-1]) + (-sum(ai * ei for ai, ei in zip(a, e[:-1])) - e[-1],)

    return fn


def xy_to_sigma(a: Sequence[int]):
    """Inverse map x^al y^b -> u^al u_n^{-a.al - b}; the exponent map is an involution."""
    return sigma_to_xy(a)


def _convert(f: FiberPoly, fn, names) -> FiberPoly:
    return f.map_coeffs(lambda c: c.map_exponents(fn, names), names)


def _mono(names, exps, c=1) -> LaurentPoly:
    return LaurentPoly.monomial(names, exps, c)


def _frob_shift(n: int, i: int | None, dx: int, dy: int) -> Exponents:
    e = [0] * n
    if i is not None:
        e[i] += dx
    e[-1] += dy
    return tuple(e)


@dataclass(frozen=True)
class CompatInstance:
    a: tuple[int, ...]
    d: int
    f: tuple[FiberPoly, ...]
    g: tuple[FiberPoly, ...]
    bundle_kind: str

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "g", tuple(self.g))
        n = len(self.a) + 1
        if self.bundle_kind not in (TANGENT, COTANGENT):
            raise InputError(f"bundle kind must be {TANGENT} or {COTANGENT}")
        if len(self.f) != n or len(self.g) != n:
            raise InputError(f"need {n} components of f and g")
        for p in self.f:
            if p.base != base_names(n) or p.nz != n or (p and p.degree != self.d):
                raise VariableMismatch("f must be degree-d forms in z1..zn over x1..x{n-1}, y")
        for p in self.g:
            if p.base != sigma_names(n) or p.nz != n or (p and p.degree != self.d):
                raise VariableMismatch("g must be degree-d forms in z1..zn over u1..un")

    @property
    def n(self) -> int:
        return len(self.a) + 1

    def to_json(self) -> dict:
        return {
            "kind": self.bundle_kind,
            "a": list(self.a),
            "d": self.d,
            "f": [str(p) for p in self.f],
            "g": [str(p) for p in self.g],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CompatInstance":
        try:
            a = tuple(int(v) for v in obj["a"])
            d = int(obj["d"])
            kind = obj["kind"]
            n = len(a) + 1
            f = [FiberPoly.parse(t, base_names(n), n, d) for t in obj["f"]]
            g = obj.get("g")
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"compat instance JSON is malformed: {exc}") from None
        if g is None:
            g = compat_targets(kind, a, f)
        else:
            g = [FiberPoly.parse(t, sigma_names(n), n, d) for t in g]
        return cls(a, d, tuple(f), tuple(g), kind)


def compat_targets(kind: str, a: Sequence[int], f: Sequence[FiberPoly]) -> list[FiberPoly]:
    """Solve the compatibility equations for g, written in sigma-chart coordinates."""
    a = tuple(a)
    n = len(a) + 1
    names = base_names(n)
    d = next((p.degree for p in f if p), f[0].degree)
    if kind == TANGENT:
        J = tangent_jacobian(a)
        sf = [sym_action(J, p) for p in f]
        g = [sf[j].scale(_mono(names, _frob_shift(n, None, 0, d * a[j]))) for j in range(n - 1)]
        gn = -sf[-1].scale(_mono(names, _frob_shift(n, None, 0, 2 * d)))
        for i in range(n - 1):
            gn = gn - sf[i].scale(_mono(names, _frob_shift(n, i, d, d), a[i]))
        g.append(gn)
    elif kind == COTANGENT:
        J = cotangent_jacobian(a)
        sf = [sym_action(J, p) for p in f]
        gn = -sf[-1].scale(_mono(names, _frob_shift(n, None, 0, -2 * d)))
        g = []
        for j in range(n - 1):
            inner = sf[j] + gn.scale(_mono(names, _frob_shift(n, j, d, d), a[j]))
            g.append(inner.scale(_mono(names, _frob_shift(n, None, 0, -d * a[j]))))
        g.append(gn)
    else:
        raise InputError(f"unknown bundle kind {kind!r}")
    return [_convert(p, xy_to_sigma(a), sigma_names(n)) for p in g]


@dataclass(frozen=True)
class CompatReport:
    passed: bool
    residuals: tuple[FiberPoly, ...]
    g_regular: tuple[bool, ...]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "residuals": [str(r) for r in self.residuals],
            "g_regular": list(self.g_regular),
        }


def _verify(inst: CompatInstance, kind: str) -> CompatReport:
    if inst.bundle_kind != kind:
        raise InputError(f"instance is {inst.bundle_kind}, expected {kind}")
    n = inst.n
    names = base_names(n)
    expected = [_convert(p, sigma_to_xy(inst.a), names) for p in compat_targets(kind, inst.a, inst.f)]
    given = [_convert(p, sigma_to_xy(inst.a), names) for p in inst.g]
    residuals = tuple(g - e for g, e in zip(given, expected))
    regular = tuple(all(c.is_polynomial() for _, c in p.items()) for p in inst.g)
    return CompatReport(all(r.is_zero() for r in residuals), residuals, regular)


def verify_compat_tangent(inst: CompatInstance) -> CompatReport:
    return _verify(inst, TANGENT)


def verify_compat_cotangent(inst: CompatInstance) -> CompatReport:
    return _verify(inst, COTANGENT)


def verify_compat(inst: CompatInstance) -> CompatReport:
    return _verify(inst, inst.bundle_kind)


# -- certificates -----------------------------------------------------------


@dataclass(frozen=True)
class ObstructionCheck:
    case: str
    lam: Composition
    j: int
    monomial: Exponents
    coefficient: Fraction
    in_ring: bool
    isolated: bool
    eta: Composition | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.coefficient != 0 and not self.in_ring and self.isolated

    def to_json(self) -> dict:
        out = {
            "case": self.case,
            "lambda": list(self.lam),
            "j": self.j,
            "monomial": {"x": list(self.monomial[:-1]), "y": self.monomial[-1]},
            "coeff": format_rational(self.coefficient),
            "in_ring": self.in_ring,
            "isolated": self.isolated,
        }
        if self.eta is not None:
            out["eta"] = list(self.eta)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class NonexistenceCertificate:
    a: tuple[int, ...]
    d: int
    bundle_kind: str
    m_split: int
    k: int | None
    permutation: tuple[int, ...]
    checks: tuple[ObstructionCheck, ...]
    wall: Wall | None = None

    @property
    def failures(self) -> list[ObstructionCheck]:
        return [c for c in self.checks if not c.passed]

    @property
    def valid(self) -> bool:
        return bool(self.checks) and not self.failures

    @property
    def verdict(self) -> str:
        return "valid" if self.valid else "invalid"

    @property
    def reason(self) -> str:
        if self.valid:
            return ""
        c = self.failures[0]
        what = "zero coefficient" if c.coefficient == 0 else "monomial lies in the chart ring" if c.in_ring else "not isolated"
        return f"{len(self.failures)} failing check(s); first: case {c.case}, lambda {list(c.lam)}, j={c.j}: {what}"

    def to_json(self) -> dict:
        out = {
            "wall": self.wall.to_json() if self.wall else None,
            "a": list(self.a),
            "d": self.d,
            "kind": self.bundle_kind,
            "m_split": self.m_split,
            "k": self.k,
            "permutation": list(self.permutation),
            "checks": [c.to_json() for c in self.checks],
            "verdict": self.verdict,
        }
        if not self.valid:
            out["reason"] = self.reason
        return out


class _Relabel:
    """Sorted-to-original bookkeeping for a wall vector."""

    def __init__(self, a: Sequence[int]):
        self.a = tuple(a)
        self.n = len(self.a) + 1
        self.perm = tuple(sorted(range(len(self.a)), key=lambda i: (self.a[i], i)))
        self.s = tuple(self.a[p] for p in self.perm)

    def vec(self, v: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.n
        for i, p in enumerate(self.perm):
            out[p] = v[i]
        out[-1] = v[-1]
        return tuple(out)

    def index(self, j: int) -> int:
        """0-based sorted index -> 1-based original index."""
        return self.perm[j] + 1 if j < self.n - 1 else self.n


def _shift(e: Exponents, delta: Sequence[int]) -> Exponents:
    return tuple(x + y for x, y in zip(e, delta))


def _unique(target: Exponents, label, family: dict) -> bool:
    return all(m != target or lab == label for lab, m in family.items())


def _cj_family(s, eta, n, d, j) -> dict:
    fam = {}
    for mu in compositions(d, n):
        if poset_leq(mu, eta):
            c, m = closed_form_coeff(mu, eta, s)
            if c:
                fam[("f", j, mu)] = _shift(m, _frob_shift(n, None, 0, d * s[j]))
    return fam


def _cn_family(s, eta, n, d) -> dict:
    fam = {}
    for mu in compositions(d, n):
        if not poset_leq(mu, eta):
            continue
        c, m = closed_form_coeff(mu, eta, s)
        if not c:
            continue
        fam[("f", n - 1, mu)] = _shift(m, _frob_shift(n, None, 0, 2 * d))
        for i in range(n - 1):
            if s[i]:
                fam[("f", i, mu)] = _shift(m, _frob_shift(n, i, d, d))
    return fam


def tangent_certificate(rel, d: int, wall: Wall | None = None) -> NonexistenceCertificate:
    a = tuple(rel.a if isinstance(rel, WallRelation) else rel)
    if d < 2:
        raise DegreeTooSmall("certificates need relative degree d >= 2 (d = 1 is the automorphism regime)")
    if not any(a):
        raise HypothesisUnmet("every wall coefficient is zero; this is the (P^1)^n situation")
    R = _Relabel(a)
    s, n = R.s, R.n
    ring = SemigroupRing(s)
    m = sum(1 for v in s if v <= 0)
    k = next(i for i, v in enumerate(s) if v != 0)
    last = n - 1
    checks = []
    for head in compositions(d, m + 1):
        lam = tuple(head[:m]) + (0,) * (n - 1 - m) + (head[m],)
        ln = lam[-1]
        pure_n = ln == d
        for j in range(m, n):
            if not pure_n:
                eta = list(lam)
                eta[k] += ln
                eta[last] -= ln
                eta = tuple(eta)
                c, mono = closed_form_coeff(lam, eta, s)
                if j < last:
                    case = "T1"
                    target = _shift(mono, _frob_shift(n, None, 0, d * s[j]))
                    fam = _cj_family(s, eta, n, d, j)
                    label = ("f", j, lam)
                    y_formula = -sum(ai * li for ai, li in zip(s, lam[:-1])) - ln + d * s[j]
                else:
                    case = "T3"
                    target = _shift(mono, _frob_shift(n, None, 0, 2 * d))
                    fam = _cn_family(s, eta, n, d)
                    label = ("f", last, lam)
                    y_formula = -sum(ai * li for ai, li in zip(s, lam[:-1])) - ln + 2 * d
                expected = [0] * n
                expected[k] = ln
                expected[-1] = -s[k] * ln + y_formula
                assert tuple(expected) == target, (case, lam, j)
            elif j < last:
                case = "T2"
                eta = unit(n, k, d)
                c, mono = closed_form_coeff(lam, eta, s)
                target = _shift(mono, _frob_shift(n, j, d, d))
                fam = _cn_family(s, eta, n, d)
                label = ("f", j, lam)
            else:
                case = "T4"
                eta = tuple(1 if i == k else 0 for i in range(n - 1)) + (d - 1,)
                c, mono = closed_form_coeff(lam, eta, s)
                target = _shift(mono, _frob_shift(n, None, 0, 2 * d))
                fam = _cn_family(s, eta, n, d)
                label = ("f", last, lam)
            member = semigroup_member(target, ring)
            checks.append(
                ObstructionCheck(
                    case=case,
                    lam=R.vec(lam),
                    j=R.index(j),
                    monomial=R.vec(target),
                    coefficient=c,
                    in_ring=member.member,
                    isolated=_unique(target, label, fam),
                    eta=R.vec(eta),
                )
            )
    return NonexistenceCertificate(a, d, TANGENT, m, R.index(k), R.perm, tuple(checks), wall)


def cotangent_certificate(rel, d: int, wall: Wall | None = None) -> NonexistenceCertificate:
    a = tuple(rel.a if isinstance(rel, WallRelation) else rel)
    if d < 2:
        raise DegreeTooSmall("certificates need relative degree d >= 2 (d = 1 is the automorphism regime)")
    if not a or min(a) >= 0:
        raise HypothesisUnmet("no negative wall coefficient; the nef case is not certified here")
    R = _Relabel(a)
    s, n = R.s, R.n
    ring = SemigroupRing(s)
    m = sum(1 for v in s if v <= 0)
    s1 = s[0]
    checks = []
    for lam in compositions(d, n):
        if lam == unit(n, 0, d):
            continue
        target = tuple(lam[:-1]) + (d - d * s1 + lam[-1],)
        coeff = Fraction((-1) ** d)
        for ai, li in zip(s, lam[:-1]):
            coeff *= ai ** li if li else 1
        # f_n contributions carry x_1^d; a first-term x_1 exponent below d cannot cancel.
        blocked = lam[0] < d
        checks.append(
            ObstructionCheck(
                case="C1",
                lam=R.vec(lam),
                j=R.index(0),
                monomial=R.vec(target),
                coefficient=coeff,
                in_ring=semigroup_member(target, ring).member,
                isolated=blocked,
                note="x_1 exponent below d rules out cancellation against the f_n terms",
            )
        )
    lam = unit(n, 0, d)
    target = _frob_shift(n, 0, 1, -s1 + 1)
    families = {
        "y^(2-a_1) [z_1^(d-1) z_n] f_1": _frob_shift(n, None, 0, -s1 + 2),
        "x_1^d y^(2-a_1-d) [z_1^(d-1) z_n] f_n": _frob_shift(n, 0, d, -s1 + 2 - d),
        "x_1^(d+1) y^(1-a_1-d) [z_1^d] f_n": _frob_shift(n, 0, d + 1, -s1 + 1 - d),
    }
    for i in range(1, n - 1):
        if s[i]:
            families[f"x_{i + 1} y^(1-a_1) [z_1^(d-1) z_{i + 1}] f_1"] = _frob_shift(n, i, 1, -s1 + 1)
            base = list(_frob_shift(n, 0, d, -s1 + 1 - d))
            base[i] += 1
            families[f"x_1^d x_{i + 1} y^(1-a_1-d) [z_1^(d-1) z_{i + 1}] f_n"] = tuple(base)
    # A family with polynomial coefficients can reach the target only if its
    # base monomial divides the target.
    reachable = [name for name, e in families.items() if all(b <= t for b, t in zip(e, target))]
    checks.append(
        ObstructionCheck(
            case="C2",
            lam=R.vec(lam),
            j=R.index(0),
            monomial=R.vec(target),
            coefficient=Fraction(-d * s1),
            in_ring=semigroup_member(target, ring).member,
            isolated=not reachable,
            note="cancellation excluded by exponent comparison" if not reachable else "reachable: " + "; ".join(reachable),
        )
    )
    return NonexistenceCertificate(a, d, COTANGENT, m, R.index(0), R.perm, tuple(checks), wall)


@dataclass(frozen=True)
class WallResult:
    wall: Wall
    a: tuple[int, ...]
    certificate: NonexistenceCertificate | None
    status: str
    reason: str = ""

    def to_json(self) -> dict:
        out = {"wall": self.wall.to_json(), "a": list(self.a), "status": self.status}
        if self.reason:
            out["reason"] = self.reason
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


@dataclass(frozen=True)
class VarietyReport:
    bundle_kind: str
    d: int
    walls: tuple[WallResult, ...]

    @property
    def verdict(self) -> str:
        if any(w.status == "valid" for w in self.walls):
            return "valid"
        if all(w.status == "hypothesis_unmet" for w in self.walls):
            return "no_applicable_wall"
        return "invalid"

    @property
    def certificate(self) -> NonexistenceCertificate | None:
        return next((w.certificate for w in self.walls if w.status == "valid"), None)

    def to_json(self) -> dict:
        return {
            "kind": self.bundle_kind,
            "d": self.d,
            "verdict": self.verdict,
            "walls": [w.to_json() for w in self.walls],
        }


def certify_wall(rel, d: int, bundle_kind: str, wall: Wall | None = None) -> NonexistenceCertificate:
    if bundle_kind == TANGENT:
        return tangent_certificate(rel, d, wall)
    if bundle_kind == COTANGENT:
        return cotangent_certificate(rel, d, wall)
    raise InputError(f"unknown bundle kind {bundle_kind!r}")


def certify_variety(fan: Fan, bundle_kind: str, d: int) -> VarietyReport:
    if d < 2:
        raise DegreeTooSmall("certificates need relative degree d >= 2 (d = 1 is the automorphism regime)")
    results = []
    for wall in find_walls(fan):
        a = wall_relation(fan, wall).a
        try:
            cert = certify_wall(a, d, bundle_kind, wall)
        except HypothesisUnmet as exc:
            results.append(WallResult(wall, a, None, "hypothesis_unmet", str(exc)))
            continue
        results.append(WallResult(wall, a, cert, cert.verdict, cert.reason))
    return VarietyReport(bundle_kind, d, tuple(results))
