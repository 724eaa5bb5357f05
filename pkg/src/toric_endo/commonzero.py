"""Deciding whether fiber forms f_1..f_r have a common zero over a chart.

Pipeline per chart: a triangular elimination test, then (r = 2) the exact
resultant of the two binary forms, then (r > 2) Bezout tests on the fibre
over the torus-fixed point. Witnesses are exact: base points may be
algebraic numbers and are carried in a sympy algebraic field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import sympy as sp

from .fiber import FiberPoly

NO_COMMON_ZERO = "no_common_zero"
COMMON_ZERO_FOUND = "common_zero_found"
INCONCLUSIVE = "inconclusive"

TRIANGULAR = "triangular"
RESULTANT = "resultant"
BEZOUT = "fixed_point_bezout"


@dataclass(frozen=True)
class Witness:
    chart: object
    base_point: tuple
    field_generator: object = None
    fiber_point: tuple | None = None
    fiber_factor: object = None
    subspace: tuple[int, ...] | None = None
    vanishing: tuple[int, ...] | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "chart": _label(self.chart),
            "base_point": [str(v) for v in self.base_point],
        }
        if self.field_generator is not None:
            out["field"] = str(self.field_generator)
        if self.fiber_point is not None:
            out["fiber_point"] = [str(v) for v in self.fiber_point]
        if self.fiber_factor is not None:
            out["fiber_factor"] = str(self.fiber_factor.as_expr())
        if self.subspace is not None:
            out["subspace"] = [i + 1 for i in self.subspace]
            out["vanishing"] = [i + 1 for i in self.vanishing]
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class ChartVerdict:
    chart: object
    status: str
    method: str
    order: tuple[int, ...] | None = None
    resultant: object = None
    witness: Witness | None = None

    def to_json(self) -> dict:
        out = {"chart": _label(self.chart), "status": self.status, "method": self.method}
        if self.order is not None:
            out["elimination_order"] = [i + 1 for i in self.order]
        if self.resultant is not None:
            out["resultant"] = str(self.resultant)
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


@dataclass(frozen=True)
class CommonZeroVerdict:
    status: str
    method: str
    charts: tuple[ChartVerdict, ...] = field(default=())

    @property
    def witness(self) -> Witness | None:
        return next((c.witness for c in self.charts if c.witness is not None), None)

    def to_json(self) -> dict:
        out = {"status": self.status, "method": self.method, "charts": [c.to_json() for c in self.charts]}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _label(chart):
    return list(chart) if isinstance(chart, tuple) else chart


# -- stage 1 -----------------------------------------------------------------


def triangular_order(polys: Sequence[FiberPoly]) -> tuple[int, ...] | None:
    """Greedy elimination: find f that, with the already-forced coordinates
    set to zero, is c * z_k^d for a nonzero constant c; then z_k is forced
    to vanish. Returns the forced order of z indices if all are forced.
    """
    r = polys[0].nz if polys else 0
    forced: list[int] = []
    while len(forced) < r:
        alive = [i for i in range(r) if i not in forced]
        step = None
        for f in polys:
            if f.degree < 1:
                continue
            g = f.restrict_to(alive)
            support = g.support()
            if len(support) != 1:
                continue
            lam = support[0]
            nonzero = [i for i, v in enumerate(lam) if v]
            if len(nonzero) == 1 and g.extract_coeff(lam).is_constant():
                step = nonzero[0]
                break
        if step is None:
            return None
        forced.append(step)
    return tuple(forced)


# -- stage 2 -----------------------------------------------------------------


def _syms(names: Sequence[str]):
    return sp.symbols(list(names)) if names else []


def _binary_coeffs(f: FiberPoly, syms) -> list:
    """[z1^d], [z1^{d-1} z2], ..., [z2^d] as sympy expressions."""
    d = f.degree
    return [f.extract_coeff((d - i, i)).to_sympy(syms) for i in range(d + 1)]


def sylvester_resultant(f1: FiberPoly, f2: FiberPoly, syms):
    """Resultant of two binary forms with their formal degrees."""
    a, b = _binary_coeffs(f1, syms), _binary_coeffs(f2, syms)
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    if size == 0:
        return sp.Integer(1)
    rows = []
    for i in range(n):
        rows.append([0] * i + a + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + b + [0] * (size - n - 1 - i))
    return sp.expand(sp.Matrix(rows).det(method="berkowitz"))


def _grid():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def _find_base_point(res, syms):
    """An exact zero of a polynomial; returns (values, generator or None)."""
    if not syms:
        return (), None
    poly = sp.Poly(res, *syms)
    if poly.is_zero:
        return tuple(sp.Integer(0) for _ in syms), None
    var = next(i for i, s in enumerate(syms) if poly.degree(s) > 0)
    others = [i for i in range(len(syms)) if i != var]
    for combo in itertools.islice(_tuples(len(others)), 5000):
        subs = {syms[i]: v for i, v in zip(others, combo)}
        uni = sp.Poly(res.subs(subs), syms[var])
        if uni.is_zero:
            point = [subs.get(s, sp.Integer(0)) for s in syms]
            return tuple(point), None
        if uni.degree() < 1:
            continue
        _, factors = uni.factor_list()
        factors = sorted((p for p, _ in factors), key=lambda p: (p.degree(), str(p.as_expr())))
        p = factors[0]
        if p.degree() == 1:
            c1, c0 = p.all_coeffs()
            root, gen = -c0 / c1, None
        else:
            root = sp.CRootOf(p.as_expr(), 0)
            gen = root
        point = [subs.get(s, sp.Integer(0)) for s in syms]
        point[var] = root
        return tuple(point), gen
    raise RuntimeError("no base point found on the search grid")


def _tuples(k: int):
    if k == 0:
        yield ()
        return
    bound = 0
    seen = set()
    while True:
        vals = list(itertools.islice(_grid(), 2 * bound + 1))
        for combo in itertools.product(vals, repeat=k):
            if combo not in seen:
                seen.add(combo)
                yield tuple(sp.Integer(v) for v in combo)
        bound += 1


def _field(gen):
    return sp.QQ if gen is None else sp.QQ.algebraic_field(gen)


_THETA = sp.Dummy("theta")


def _to_field(K, value, gen=None):
    """Value as an element of K; expressions in the generator go through Horner."""
    value = sp.sympify(value)
    if gen is None or not value.has(gen):
        return K.from_sympy(value)
    poly = sp.Poly(value.subs(gen, _THETA), _THETA, domain=sp.QQ)
    theta = K.from_sympy(gen)
    out = K.zero
    for c in poly.all_coeffs():
        out = out * theta + K.convert(c)
    return out


def _eval_coeff(K, poly, point):
    total = K.zero
    for e, c in poly.terms().items():
        term = K.convert(sp.Rational(c.numerator, c.denominator))
        for v, k in zip(point, e):
            if k < 0:
                term = term / v ** (-k)
            elif k:
                term = term * v ** k
        total = total + term
    return total


def _specialize(K, f: FiberPoly, point) -> list:
    """Coefficients of the binary form f at a base point, in K, from z1^d down."""
    d = f.degree
    return [_eval_coeff(K, f.extract_coeff((d - i, i)), point) for i in range(d + 1)]


def _fiber_zero(K, forms: list[list]):
    """Common zero on P^1 of binary forms with coefficients in K.

    Returns (point, None) with an exact point, (None, factor) with an
    irreducible factor of the common part over K, or (None, None).
    """
    if all(K.is_zero(c[0]) for c in forms):
        return (K.one, K.zero), None
    w = sp.Symbol("w")
    g = None
    for c in forms:
        # Dehomogenize at z2 = 1: sum c_i w^{d-i}.
        p = sp.Poly.from_list(list(c), w, domain=K)
        g = p if g is None else g.gcd(p)
    if g is None or g.degree() < 1:
        if g is not None and g.is_zero:
            return (K.zero, K.one), None
        return None, None
    _, factors = g.factor_list()
    factors = sorted((p for p, _ in factors), key=lambda p: p.degree())
    p = factors[0]
    if p.degree() == 1:
        c1, c0 = p.rep.to_list()
        return (K.zero - c0 / c1, K.one), None
    return None, p


def _resultant_chart(chart, polys, names) -> ChartVerdict:
    syms = _syms(names)
    res = sylvester_resultant(polys[0], polys[1], syms)
    if res != 0 and (not syms or sp.Poly(res, *syms).is_ground):
        return ChartVerdict(chart, NO_COMMON_ZERO, RESULTANT, resultant=res)
    point, gen = _find_base_point(res, syms)
    K = _field(gen)
    kpoint = tuple(_to_field(K, v, gen) for v in point)
    forms = [_specialize(K, f, kpoint) for f in polys]
    fiber, factor = _fiber_zero(K, forms)
    witness = Witness(
        chart,
        tuple(point),
        gen,
        tuple(K.to_sympy(v) for v in fiber) if fiber is not None else None,
        factor,
        note="resultant vanishes at the base point",
    )
    return ChartVerdict(chart, COMMON_ZERO_FOUND, RESULTANT, resultant=res, witness=witness)


# -- stage 3 -----------------------------------------------------------------


def _bezout_chart(chart, polys, names) -> ChartVerdict:
    r = polys[0].nz
    origin = (Fraction(0),) * len(names)
    at_fixed = []
    for f in polys:
        coeffs = {lam: c.evaluate(origin) if c.is_polynomial() else None for lam, c in f.coeffs().items()}
        at_fixed.append(coeffs)
    for size in range(1, r + 1):
        for subset in itertools.combinations(range(r), size):
            inside = set(subset)
            vanishing = tuple(
                ell
                for ell, coeffs in enumerate(at_fixed)
                if all(v == 0 for lam, v in coeffs.items() if all(k == 0 or i in inside for i, k in enumerate(lam)))
            )
            # size - 1 is the projective dimension of the coordinate subspace.
            if len(vanishing) >= r - (size - 1):
                fiber = tuple(sp.Integer(int(i == subset[0])) for i in range(r)) if size == 1 else None
                witness = Witness(
                    chart,
                    tuple(sp.Integer(0) for _ in names),
                    None,
                    fiber,
                    None,
                    subset,
                    vanishing,
                    note="Bezout on a coordinate subspace over the torus-fixed point",
                )
                return ChartVerdict(chart, COMMON_ZERO_FOUND, BEZOUT, witness=witness)
    return ChartVerdict(chart, INCONCLUSIVE, BEZOUT)


# -- driver --------------------------------------------------------------------


def no_common_zero_charts(charts: Mapping[object, Sequence[FiberPoly]], names: Sequence[str]) -> CommonZeroVerdict:
    results = []
    for chart, polys in charts.items():
        polys = list(polys)
        order = triangular_order(polys)
        if order is not None:
            results.append(ChartVerdict(chart, NO_COMMON_ZERO, TRIANGULAR, order=order))
        elif len(polys) == 2 and polys[0].nz == 2:
            results.append(_resultant_chart(chart, polys, names))
        else:
            results.append(_bezout_chart(chart, polys, names))
    return _combine(results)


def _combine(results: list[ChartVerdict]) -> CommonZeroVerdict:
    rank = {TRIANGULAR: 0, RESULTANT: 1, BEZOUT: 2}
    method = max((c.method for c in results), key=rank.__getitem__, default=TRIANGULAR)
    found = [c for c in results if c.status == COMMON_ZERO_FOUND]
    if found:
        return CommonZeroVerdict(COMMON_ZERO_FOUND, found[0].method, tuple(results))
    if any(c.status == INCONCLUSIVE for c in results):
        return CommonZeroVerdict(INCONCLUSIVE, BEZOUT, tuple(results))
    return CommonZeroVerdict(NO_COMMON_ZERO, method, tuple(results))


def verify_witness(polys: Sequence[FiberPoly], witness: Witness) -> bool:
    """Exactly re-check that the witness is a common zero of the given forms."""
    if witness.subspace is not None:
        r = polys[0].nz
        inside = set(witness.subspace)
        origin = (Fraction(0),) * len(witness.base_point)
        count = 0
        for f in polys:
            if all(
                c.evaluate(origin) == 0
                for lam, c in f.coeffs().items()
                if all(k == 0 or i in inside for i, k in enumerate(lam))
            ):
                count += 1
        return count >= r - (len(inside) - 1)
    K = _field(witness.field_generator)
    gen = witness.field_generator
    point = tuple(_to_field(K, v, gen) for v in witness.base_point)
    if witness.fiber_point is not None:
        z = tuple(_to_field(K, v, gen) for v in witness.fiber_point)
        if all(K.is_zero(v) for v in z):
            return False
        for f in polys:
            total = K.zero
            for lam, c in f.coeffs().items():
                term = _eval_coeff(K, c, point)
                for v, k in zip(z, lam):
                    term = term * v ** k
                total = total + term
            if not K.is_zero(total):
                return False
        return True
    if witness.fiber_factor is not None:
        w = witness.fiber_factor.gens[0]
        for f in polys:
            p = sp.Poly.from_list(_specialize(K, f, point), w, domain=K)
            if not p.rem(witness.fiber_factor).is_zero:
                return False
        return True
    return False
