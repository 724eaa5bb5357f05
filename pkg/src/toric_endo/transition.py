"""Transition Jacobians across a wall and the induced action on fiber forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .compositions import Composition, compositions, multinomial, poset_leq, power, truncate, unit
from .errors import DegreeMismatch, InputError, PosetViolation, VariableMismatch
from .fiber import FiberPoly
from .laurent import Exponents, LaurentPoly, base_names
from .lattice import WallRelation

TANGENT = "tangent"
COTANGENT = "cotangent"
SPLIT_DIAGONAL = "split_diagonal"
GENERIC = "generic"


def _a(rel) -> tuple[int, ...]:
    return tuple(rel.a if isinstance(rel, WallRelation) else rel)


@dataclass(frozen=True)
class TransitionMatrix:
    entries: tuple[tuple[LaurentPoly, ...], ...]
    kind: str = GENERIC

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise InputError("transition matrix must be square")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def names(self) -> tuple[str, ...]:
        return self.entries[0][0].names

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "TransitionMatrix") -> "TransitionMatrix":
        n = self.n
        zero = LaurentPoly.zero(self.names)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(tuple(row))
        return TransitionMatrix(tuple(out))

    def transpose(self) -> "TransitionMatrix":
        return TransitionMatrix(tuple(zip(*self.entries)), self.kind)

    def det(self) -> LaurentPoly:
        n = self.n
        total = LaurentPoly.zero(self.names)
        for perm in permutations(range(n)):
            term = LaurentPoly.constant(self.names, _perm_sign(perm))
            for i, j in enumerate(perm):
                term = term * self.entries[i][j]
                if not term:
                    break
            total = total + term
        return total

    def is_identity(self) -> bool:
        return all(self.entries[i][j] == int(i == j) for i in range(self.n) for j in range(self.n))

    def rows_as_text(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.entries]

    @classmethod
    def identity(cls, names: Sequence[str], n: int) -> "TransitionMatrix":
        return cls.diagonal([LaurentPoly.one(names)] * n)

    @classmethod
    def diagonal(cls, diag: Sequence[LaurentPoly]) -> "TransitionMatrix":
        names = diag[0].names
        zero = LaurentPoly.zero(names)
        n = len(diag)
        return cls(tuple(tuple(diag[i] if i == j else zero for j in range(n)) for i in range(n)), SPLIT_DIAGONAL)


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for start in range(len(perm)):
        if start in seen:
            continue
        length, k = 0, start
        while k not in seen:
            seen.add(k)
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def tangent_jacobian(rel) -> TransitionMatrix:
    """Diagonal y^{-a_i}, last column -a_i x_i y^{-a_i-1}, corner -y^{-2}."""
    a = _a(rel)
    n = len(a) + 1
    names = base_names(n)
    zero = LaurentPoly.zero(names)
    rows = [[zero] * n for _ in range(n)]
    for i, ai in enumerate(a):
        rows[i][i] = LaurentPoly.monomial(names, _exp(n, {n - 1: -ai}))
        rows[i][n - 1] = LaurentPoly.monomial(names, _exp(n, {i: 1, n - 1: -ai - 1}), -ai)
    rows[n - 1][n - 1] = LaurentPoly.monomial(names, _exp(n, {n - 1: -2}), -1)
    return TransitionMatrix(tuple(map(tuple, rows)), TANGENT)


def cotangent_jacobian(rel) -> TransitionMatrix:
    """Diagonal y^{a_i}, last row -a_i x_i y, corner -y^2."""
    a = _a(rel)
    n = len(a) + 1
    names = base_names(n)
    zero = LaurentPoly.zero(names)
    rows = [[zero] * n for _ in range(n)]
    for i, ai in enumerate(a):
        rows[i][i] = LaurentPoly.monomial(names, _exp(n, {n - 1: ai}))
        rows[n - 1][i] = LaurentPoly.monomial(names, _exp(n, {i: 1, n - 1: 1}), -ai)
    rows[n - 1][n - 1] = LaurentPoly.monomial(names, _exp(n, {n - 1: 2}), -1)
    return TransitionMatrix(tuple(map(tuple, rows)), COTANGENT)


def _exp(n: int, entries: dict[int, int]) -> Exponents:
    e = [0] * n
    for k, v in entries.items():
        e[k] += v
    return tuple(e)


def sym_action(M: TransitionMatrix, f: FiberPoly) -> FiberPoly:
    """Substitute z_k -> sum_i M[i, k] z_i (column k of M) and expand."""
    if f.nz != M.n:
        raise VariableMismatch(f"matrix is {M.n}x{M.n} but the form has {f.nz} fiber variables")
    if f.base != M.names:
        raise VariableMismatch("matrix and form live over different base variables")
    images = [FiberPoly.linear(M.names, [M.entries[i][k] for i in range(M.n)]) for k in range(M.n)]
    return f.substitute(images)


def closed_form_coeff(mu: Sequence[int], lam: Sequence[int], rel) -> tuple[Fraction, Exponents]:
    """(C, exponent vector of m) with [z^lam] Sym^d J (z^mu) = C * m for mu <= lam."""
    a = _a(rel)
    mu, lam = tuple(mu), tuple(lam)
    n = len(a) + 1
    if len(mu) != n or len(lam) != n:
        raise DegreeMismatch(f"compositions must have {n} parts")
    if not poset_leq(mu, lam):
        raise PosetViolation(f"{mu} is not below {lam}")
    diff = [l - m for l, m in zip(truncate(lam), truncate(mu))]
    c = (-1) ** mu[-1] * multinomial(diff + [lam[-1]])
    for ai, di in zip(a, diff):
        c *= power(ai, di)
    y_exp = -sum(ai * li for ai, li in zip(a, truncate(lam))) - lam[-1] - mu[-1]
    return Fraction(c), tuple(diff) + (y_exp,)


def expansion_via_closed_form(f: FiberPoly, rel) -> FiberPoly:
    """(Sym^d J)(f) = sum_lam z^lam sum_{mu <= lam} C m [z^mu] f."""
    a = _a(rel)
    n = len(a) + 1
    names = base_names(n)
    out = {}
    for lam in compositions(f.degree, n):
        acc = LaurentPoly.zero(names)
        for mu, coeff in f.coeffs().items():
            if poset_leq(mu, lam):
                c, m = closed_form_coeff(mu, lam, a)
                if c:
                    acc = acc + coeff.shift(m).scale(c)
        if acc:
            out[lam] = acc
    return FiberPoly(names, n, f.degree, out)


def cotangent_key_coeffs(f: FiberPoly, rel) -> tuple[LaurentPoly, LaurentPoly]:
    """[z_1^{d-1} z_n] and [z_n^d] of (Sym^d J^dagger)(f), in closed form."""
    a = _a(rel)
    n = len(a) + 1
    d = f.degree
    names = base_names(n)
    if f.nz != n or f.base != names:
        raise VariableMismatch("form does not match the wall's variables")
    if n < 2:
        raise InputError("the cotangent key coefficients need rank at least 2")
    a1 = a[0]
    c1 = LaurentPoly.zero(names)
    if d >= 1:
        inner = f.extract_coeff(_comp(n, {0: d - 1, n - 1: 1})).shift(_exp(n, {n - 1: 1}))
        inner = inner + f.extract_coeff(unit(n, 0, d)).shift(_exp(n, {0: 1})).scale(d * a1)
        # z_1^{d-1} z_i with 1 < i < n also feeds z_1^{d-1} z_n through -a_i x_i y z_n.
        for i in range(1, n - 1):
            inner = inner + f.extract_coeff(_comp(n, {0: d - 1, i: 1})).shift(_exp(n, {i: 1})).scale(a[i])
        c1 = -inner.shift(_exp(n, {n - 1: a1 * (d - 1) + 1}))
    c2 = LaurentPoly.zero(names)
    for lam, coeff in f.coeffs().items():
        c = 1
        for ai, li in zip(a, lam[:-1]):
            c *= power(ai, li)
        if c:
            c2 = c2 + coeff.shift(tuple(lam[:-1]) + (lam[-1],)).scale(c)
    c2 = c2.shift(_exp(n, {n - 1: d})).scale((-1) ** d)
    return c1, c2


def _comp(n: int, entries: dict[int, int]) -> Composition:
    return _exp(n, entries)
