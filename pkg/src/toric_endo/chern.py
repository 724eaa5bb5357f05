"""Chern-class identities for based maps of projective bundles.

Classes live in Q[c]/(c^{dim+1})[L] where c stands for c_1(E). A based map
with fibre degree d and base pullback c_i -> q^i c_i must satisfy

    sum_i (-1)^i (d L + alpha)^{r-i} q^i c_i = d^r sum_i (-1)^i L^{r-i} c_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping

from .errors import InputError
from .laurent import LaurentPoly

LC = ("L", "c")


def _lc(terms: Mapping) -> LaurentPoly:
    return LaurentPoly(LC, terms)


def binomial_chern_table(r: int) -> dict[int, LaurentPoly]:
    """c_k = binom(r, k) c^k / r^k."""
    return {k: _lc({(0, k): Fraction(comb(r, k), r ** k)}) for k in range(r + 1)}


def _table(r: int, chern_table) -> list[LaurentPoly]:
    out = []
    for i in range(r + 1):
        v = chern_table.get(i, 0) if isinstance(chern_table, Mapping) else chern_table[i]
        if isinstance(v, LaurentPoly):
            if v.names != LC:
                v = v.rename(LC) if v.nvars == 2 else LaurentPoly(LC, {(0,) + e: c for e, c in v.terms().items()})
            if any(e[0] for e in v.terms()):
                raise InputError(f"c_{i} must not involve L")
        else:
            v = _lc({(0, i): Fraction(v)})
        out.append(v)
    if out[0] != 1:
        raise InputError("c_0 must be 1")
    return out


def truncate(p: LaurentPoly, dim: int | None) -> LaurentPoly:
    """Kill c^{dim+1}."""
    if dim is None:
        return p
    return LaurentPoly(p.names, {e: v for e, v in p.terms().items() if e[1] <= dim})


def coefficient_in_L(p: LaurentPoly, k: int) -> LaurentPoly:
    return LaurentPoly(LC, {(0, e[1]): v for e, v in p.terms().items() if e[0] == k})


@dataclass(frozen=True)
class TruncatedClassPoly:
    """An element of A(X)[L]/P_E(L) with A(X) = Q[c]/(c^{dim+1})."""

    poly: LaurentPoly
    r: int
    chern: tuple[LaurentPoly, ...]
    dim: int | None = None

    def reduced(self) -> LaurentPoly:
        """Normal form: L-degree below r, c-degree at most dim."""
        p = truncate(self.poly, self.dim)
        L = LaurentPoly.var(LC, "L")
        # L^r = -sum_{i>=1} (-1)^i L^{r-i} c_i
        tail = LaurentPoly.zero(LC)
        for i in range(1, self.r + 1):
            tail = tail - (L ** (self.r - i)) * self.chern[i].scale((-1) ** i)
        while True:
            top = max((e[0] for e in p.terms()), default=-1)
            if top < self.r:
                return truncate(p, self.dim)
            high = LaurentPoly(LC, {(e[0] - self.r, e[1]): v for e, v in p.terms().items() if e[0] == top})
            low = LaurentPoly(LC, {e: v for e, v in p.terms().items() if e[0] != top})
            p = truncate(low + high * tail, self.dim)

    def is_zero(self) -> bool:
        return self.reduced().is_zero()


@dataclass(frozen=True)
class PullbackReport:
    r: int
    d: int
    q: int
    alpha: LaurentPoly
    residuals: dict[int, LaurentPoly]
    reduced_lhs_zero: bool

    @property
    def passed(self) -> bool:
        return all(v.is_zero() for v in self.residuals.values())

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "d": self.d,
            "q": self.q,
            "alpha": str(self.alpha),
            "residuals": {f"L^{k}": str(v) for k, v in sorted(self.residuals.items(), reverse=True)},
            "reduced_lhs_zero": self.reduced_lhs_zero,
            "passed": self.passed,
        }


def pullback_sides(r: int, d: int, q: int, chern_table, alpha: LaurentPoly | None = None):
    cs = _table(r, chern_table)
    c = LaurentPoly.var(LC, "c")
    L = LaurentPoly.var(LC, "L")
    if alpha is None:
        alpha = c.scale(Fraction(q - d, r))
    base = L.scale(d) + alpha
    lhs = LaurentPoly.zero(LC)
    rhs = LaurentPoly.zero(LC)
    for i, ci in enumerate(cs):
        phi_ci = ci.scale(Fraction(q) ** i)
        lhs = lhs + (base ** (r - i)) * phi_ci.scale((-1) ** i)
        rhs = rhs + (L ** (r - i)) * ci.scale((-1) ** i * d ** r)
    return lhs, rhs, alpha, cs


def expand_pullback(r: int, d: int, q: int, chern_table=None, dim: int | None = None,
                    alpha: LaurentPoly | None = None) -> PullbackReport:
    """Residual LHS - RHS at every power of L, with phi^* c_i = q^i c_i."""
    if r < 1:
        raise InputError("rank must be positive")
    if chern_table is None:
        chern_table = binomial_chern_table(r)
    lhs, rhs, alpha, cs = pullback_sides(r, d, q, chern_table, alpha)
    residuals = {k: truncate(coefficient_in_L(lhs - rhs, k), dim) for k in range(r + 1)}
    reduced = TruncatedClassPoly(lhs, r, tuple(cs), dim).is_zero()
    return PullbackReport(r, d, q, alpha, residuals, reduced)


# -- the coefficient lemma ---------------------------------------------------


def symbolic_names(r: int) -> tuple[str, ...]:
    """d, alpha, and p_i standing for phi^* c_i."""
    return ("d", "alpha") + tuple(f"p{i}" for i in range(r + 1))


def lemma_coefficient(r: int, k: int) -> LaurentPoly:
    """sum_{i <= r-k} (-1)^i binom(r-i, k) d^k alpha^{r-k-i} p_i."""
    names = symbolic_names(r)
    out = {}
    for i in range(0, r - k + 1):
        e = [0] * len(names)
        e[0] = k
        e[1] = r - k - i
        e[2 + i] = 1
        out[tuple(e)] = (-1) ** i * comb(r - i, k)
    return LaurentPoly(names, out)


def lemma_coefficient_by_expansion(r: int, k: int) -> LaurentPoly:
    """Coefficient of L^k read off the expanded pullback sum_i (-1)^i (d L + alpha)^{r-i} p_i."""
    names = ("L",) + symbolic_names(r)
    L, d, alpha = (LaurentPoly.var(names, v) for v in ("L", "d", "alpha"))
    total = LaurentPoly.zero(names)
    for i in range(r + 1):
        total = total + ((d * L + alpha) ** (r - i)) * LaurentPoly.var(names, f"p{i}").scale((-1) ** i)
    return LaurentPoly(symbolic_names(r), {e[1:]: v for e, v in total.terms().items() if e[0] == k})


def solve_alpha(r: int, d: int, q: int) -> LaurentPoly:
    """Solve the L^{r-1} equation for alpha (linear), with phi^* c_1 = q c_1."""
    if r < 1 or d == 0:
        raise InputError("need r >= 1 and d != 0")
    coeff = lemma_coefficient(r, r - 1)
    # coeff = r d^{r-1} alpha p0 - d^{r-1} p1; substitute p0 = 1, p1 = q c.
    slope = Fraction(0)
    const = LaurentPoly.zero(LC)
    for e, v in coeff.terms().items():
        scalar = v * Fraction(d) ** e[0]
        if e[1] == 1:
            slope += scalar
        else:
            const = const + _lc({(0, 1): scalar * q})
    rhs = _lc({(0, 1): Fraction(-(d ** r))})
    return (rhs - const).scale(1 / slope)


# -- appendix ----------------------------------------------------------------


def appendix_sum(k: int, d, q):
    return sum((-1) ** i * comb(k + 1, i) * q ** i * (q - d) ** (k + 1 - i) for i in range(k + 1))


def appendix_identity(k: int, d: int, q: int) -> bool:
    """sum_{i<=k} (-1)^i binom(k+1,i) q^i (q-d)^{k+1-i} == (-1)^{k+1} (d^{k+1} - q^{k+1})."""
    return appendix_sum(k, d, q) == (-1) ** (k + 1) * (d ** (k + 1) - q ** (k + 1))


def appendix_identity_symbolic(k: int) -> LaurentPoly:
    """Residual of the identity as a polynomial in (d, q); zero when it holds."""
    names = ("d", "q")
    d, q = LaurentPoly.var(names, "d"), LaurentPoly.var(names, "q")
    left = LaurentPoly.zero(names)
    for i in range(k + 1):
        left = left + (q ** i) * ((q - d) ** (k + 1 - i)) * ((-1) ** i * comb(k + 1, i))
    right = ((d ** (k + 1)) - (q ** (k + 1))) * ((-1) ** (k + 1))
    return left - right


def appendix_identity_with_extra_factor(k: int, d: int, q: int, r: int) -> bool:
    """Variant carrying a d^{r-(k+1)} factor on the left; fails unless that factor is 1."""
    return d ** (r - k - 1) * appendix_sum(k, d, q) == (-1) ** (k + 1) * (d ** (k + 1) - q ** (k + 1))


def trinomial_revision(r: int, i: int, m: int) -> bool:
    return comb(r - i, r - m) * comb(r, i) == comb(r, m) * comb(m, i)


@dataclass(frozen=True)
class InductiveStep:
    r: int
    k: int
    d: int
    q: int
    gamma_coefficient: Fraction
    constant: Fraction
    solved_gamma: Fraction | None
    expected_gamma: Fraction
    factor: Fraction

    @property
    def consistent(self) -> bool:
        return self.solved_gamma == self.expected_gamma


def inductive_step(r: int, k: int, d: int, q: int) -> InductiveStep:
    """Replay the step k -> k+1 with c_{k+1} = gamma c^{k+1} unknown.

    The L^{r-(k+1)} residual divided by d^{r-(k+1)} c^{k+1} is linear in
    gamma; returns that line and its root.
    """
    if not 0 <= k < r:
        raise InputError("need 0 <= k < r")
    if d == 0:
        raise InputError("d must be nonzero")
    m = k + 1
    const = Fraction(0)
    for i in range(m):
        const += (-1) ** i * comb(r - i, r - m) * Fraction(comb(r, i), r ** i) * Fraction((q - d) ** (m - i), r ** (m - i)) * q ** i
    # The i = k+1 term and the right-hand side both carry gamma.
    gamma_coeff = Fraction((-1) ** m * q ** m) - Fraction((-1) ** m * d ** m)
    solved = -const / gamma_coeff if gamma_coeff else None
    factor = Fraction((-1) ** m * (d ** m - q ** m))
    return InductiveStep(r, k, d, q, gamma_coeff, const, solved, Fraction(comb(r, m), r ** m), factor)


# -- projective space example -------------------------------------------------


@dataclass(frozen=True)
class PnVerdict:
    n: int
    comparisons: tuple[tuple[int, int, int], ...]
    verdict: str
    witness_k: int | None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "comparisons": [{"k": k, "lhs": a, "rhs": b, "equal": a == b} for k, a, b in self.comparisons],
            "verdict": self.verdict,
            "witness_k": self.witness_k,
        }


def pn_tangent_obstruction(n: int) -> PnVerdict:
    """Compare binom(n+1,k) n^k with binom(n,k) (n+1)^k for 2 <= k <= n."""
    if n < 1:
        raise InputError("n must be positive")
    comps = tuple((k, comb(n + 1, k) * n ** k, comb(n, k) * (n + 1) ** k) for k in range(2, n + 1))
    failing = [k for k, a, b in comps if a != b]
    if not comps:
        return PnVerdict(n, comps, "vacuous", None)
    if failing:
        return PnVerdict(n, comps, "no_exotic_based_map", n if n in failing else failing[0])
    return PnVerdict(n, comps, "consistent", None)
