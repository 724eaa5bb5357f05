"""Homogeneous fiber polynomials: forms in z_1..z_r with Laurent coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .compositions import Composition, compositions, unit
from .errors import DegreeMismatch, NonLinearImage, ParseError, VariableMismatch
from .laurent import Exponents, LaurentPoly, format_terms, grlex_key, parse_terms


def z_names(r: int) -> tuple[str, ...]:
    return tuple(f"z{i}" for i in range(1, r + 1))


class FiberPoly:
    """A form of degree ``degree`` in ``nz`` fiber variables.

    Coefficients are :class:`LaurentPoly` over ``base`` variables. The zero
    form keeps its nominal degree.
    """

    __slots__ = ("base", "nz", "degree", "_coeffs")

    def __init__(
        self,
        base: Sequence[str],
        nz: int,
        degree: int,
        coeffs: Mapping[Sequence[int], LaurentPoly] | None = None,
    ):
        self.base = tuple(base)
        self.nz = nz
        self.degree = degree
        clean: dict[Composition, LaurentPoly] = {}
        for lam, c in (coeffs or {}).items():
            lam = tuple(lam)
            if len(lam) != nz or sum(lam) != degree or min(lam, default=0) < 0:
                raise DegreeMismatch(f"{lam} is not a composition of {degree} with {nz} parts")
            if isinstance(c, (int, Fraction)):
                c = LaurentPoly.constant(self.base, c)
            if c.names != self.base:
                raise VariableMismatch(f"coefficient variables {c.names} differ from {self.base}")
            if lam in clean:
                c = clean[lam] + c
            if c:
                clean[lam] = c
            else:
                clean.pop(lam, None)
        self._coeffs = clean

    @classmethod
    def _raw(cls, base, nz, degree, coeffs) -> "FiberPoly":
        obj = cls.__new__(cls)
        obj.base, obj.nz, obj.degree, obj._coeffs = base, nz, degree, coeffs
        return obj

    @classmethod
    def zero(cls, base: Sequence[str], nz: int, degree: int) -> "FiberPoly":
        return cls._raw(tuple(base), nz, degree, {})

    @classmethod
    def monomial(cls, base: Sequence[str], lam: Sequence[int], coeff=1) -> "FiberPoly":
        base = tuple(base)
        if not isinstance(coeff, LaurentPoly):
            coeff = LaurentPoly.constant(base, coeff)
        return cls(base, len(lam), sum(lam), {tuple(lam): coeff})

    @classmethod
    def linear(cls, base: Sequence[str], coeffs: Sequence[LaurentPoly | int | Fraction]) -> "FiberPoly":
        """The linear form sum_i coeffs[i] * z_i."""
        r = len(coeffs)
        return cls(base, r, 1, {unit(r, i): c for i, c in enumerate(coeffs)})

    @classmethod
    def from_terms(
        cls, base: Sequence[str], nz: int, degree: int, terms: Iterable[tuple[Exponents, Composition, Fraction]]
    ) -> "FiberPoly":
        grouped: dict[Composition, dict[Exponents, Fraction]] = {}
        for exps, lam, c in terms:
            bucket = grouped.setdefault(tuple(lam), {})
            bucket[tuple(exps)] = bucket.get(tuple(exps), 0) + c
        return cls(base, nz, degree, {lam: LaurentPoly(base, t) for lam, t in grouped.items()})

    @classmethod
    def parse(cls, text: str, base: Sequence[str], nz: int, degree: int | None = None) -> "FiberPoly":
        """Parse the flat text form ``<rational>*x1^e*...*y^e*z1^l1*...``."""
        base = tuple(base)
        names = base + z_names(nz)
        flat = parse_terms(text, names)
        nb = len(base)
        degrees = {sum(e[nb:]) for e in flat}
        if degree is None:
            if len(degrees) > 1:
                raise ParseError(f"fiber polynomial is not homogeneous in z: degrees {sorted(degrees)}")
            degree = degrees.pop() if degrees else 0
        elif degrees - {degree}:
            raise ParseError(f"fiber polynomial has z-degrees {sorted(degrees)}, expected {degree}")
        if any(x < 0 for e in flat for x in e[nb:]):
            raise ParseError("negative exponent on a fiber variable")
        return cls.from_terms(base, nz, degree, ((e[:nb], e[nb:], c) for e, c in flat.items()))

    # -- inspection --------------------------------------------------------

    def coeffs(self) -> dict[Composition, LaurentPoly]:
        return dict(self._coeffs)

    def items(self) -> list[tuple[Composition, LaurentPoly]]:
        return sorted(self._coeffs.items(), reverse=True)

    def support(self) -> list[Composition]:
        return sorted(self._coeffs, reverse=True)

    def extract_coeff(self, lam: Sequence[int]) -> LaurentPoly:
        lam = tuple(lam)
        if len(lam) != self.nz or sum(lam) != self.degree:
            raise DegreeMismatch(f"{lam} is not a composition of {self.degree} with {self.nz} parts")
        return self._coeffs.get(lam, LaurentPoly.zero(self.base))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def flat_terms(self) -> list[tuple[Exponents, Composition, Fraction]]:
        """All (base exponents, z exponents, coefficient) triples in canonical order."""
        out = [(e, lam, c) for lam, p in self._coeffs.items() for e, c in p.terms().items()]
        out.sort(key=lambda t: (grlex_key(t[0]), t[1]), reverse=True)
        return out

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "FiberPoly"):
        if other.base != self.base or other.nz != self.nz:
            raise VariableMismatch("fiber polynomials live over different variables")

    def __add__(self, other):
        if not isinstance(other, FiberPoly):
            return NotImplemented
        self._check(other)
        if other.degree != self.degree and other._coeffs and self._coeffs:
            raise DegreeMismatch("cannot add forms of different degree")
        degree = self.degree if self._coeffs else other.degree
        out = dict(self._coeffs)
        for lam, c in other._coeffs.items():
            s = out[lam] + c if lam in out else c
            if s:
                out[lam] = s
            else:
                out.pop(lam, None)
        return FiberPoly._raw(self.base, self.nz, degree, out)

    def __neg__(self):
        return FiberPoly._raw(self.base, self.nz, self.degree, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, FiberPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return self.scale(other)
        if not isinstance(other, FiberPoly):
            return NotImplemented
        self._check(other)
        out: dict[Composition, LaurentPoly] = {}
        for l1, c1 in self._coeffs.items():
            for l2, c2 in other._coeffs.items():
                lam = tuple(a + b for a, b in zip(l1, l2))
                s = out[lam] + c1 * c2 if lam in out else c1 * c2
                if s:
                    out[lam] = s
                else:
                    out.pop(lam, None)
        return FiberPoly._raw(self.base, self.nz, self.degree + other.degree, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = FiberPoly.monomial(self.base, (0,) * self.nz)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "FiberPoly":
        if isinstance(c, LaurentPoly):
            if c.names != self.base:
                raise VariableMismatch("scalar lives over different variables")
            out = {lam: v * c for lam, v in self._coeffs.items()}
        else:
            out = {lam: v.scale(c) for lam, v in self._coeffs.items()}
        return FiberPoly._raw(self.base, self.nz, self.degree, {k: v for k, v in out.items() if v})

    def map_coeffs(self, fn, base: Sequence[str] | None = None) -> "FiberPoly":
        base = self.base if base is None else tuple(base)
        out = {lam: fn(c) for lam, c in self._coeffs.items()}
        return FiberPoly._raw(base, self.nz, self.degree, {k: v for k, v in out.items() if v})

    def substitute(self, images: Sequence["FiberPoly"]) -> "FiberPoly":
        return substitute(self, images)

    def evaluate(self, base_point: Sequence, z: Sequence, one=None):
        total = 0 if one is None else one * 0
        for lam, c in self._coeffs.items():
            term = c.evaluate(base_point, one)
            for v, k in zip(z, lam):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def restrict_to(self, indices: Iterable[int]) -> "FiberPoly":
        """Keep only monomials supported on the given z indices."""
        keep = set(indices)
        return FiberPoly._raw(
            self.base,
            self.nz,
            self.degree,
            {lam: c for lam, c in self._coeffs.items() if all(k == 0 or i in keep for i, k in enumerate(lam))},
        )

    def __eq__(self, other):
        if not isinstance(other, FiberPoly):
            return NotImplemented
        if self.base != other.base or self.nz != other.nz:
            return False
        if self._coeffs != other._coeffs:
            return False
        return not self._coeffs or self.degree == other.degree

    def __hash__(self):
        return hash((self.base, self.nz, frozenset(self._coeffs.items())))

    def __str__(self):
        names = self.base + z_names(self.nz)
        return format_terms(names, ((e + lam, c) for e, lam, c in self.flat_terms()))

    def __repr__(self):
        return f"FiberPoly({str(self)!r}, degree={self.degree})"


def extract_coeff(f: FiberPoly, lam: Sequence[int]) -> LaurentPoly:
    return f.extract_coeff(lam)


def substitute(f: FiberPoly, images: Sequence[FiberPoly]) -> FiberPoly:
    """Expand f(images) where each image is a linear form in the fiber variables."""
    if len(images) != f.nz:
        raise VariableMismatch(f"need {f.nz} images, got {len(images)}")
    if not images:
        return f
    for k, img in enumerate(images):
        if img.degree != 1:
            raise NonLinearImage(f"image of z{k + 1} has degree {img.degree}")
    base, nz = images[0].base, images[0].nz
    for img in images:
        if img.base != base or img.nz != nz:
            raise VariableMismatch("images live over different variables")
    if f.base != base:
        raise VariableMismatch("coefficients and images live over different base variables")
    one = FiberPoly.monomial(base, (0,) * nz)
    powers: list[list[FiberPoly]] = []
    for k, img in enumerate(images):
        top = max((lam[k] for lam in f._coeffs), default=0)
        seq = [one]
        for _ in range(top):
            seq.append(seq[-1] * img)
        powers.append(seq)
    total = FiberPoly.zero(base, nz, f.degree)
    for lam, c in f._coeffs.items():
        term = powers[0][lam[0]]
        for k in range(1, len(lam)):
            if lam[k]:
                term = term * powers[k][lam[k]]
        total = total + term.scale(c)
    return FiberPoly._raw(base, nz, f.degree, total._coeffs)


def random_fiber_poly(rng, base: Sequence[str], nz: int, degree: int, *, density=0.7, exp_range=(-2, 2),
                      coeff_range=(-3, 3), max_terms=2) -> FiberPoly:
    """Random form for property tests; ``rng`` is a :class:`random.Random`."""
    coeffs = {}
    for lam in compositions(degree, nz):
        if rng.random() > density:
            continue
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            e = tuple(rng.randint(*exp_range) for _ in base)
            terms[e] = terms.get(e, 0) + rng.randint(*coeff_range)
        coeffs[lam] = LaurentPoly(base, terms)
    return FiberPoly(base, nz, degree, coeffs)
