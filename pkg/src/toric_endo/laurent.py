"""Exact Laurent polynomials over the rationals.

A :class:`LaurentPoly` is a finite map from integer exponent vectors to
nonzero :class:`~fractions.Fraction` coefficients, over a fixed tuple of
variable names.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import ParseError, VariableMismatch

Exponents = tuple[int, ...]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def grlex_key(exps: Exponents) -> tuple:
    return (sum(exps), exps)


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(names: Sequence[str], exps: Exponents) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e != 0:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_terms(names: Sequence[str], items: Iterable[tuple[Exponents, Fraction]]) -> str:
    out = []
    for exps, c in items:
        mono = format_monomial(names, exps)
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(out) if out else "0"


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-])|(\()|(\)))")


def parse_terms(text: str, names: Sequence[str]) -> dict[Exponents, Fraction]:
    """Parse a sum of monomial terms such as ``3/2*x1^2*y^-1 - y + 1``.

    Exponents may be negative (``y^-2`` or ``y^(-2)``); unknown variable
    names raise :class:`ParseError`.
    """
    index = {name: i for i, name in enumerate(names)}
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        tokens.append((m.lastindex, m.group(m.lastindex), pos))
        pos = m.end()
    if not tokens:
        raise ParseError("empty polynomial text")

    out: dict[Exponents, Fraction] = {}
    i = 0

    def peek(kind=None):
        if i < len(tokens) and (kind is None or tokens[i][0] == kind):
            return tokens[i]
        return None

    def read_exponent() -> int:
        nonlocal i
        paren = bool(peek(6))
        if paren:
            i += 1
        sign = 1
        if peek(5):
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        tok = peek(1)
        if tok is None or "/" in tok[1]:
            where = tokens[i][2] if i < len(tokens) else len(text)
            raise ParseError(f"expected integer exponent at offset {where}")
        i += 1
        if paren:
            if not peek(7):
                raise ParseError("unbalanced parenthesis in exponent")
            i += 1
        return sign * int(tok[1])

    sign = 1
    if peek(5):
        sign = -1 if tokens[0][1] == "-" else 1
        i = 1
    while True:
        coeff = Fraction(sign)
        exps = [0] * len(names)
        expect_factor = True
        while expect_factor:
            tok = peek()
            if tok is None:
                raise ParseError("dangling operator at end of input")
            kind, val, where = tok
            if kind == 1:
                coeff *= Fraction(val)
                i += 1
            elif kind == 2:
                if val not in index:
                    raise ParseError(f"unknown variable {val!r} at offset {where}")
                i += 1
                e = 1
                if peek(3):
                    i += 1
                    e = read_exponent()
                exps[index[val]] += e
            else:
                raise ParseError(f"unexpected token {val!r} at offset {where}")
            if peek(4):
                i += 1
            else:
                expect_factor = False
        key = tuple(exps)
        total = out.get(key, Fraction(0)) + coeff
        if total:
            out[key] = total
        else:
            out.pop(key, None)
        if i == len(tokens):
            return out
        tok = peek(5)
        if tok is None:
            raise ParseError(f"expected '+' or '-' at offset {tokens[i][2]}")
        sign = -1 if tok[1] == "-" else 1
        i += 1


class LaurentPoly:
    """Immutable Laurent polynomial with rational coefficients."""

    __slots__ = ("names", "_terms", "_hash")

    def __init__(self, names: Sequence[str], terms: Mapping[Exponents, object] | None = None):
        self.names = tuple(names)
        clean: dict[Exponents, Fraction] = {}
        if terms:
            n = len(self.names)
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != n:
                    raise VariableMismatch(f"exponent vector {exps} has length {len(exps)}, expected {n}")
                c = as_fraction(c)
                if c:
                    clean[exps] = clean.get(exps, Fraction(0)) + c
            clean = {e: c for e, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, names: tuple, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.names = names
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, names: Sequence[str]) -> "LaurentPoly":
        return cls._raw(tuple(names), {})

    @classmethod
    def constant(cls, names: Sequence[str], c) -> "LaurentPoly":
        names = tuple(names)
        c = as_fraction(c)
        return cls._raw(names, {(0,) * len(names): c} if c else {})

    @classmethod
    def one(cls, names: Sequence[str]) -> "LaurentPoly":
        return cls.constant(names, 1)

    @classmethod
    def monomial(cls, names: Sequence[str], exps: Sequence[int], coeff=1) -> "LaurentPoly":
        return cls(names, {tuple(exps): coeff})

    @classmethod
    def var(cls, names: Sequence[str], name: str) -> "LaurentPoly":
        names = tuple(names)
        exps = [0] * len(names)
        exps[names.index(name)] = 1
        return cls._raw(names, {tuple(exps): Fraction(1)})

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "LaurentPoly":
        return cls._raw(tuple(names), parse_terms(text, names))

    # -- inspection --------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.names)

    def terms(self) -> dict[Exponents, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in canonical order: graded lex, largest first."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __iter__(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * self.nvars}

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def leading(self) -> tuple[Exponents, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self.items()[0]

    def is_polynomial(self) -> bool:
        return all(e >= 0 for exps in self._terms for e in exps)

    def min_exponents(self) -> Exponents:
        if not self._terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self._terms))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.names != self.names:
                raise VariableMismatch(f"variables {other.names} do not match {self.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.names, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.names, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly._raw(self.names, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials can be raised to negative powers")
            (e, c), = self._terms.items()
            return LaurentPoly._raw(self.names, {tuple(k * x for x in e): c ** k})
        result = LaurentPoly.one(self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "LaurentPoly":
        c = as_fraction(c)
        if not c:
            return LaurentPoly.zero(self.names)
        return LaurentPoly._raw(self.names, {e: v * c for e, v in self._terms.items()})

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with exponent vector ``exps``."""
        return LaurentPoly._raw(
            self.names, {tuple(a + b for a, b in zip(e, exps)): c for e, c in self._terms.items()}
        )

    # -- transformations ---------------------------------------------------

    def map_exponents(self, fn: Callable[[Exponents], Sequence[int]], names: Sequence[str]) -> "LaurentPoly":
        """Apply a monomial map; colliding images have their coefficients summed."""
        return LaurentPoly(names, _accumulate((tuple(fn(e)), c) for e, c in self._terms.items()))

    def linear_exponent_map(self, matrix: Sequence[Sequence[int]], names: Sequence[str]) -> "LaurentPoly":
        """Send x^e to x'^(matrix @ e)."""
        return self.map_exponents(
            lambda e: [sum(row[k] * e[k] for k in range(len(e))) for row in matrix], names
        )

    def frobenius(self, d: int) -> "LaurentPoly":
        """Replace every variable by its d-th power."""
        return LaurentPoly._raw(self.names, {tuple(d * x for x in e): c for e, c in self._terms.items()})

    def substitute(self, images: Sequence["LaurentPoly"]) -> "LaurentPoly":
        """Substitute a Laurent polynomial for each variable.

        Negative exponents require the corresponding image to be a monomial.
        """
        if len(images) != self.nvars:
            raise VariableMismatch("need one image per variable")
        if not images:
            return self
        target = images[0].names
        out = LaurentPoly.zero(target)
        cache: dict[tuple[int, int], LaurentPoly] = {}
        for e, c in self._terms.items():
            term = LaurentPoly.constant(target, c)
            for k, ek in enumerate(e):
                if ek:
                    key = (k, ek)
                    if key not in cache:
                        cache[key] = images[k] ** ek
                    term = term * cache[key]
            out = out + term
        return out

    def evaluate(self, point: Sequence, one=None):
        """Evaluate at a point. Values must support ``*``, ``+`` and integer powers."""
        if len(point) != self.nvars:
            raise VariableMismatch("point has wrong dimension")
        total = 0 if one is None else one * 0
        for e, c in self._terms.items():
            term = c if one is None else one * c
            for v, k in zip(point, e):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def rename(self, names: Sequence[str]) -> "LaurentPoly":
        if len(names) != self.nvars:
            raise VariableMismatch("renaming must keep the number of variables")
        return LaurentPoly._raw(tuple(names), dict(self._terms))

    def to_sympy(self, symbols: Sequence | None = None):
        import sympy as sp

        syms = symbols if symbols is not None else sp.symbols(self.names) if self.names else ()
        expr = sp.Integer(0)
        for e, c in self._terms.items():
            term = sp.Rational(c.numerator, c.denominator)
            for s, k in zip(syms, e):
                term *= s ** k
            expr += term
        return expr

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.names, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.names == other.names and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.names, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        return format_terms(self.names, self.items())

    def __repr__(self):
        return f"LaurentPoly({str(self)!r}, names={self.names})"


def _accumulate(pairs: Iterable[tuple[Exponents, Fraction]]) -> dict[Exponents, Fraction]:
    out: dict[Exponents, Fraction] = {}
    for e, c in pairs:
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def base_names(n: int) -> tuple[str, ...]:
    """Variables x1..x_{n-1}, y of the chart next to a wall in rank ``n``."""
    return tuple(f"x{i}" for i in range(1, n)) + ("y",)
