from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Sequence

from .errors import DegreeMismatch

Composition = tuple[int, ...]


@lru_cache(maxsize=None)
def _compositions(d: int, n: int) -> tuple[Composition, ...]:
    if n == 1:
        return ((d,),)
    return tuple((first,) + rest for first in range(d + 1) for rest in _compositions(d - first, n - 1))


def compositions(d: int, n: int) -> list[Composition]:
    """All length-``n`` tuples of nonnegative integers summing to ``d``, in lex order."""
    if d < 0 or n < 1:
        raise ValueError("need d >= 0 and n >= 1")
    return list(_compositions(d, n))


def unit(n: int, i: int, d: int = 1) -> Composition:
    """``d`` times the ``i``-th (0-based) standard basis vector of length ``n``."""
    out = [0] * n
    out[i] = d
    return tuple(out)


def truncate(lam: Sequence[int]) -> Composition:
    return tuple(lam[:-1])


def poset_leq(mu: Sequence[int], lam: Sequence[int]) -> bool:
    """mu <= lam when mu_i <= lam_i for every part except the last."""
    if len(mu) != len(lam) or sum(mu) != sum(lam):
        raise DegreeMismatch(f"{tuple(mu)} and {tuple(lam)} are not compositions of the same shape")
    return all(m <= l for m, l in zip(mu[:-1], lam[:-1]))


def multinomial(parts: Sequence[int]) -> int:
    """(sum parts)! / prod(parts!), and 0 if any part is negative."""
    if any(p < 0 for p in parts):
        return 0
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


def power(base: int, exp: int):
    """Integer power with the convention 0**0 == 1."""
    return 1 if exp == 0 else base ** exp
