"""Chart coordinate rings next to a wall as semigroup rings.

Across a wall with relation vector ``a`` the far chart has coordinate ring
C[x_1 y^{-a_1}, ..., x_{n-1} y^{-a_{n-1}}, y^{-1}] inside the Laurent ring
in (x_1, ..., x_{n-1}, y).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .laurent import Exponents


@dataclass(frozen=True)
class SemigroupRing:
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))

    @property
    def rank(self) -> int:
        return len(self.a) + 1

    @property
    def generators(self) -> list[Exponents]:
        n = self.rank
        gens = []
        for i, ai in enumerate(self.a):
            e = [0] * n
            e[i] = 1
            e[-1] = -ai
            gens.append(tuple(e))
        gens.append((0,) * (n - 1) + (-1,))
        return gens


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: tuple[int, ...] | None

    def __bool__(self):
        return self.member


def semigroup_member(exps: Sequence[int], ring: SemigroupRing) -> Membership:
    """Decide whether x^alpha y^e lies in the ring.

    The x-exponents fix the powers of the first n-1 generators; the power
    of y^{-1} is then beta = -e - sum(a_i alpha_i), which must be >= 0.
    """
    exps = tuple(exps)
    if len(exps) != ring.rank:
        raise ValueError(f"monomial has {len(exps)} exponents, ring has rank {ring.rank}")
    alpha = exps[:-1]
    if any(v < 0 for v in alpha):
        return Membership(False, None)
    beta = -exps[-1] - sum(ai * al for ai, al in zip(ring.a, alpha))
    if beta < 0:
        return Membership(False, None)
    return Membership(True, tuple(alpha) + (beta,))
