"""Library of standard smooth complete fans."""

from __future__ import annotations

import itertools
import re

from .errors import InputError
from .lattice import Fan


def projective_space(n: int) -> Fan:
    """P^n: rays e_1..e_n, -(e_1+...+e_n); every n-subset spans a cone."""
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = list(itertools.combinations(range(n + 1), n))
    return Fan(n, tuple(rays), tuple(cones), name=f"p{n}")


def hirzebruch(n: int) -> Fan:
    """F_n: rays e1, e2, -e1 + n e2, -e2 in a four-cone cycle."""
    rays = ((1, 0), (0, 1), (-1, n), (0, -1))
    cones = ((0, 1), (1, 2), (2, 3), (0, 3))
    return Fan(2, rays, cones, name=f"f{n}")


def product_of_lines(n: int) -> Fan:
    """(P^1)^n with rays ordered e1, -e1, e2, -e2, ..."""
    rays = []
    for i in range(n):
        for s in (1, -1):
            rays.append(tuple(s * int(i == j) for j in range(n)))
    cones = [tuple(2 * i + b for i, b in enumerate(bits)) for bits in itertools.product((0, 1), repeat=n)]
    return Fan(n, tuple(rays), tuple(cones), name=f"p1^{n}")


def builtin_fan(name: str) -> Fan:
    """Resolve names like ``p2``, ``f3``, ``p1xp1``, ``p1^3``."""
    key = name.strip().lower()
    if key == "p1xp1":
        fan = product_of_lines(2)
        return Fan(fan.rank, fan.rays, fan.max_cones, name="p1xp1")
    m = re.fullmatch(r"p1\^(\d+)", key)
    if m and int(m.group(1)) >= 1:
        return product_of_lines(int(m.group(1)))
    m = re.fullmatch(r"p(\d+)", key)
    if m and int(m.group(1)) >= 1:
        return projective_space(int(m.group(1)))
    m = re.fullmatch(r"f(\d+)", key)
    if m:
        return hirzebruch(int(m.group(1)))
    raise InputError(f"unknown builtin fan {name!r}; try p1, p2, pN, fN, p1xp1 or p1^N")


def resolve_fan(obj) -> Fan:
    """A fan from JSON data or a ``builtin:NAME`` string."""
    if isinstance(obj, Fan):
        return obj
    if isinstance(obj, str):
        if not obj.startswith("builtin:"):
            raise InputError(f"fan reference {obj!r} must look like builtin:NAME")
        return builtin_fan(obj.split(":", 1)[1])
    if isinstance(obj, dict):
        return Fan.from_json(obj, name=obj.get("name", ""))
    raise InputError("fan must be a JSON object or a builtin:NAME string")
