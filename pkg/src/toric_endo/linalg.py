"""Small exact linear algebra over Q for integer and rational matrices."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def det(rows: Sequence[Sequence]) -> Fraction:
    m = to_fraction_matrix(rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            if m[r][col]:
                factor = m[r][col] / p
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return sign * result


def rank(rows: Sequence[Sequence]) -> int:
    m = to_fraction_matrix(rows)
    if not m:
        return 0
    rk, ncols = 0, len(m[0])
    for col in range(ncols):
        pivot = next((r for r in range(rk, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rk], m[pivot] = m[pivot], m[rk]
        for r in range(len(m)):
            if r != rk and m[r][col]:
                factor = m[r][col] / m[rk][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rk])]
        rk += 1
    return rk


def solve(a: Sequence[Sequence], b: Sequence, pivot_order: Sequence[int] | None = None) -> list[Fraction] | None:
    """Solve the square system a @ x = b exactly; None when singular.

    ``pivot_order`` permutes the order in which rows are used for
    elimination; the answer does not depend on it.
    """
    n = len(a)
    order = list(pivot_order) if pivot_order is not None else list(range(n))
    m = [[Fraction(v) for v in a[i]] + [Fraction(b[i])] for i in order]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def inverse(a: Sequence[Sequence]) -> Matrix | None:
    n = len(a)
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        x = solve(a, e)
        if x is None:
            return None
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def integer_inverse(a: Sequence[Sequence[int]]) -> list[list[int]]:
    inv = inverse(a)
    if inv is None or any(v.denominator != 1 for row in inv for v in row):
        raise ValueError("matrix is not unimodular")
    return [[int(v) for v in row] for row in inv]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def normal_vector(vectors: Sequence[Sequence[int]], n: int) -> list[int]:
    """Integer vector orthogonal to n-1 independent vectors in Z^n (cofactor expansion)."""
    if n == 1:
        return [1]
    out = []
    for k in range(n):
        minor = [[v[j] for j in range(n) if j != k] for v in vectors]
        out.append((-1) ** k * int(det(minor)))
    return out
