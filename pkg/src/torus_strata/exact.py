"""Exact integer and rational linear algebra.

Matrices are plain row sequences of Python ints, so there is no overflow.
Rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

IntMatrix = Sequence[Sequence[int]]
IntVector = Sequence[int]


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def _shape(M: IntMatrix) -> tuple[int, int]:
    rows = len(M)
    if rows == 0:
        raise DimensionError("matrix has no rows")
    cols = len(M[0])
    if cols == 0:
        raise DimensionError("matrix has no columns")
    if any(len(r) != cols for r in M):
        raise DimensionError("ragged matrix")
    return rows, cols


def det(M: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n, cols = _shape(M)
    if n != cols:
        raise DimensionError(f"determinant of a non-square {n}x{cols} matrix")
    return _bareiss_det(tuple(tuple(r) for r in M))


def _bareiss_det(M: tuple[tuple[int, ...], ...]) -> int:
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    a = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def lcm_all(values: Sequence[int]) -> int:
    if not values:
        raise ValueError("lcm of an empty list")
    if any(v <= 0 for v in values):
        raise ValueError("lcm_all expects positive integers")
    return math.lcm(*values)


def rank_rational(M: IntMatrix) -> int:
    """Rank over Q, by fraction-free row reduction."""
    if not M or not M[0]:
        return 0
    a = [list(r) for r in M]
    rows, cols = len(a), len(a[0])
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r][c] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            f = a[r][c]
            if f:
                a[r] = [p * x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


@lru_cache(maxsize=1 << 16)
def adjugate(B: tuple[tuple[int, ...], ...]) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Return ``(det(B), adj(B))`` with ``B @ adj(B) == det(B) * I``.

    Cached: vertex enumeration solves the same normal systems with many
    right-hand sides.
    """
    n = len(B)
    d = _bareiss_det(B)
    if n == 1:
        return d, ((1,),)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(
                tuple(B[r][c] for c in range(n) if c != j) for r in range(n) if r != i
            )
            cof[i][j] = (-1) ** (i + j) * _bareiss_det(minor)
    adj = tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))
    return d, adj


def solve_exact(B: IntMatrix, b: IntVector) -> tuple[Fraction, ...]:
    """Solve ``B w = b`` for nonsingular integer ``B``.

    Uses the cofactor form ``w = adj(B) b / det(B)``, so every denominator
    divides ``|det(B)|``.
    """
    n, cols = _shape(B)
    if n != cols:
        raise DimensionError(f"solve_exact needs a square matrix, got {n}x{cols}")
    if len(b) != n:
        raise DimensionError("right-hand side length mismatch")
    d, adj = adjugate(tuple(tuple(r) for r in B))
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    return tuple(Fraction(sum(a * x for a, x in zip(row, b)), d) for row in adj)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf_row_basis(M: IntMatrix) -> tuple[tuple[int, ...], ...]:
    """Row-style Hermite normal form of the integer row space of ``M``.

    Echelon rows with positive pivots; entries above each pivot reduced
    into ``[0, pivot)``. Zero rows are dropped, so the result is a basis.
    """
    a = [list(r) for r in M]
    if not a:
        return ()
    rows, cols = len(a), len(a[0])
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        # fold the gcd of column c (rows r..) into row r
        for i in range(r + 1, rows):
            if a[i][c] == 0:
                continue
            if a[r][c] == 0:
                a[r], a[i] = a[i], a[r]
                continue
            g, x, y = _xgcd(a[r][c], a[i][c])
            p, q = a[r][c] // g, a[i][c] // g
            new_r = [x * s + y * t for s, t in zip(a[r], a[i])]
            new_i = [p * t - q * s for s, t in zip(a[r], a[i])]
            a[r], a[i] = new_r, new_i
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        piv = a[r][c]
        for i in range(r):
            f = a[i][c] // piv
            if f:
                a[i] = [s - f * t for s, t in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in a[:r])


def independent_rows(M: IntMatrix) -> list[int]:
    """Greedy indices of a maximal linearly independent set of rows."""
    chosen: list[int] = []
    for i in range(len(M)):
        if rank_rational([M[j] for j in chosen] + [M[i]]) == len(chosen) + 1:
            chosen.append(i)
    return chosen


def integral_solution(
    B: IntMatrix, b: IntVector, rows: Optional[Sequence[int]] = None
) -> Optional[tuple[int, ...]]:
    """Return the integer ``z`` with ``B z == b``, or ``None``.

    ``B`` must have full column rank. ``rows`` optionally picks which
    independent rows to solve on; all rows are verified afterwards.
    """
    _, n = _shape(B)
    if len(b) != len(B):
        raise DimensionError("right-hand side length mismatch")
    if rows is None:
        rows = independent_rows(B)
    if len(rows) != n or rank_rational([B[i] for i in rows]) != n:
        raise DimensionError("matrix does not have full column rank")
    w = solve_exact([B[i] for i in rows], [b[i] for i in rows])
    if any(x.denominator != 1 for x in w):
        return None
    z = tuple(int(x) for x in w)
    for row, rhs in zip(B, b):
        if sum(p * q for p, q in zip(row, z)) != rhs:
            return None
    return z


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))
