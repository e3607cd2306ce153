"""Exact linear algebra over the rationals.

Float rank estimates with a fixed tolerance misread the badly conditioned
structured matrices that continuous measures produce, so rank questions that
gate a verdict are answered here with Fraction elimination instead.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

Matrix = Sequence[Sequence[Fraction]]


def rational_rank(matrix: Matrix) -> int:
    """Exact rank via Gaussian elimination with nonzero pivoting."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        inv = 1 / prow[col]
        for r in range(rank + 1, len(rows)):
            factor = rows[r][col] * inv
            if factor:
                rr = rows[r]
                for c in range(col, ncols):
                    rr[c] -= factor * prow[c]
        rank += 1
        if rank == len(rows):
            break
    return rank


def rational_nullvector(matrix: Matrix) -> Optional[List[Fraction]]:
    """One nonzero kernel vector of a rational matrix, or None if trivial.

    The free variable chosen is the last free column; its coordinate is set
    to 1 and the rest back-substituted exactly.
    """
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return None
    ncols = len(rows[0])
    pivots: List[int] = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        inv = 1 / prow[col]
        for c in range(col, ncols):
            prow[c] *= inv
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                factor = rows[r][col]
                rr = rows[r]
                for c in range(col, ncols):
                    rr[c] -= factor * prow[c]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    target = free[-1]
    vec = [Fraction(0)] * ncols
    vec[target] = Fraction(1)
    for r, col in enumerate(pivots):
        vec[col] = -rows[r][target]
    return vec


def rational_solve(matrix: Matrix, rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Exact solution of a square system, or None if the matrix is singular."""
    n = len(matrix)
    rows = [
        [Fraction(x) for x in row] + [Fraction(b)]
        for row, b in zip(matrix, rhs)
    ]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        prow = rows[col]
        inv = 1 / prow[col]
        for c in range(col, n + 1):
            prow[c] *= inv
        for r in range(n):
            if r != col and rows[r][col]:
                factor = rows[r][col]
                rr = rows[r]
                for c in range(col, n + 1):
                    rr[c] -= factor * prow[c]
    return [rows[r][n] for r in range(n)]


def leading_minor_signs(hankel_rows: Matrix) -> List[int]:
    """Signs (-1, 0, 1) of the nested leading principal minors.

    Computed by exact fraction-free style elimination on growing leading
    blocks; cost is acceptable for the matrix sizes used here.
    """
    n = len(hankel_rows)
    signs: List[int] = []
    for k in range(1, n + 1):
        det = _det([row[:k] for row in hankel_rows[:k]])
        signs.append(0 if det == 0 else (1 if det > 0 else -1))
    return signs


def _det(matrix: List[List[Fraction]]) -> Fraction:
    rows = [[Fraction(x) for x in row] for row in matrix]
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        prow = rows[col]
        det *= prow[col]
        inv = 1 / prow[col]
        for r in range(col + 1, n):
            factor = rows[r][col] * inv
            if factor:
                rr = rows[r]
                for c in range(col, n):
                    rr[c] -= factor * prow[c]
    return det
