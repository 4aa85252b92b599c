"""Exact rational linear algebra on small integer matrices.

Everything here works over ``fractions.Fraction`` so that weight detection
and lattice geometry never suffer floating-point rank decisions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (zero vector unchanged)."""
    g = 0
    for x in vec:
        g = gcd(g, abs(int(x)))
    if g <= 1:
        return tuple(int(x) for x in vec)
    return tuple(int(x) // g for x in vec)


def _rref(rows: Sequence[Sequence[int]], width: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (matrix, pivot column indices)."""
    mat = [[Fraction(int(x)) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(width):
        pivot_row = None
        for i in range(r, len(mat)):
            if mat[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = mat[r][col]
        mat[r] = [x / inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                factor = mat[i][col]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def rational_rank(rows: Sequence[Sequence[int]], width: int) -> int:
    if not rows:
        return 0
    _, pivots = _rref(rows, width)
    return len(pivots)


def kernel_basis(rows: Sequence[Sequence[int]], width: int) -> list[tuple[int, ...]]:
    """Primitive integer generating set of {x in Z^width : rows @ x = 0}.

    Solves over Q by reduced row echelon form, assigns each free column a
    unit value, and clears denominators to a gcd-1 integer vector.  If the
    only solution is x = 0 the list is empty.  With no rows at all the
    kernel is the full lattice and the standard basis is returned.
    """
    if not rows:
        return [tuple(1 if i == j else 0 for i in range(width)) for j in range(width)]
    mat, pivots = _rref(rows, width)
    free_cols = [c for c in range(width) if c not in pivots]
    basis: list[tuple[int, ...]] = []
    for fc in free_cols:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -mat[row_idx][fc]
        denom = 1
        for x in vec:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        ints = [int(x * denom) for x in vec]
        basis.append(primitive(ints))
    return basis
