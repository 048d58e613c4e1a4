"""Exact linear algebra over rationals and integers.

Small dense systems only (at most a few dozen rows/columns); everything
here is plain Gaussian elimination on ``fractions.Fraction`` entries, plus
a fraction-free Bareiss rank for integer matrices, which is what the
vertex-enumeration inner loop uses.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence


def frac_rref(rows: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form.

    Returns ``(rref_rows, pivot_columns)`` where ``rref_rows`` is a list of
    lists of Fractions and ``pivot_columns`` lists the pivot column of each
    nonzero row.
    """
    m = [list(map(Fraction, row)) for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [v / inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def frac_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    _, pivots = frac_rref(rows)
    return len(pivots)


def frac_nullspace(rows: Sequence[Sequence[Fraction]], ncols: int):
    """Basis of the right kernel of the given rows, as tuples of Fractions.

    Each basis vector sets one free variable to 1 and the others to 0.
    """
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    rref, pivots = frac_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -rref[row_idx][fc]
        basis.append(tuple(vec))
    return basis


def frac_solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve ``rows @ x = rhs`` exactly.

    Returns ``(solution, nullity)`` with the free variables set to 0, or
    ``None`` when the system is inconsistent.
    """
    aug = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    rref, pivots = frac_rref(aug)
    for row in rref:
        if row[-1] != 0 and all(v == 0 for v in row[:-1]):
            return None
    x = [Fraction(0)] * ncols
    for row_idx, pc in enumerate(pivots):
        if pc == ncols:  # pivot in the augmented column: inconsistent
            return None
        x[pc] = rref[row_idx][-1]
    return tuple(x), ncols - len(pivots)


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix via fraction-free (Bareiss) elimination."""
    m = [list(row) for row in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        pivot = next((i for i in range(rank, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pr = m[rank]
        for i in range(rank + 1, nrows):
            # rows with a zero in the pivot column still need the Bareiss
            # rescaling, or later exact divisions break
            ric = m[i][c]
            mi = m[i]
            for j in range(c + 1, ncols):
                mi[j] = (mi[j] * pr[c] - ric * pr[j]) // prev
            mi[c] = 0
        prev = pr[c]
        rank += 1
        if rank == nrows:
            break
    return rank


def affine_rank(points: Sequence[Sequence[Fraction]]) -> Optional[int]:
    """Dimension of the affine hull of the given points (None when empty)."""
    if not points:
        return None
    base = points[0]
    diffs = [[Fraction(a) - Fraction(b) for a, b in zip(p, base)] for p in points[1:]]
    return frac_rank(diffs) if diffs else 0
