"""Shared fixtures, random table generators, and independent oracles.

The brute-force vertex oracle here deliberately carries its own Gaussian
elimination instead of reusing the package's linear algebra, so that the
enumeration tests check the double description method against genuinely
independent machinery.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest

from bintab import MarginTargets, Pmf, build_H, targets_from_pmf
from bintab._linalg import frac_nullspace
from bintab.datasets import builtin_pmf

F = Fraction


@pytest.fixture(scope="session")
def example1():
    return builtin_pmf("example1")


@pytest.fixture(scope="session")
def water():
    return builtin_pmf("water")


@pytest.fixture(scope="session")
def raters():
    return builtin_pmf("raters")


@pytest.fixture(scope="session")
def example1_H3():
    """Constraint matrix of the running example at 3-digit targets."""
    return build_H(targets_from_pmf(builtin_pmf("example1"), digits=3))


# Exact segment endpoints of the running example's uniform-margin polytope
# at 3-digit targets, derived by eliminating the constraint system by hand:
# with t = p111, the free cells are p110 = mu12 - t, p101 = mu13 - t,
# p011 = mu23 - t, p100 = t + 1/2 - mu12 - mu13, p010 = t + 1/2 - mu12 - mu23,
# p001 = t + 1/2 - mu13 - mu23, p000 = mu12 + mu13 + mu23 - 1/2 - t, and the
# feasible range is t in [0, 173/1000].
EXAMPLE1_VERTEX_A = tuple(F(v, 1000) for v in (0, 194, 222, 84, 257, 49, 21, 173))
EXAMPLE1_VERTEX_B = tuple(F(v, 1000) for v in (173, 21, 49, 257, 84, 222, 194, 0))


# ---------------------------------------------------------------------------
# random table generators (non-oracle helpers)
# ---------------------------------------------------------------------------


def random_rational_pmf(rng, d, positive=False, max_weight=20) -> Pmf:
    """Random exact-rational pmf with integer-weight cells."""
    low = 1 if positive else 0
    while True:
        weights = [rng.randint(low, max_weight) for _ in range(2**d)]
        if sum(weights) > 0:
            break
    total = sum(weights)
    return Pmf.from_cells([F(w, total) for w in weights])


def random_uniform_margin_pmf(rng, d) -> Pmf:
    """Random exact-rational pmf whose univariate margins are all (1/2, 1/2).

    Built as the uniform table plus a random rational element of the kernel
    of the margin (and total-mass) constraints, scaled to keep every cell
    nonnegative.  Generically not symmetric under the complement map.
    """
    n = 2**d
    margin_rows = [
        tuple(F(1) if ((k >> (d - i)) & 1) == 0 else F(-1) for k in range(n))
        for i in range(1, d + 1)
    ]
    ones = tuple([F(1)] * n)
    basis = frac_nullspace(margin_rows + [ones], n)
    direction = [F(0)] * n
    for vec in basis:
        c = F(rng.randint(-9, 9))
        direction = [a + c * b for a, b in zip(direction, vec)]
    worst = min(direction)
    if worst >= 0:  # degenerate draw: no negative part to bound the step
        return Pmf.uniform(d)
    scale = F(1, n) / (-worst) * F(rng.randint(0, 10), 10)
    cells = [F(1, n) + scale * v for v in direction]
    return Pmf.from_cells(cells)


def random_targets(rng, d, digits=2) -> MarginTargets:
    """Uniform-margin targets derived from a random strictly positive table."""
    return targets_from_pmf(random_rational_pmf(rng, d, positive=True), digits=digits)


# ---------------------------------------------------------------------------
# independent brute-force vertex oracle
# ---------------------------------------------------------------------------


def _gauss_solve(rows, rhs):
    """Solve exactly; returns (solution, nullity) or None if inconsistent.

    Standalone Gauss-Jordan over Fractions, independent of the package's
    linear algebra helpers.
    """
    aug = [list(row) + [val] for row, val in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = aug[r][c]
        aug[r] = [v / inv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for row in aug[r:]:
        if row[-1] != 0:
            return None
    x = [F(0)] * ncols
    for idx, c in enumerate(pivots):
        x[c] = aug[idx][-1]
    return x, ncols - len(pivots)


def _gauss_rank(rows):
    if not rows:
        return 0
    sol_rows = [list(row) for row in rows]
    ncols = len(sol_rows[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(sol_rows)) if sol_rows[i][c] != 0), None)
        if pivot is None:
            continue
        sol_rows[r], sol_rows[pivot] = sol_rows[pivot], sol_rows[r]
        for i in range(len(sol_rows)):
            if i != r and sol_rows[i][c] != 0:
                f = sol_rows[i][c] / sol_rows[r][c]
                sol_rows[i] = [a - f * b for a, b in zip(sol_rows[i], sol_rows[r])]
        r += 1
    return r


def brute_force_vertices(H) -> set:
    """All vertices of {p >= 0, Hp = 0, sum p = 1} by support enumeration.

    A point is a vertex iff the columns of [H; 1] on its support are
    linearly independent, so solving the restricted system on every support
    subset of size up to rank(H)+1 and keeping the unique nonnegative
    solutions enumerates exactly the vertex set.
    """
    n = H.n_cols
    rank = _gauss_rank([list(row) for row in H.rows])
    found = set()
    for size in range(1, rank + 2):
        for support in combinations(range(n), size):
            rows = [[row[c] for c in support] for row in H.rows]
            rows.append([F(1)] * size)
            rhs = [F(0)] * len(H.rows) + [F(1)]
            solved = _gauss_solve(rows, rhs)
            if solved is None:
                continue
            x, nullity = solved
            if nullity > 0 or any(v < 0 for v in x):
                continue
            full = [F(0)] * n
            for c, v in zip(support, x):
                full[c] = v
            found.add(tuple(full))
    return found
