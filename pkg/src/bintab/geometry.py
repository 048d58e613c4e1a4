"""Exact vertex enumeration and mixture operations on the feasible polytope.

The feasible tables for a target system form the polyhedral cone
``C(H) = {y >= 0 : H y = 0}``; its extreme rays, normalized to total mass
one, are the extreme pmfs (vertices) of the polytope ``F(H)`` of feasible
probability tables.  Rays are enumerated with the double description
method in exact integer arithmetic:

1. start from the nonnegative orthant, whose extreme rays are the unit
   vectors;
2. insert the hyperplanes ``h . y = 0`` one at a time (margin rows first,
   then moment rows); the rays of the refined cone are the old rays lying
   on the hyperplane plus one positive combination ``(h.r+) r- - (h.r-) r+``
   for every *adjacent* pair split by it.

Adjacency of extreme rays r1, r2 in a pointed cone ``{y >= 0: A y = 0}``
is decided algebraically: with S the union of their supports, r1 and r2
span a 2-face iff ``rank(A restricted to the S columns) == |S| - 2``.
The equivalent combinatorial criterion (no third extreme ray has support
inside S) is used as a cheap rejection filter before the rank test.

Everything is deterministic: candidate pairs are scanned in a fixed order
and the final ray list is sorted by descending lexicographic order of the
normalized cell vectors, which also pairs reflected vertices stably.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import nnls

from ._linalg import affine_rank, frac_rank, frac_solve, int_rank
from .constraints import ConstraintMatrix
from .errors import (
    DimensionMismatchError,
    DomainError,
    EmptyFeasibleSetError,
    NotInPolytopeError,
)
from .table import FLOAT, RATIONAL, Pmf

#: Largest vertex count for which decompose searches support subsets exactly.
EXACT_DECOMPOSE_LIMIT = 16

IntRay = Tuple[int, ...]


@dataclass(frozen=True)
class RaySet:
    """Extreme rays of the feasible cone as primitive integer vectors.

    ``empty_certificate`` names the constraint row whose insertion emptied
    the cone, when enumeration ended with no rays.
    """

    d: int
    rays: Tuple[IntRay, ...]
    constraints: ConstraintMatrix
    empty_certificate: Optional[tuple] = None

    def __len__(self) -> int:
        return len(self.rays)


@dataclass(frozen=True)
class VertexSet:
    """Extreme pmfs of the feasible polytope, in canonical order."""

    vertices: Tuple[Pmf, ...]
    constraints: ConstraintMatrix

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class MixtureWeights:
    """Nonnegative weights summing to one over a vertex set.

    Rational weights must sum to 1 exactly; float weights may be off by up
    to 1e-9 and are renormalized exactly on construction.
    """

    theta: tuple

    def __post_init__(self):
        theta = tuple(self.theta)
        if any(t < 0 for t in theta):
            raise DomainError(f"mixture weights must be nonnegative, got {theta}")
        if all(isinstance(t, (int, Fraction)) for t in theta):
            theta = tuple(Fraction(t) for t in theta)
            if sum(theta) != 1:
                raise DomainError(f"mixture weights sum to {sum(theta)}, expected exactly 1")
        else:
            theta = tuple(float(t) for t in theta)
            total = math.fsum(theta)
            if abs(total - 1.0) > 1e-9:
                raise DomainError(f"mixture weights sum to {total!r}, expected 1")
            theta = tuple(t / total for t in theta)
        object.__setattr__(self, "theta", theta)


# ---------------------------------------------------------------------------
# double description
# ---------------------------------------------------------------------------


def _integer_rows(H: ConstraintMatrix) -> List[Tuple[int, ...]]:
    """Scale each rational row to a primitive integer row (same kernel)."""
    out = []
    for row in H.rows:
        lcm = 1
        for v in row:
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        ints = [int(v.numerator * (lcm // v.denominator)) for v in row]
        g = 0
        for v in ints:
            g = math.gcd(g, abs(v))
        if g > 1:
            ints = [v // g for v in ints]
        out.append(tuple(ints))
    return out


def _primitive(vec: Sequence[int]) -> IntRay:
    g = 0
    for v in vec:
        g = math.gcd(g, v)
    if g > 1:
        return tuple(v // g for v in vec)
    return tuple(vec)


def _mask(vec: Sequence[int]) -> int:
    m = 0
    for idx, v in enumerate(vec):
        if v:
            m |= 1 << idx
    return m


def _mask_columns(mask: int) -> List[int]:
    cols = []
    idx = 0
    while mask:
        if mask & 1:
            cols.append(idx)
        mask >>= 1
        idx += 1
    return cols


def _adjacent(ip: int, im: int, masks: Sequence[int], processed: Sequence[Tuple[int, ...]]) -> bool:
    union = masks[ip] | masks[im]
    for idx, m3 in enumerate(masks):
        if idx != ip and idx != im and (m3 & ~union) == 0:
            return False
    cols = _mask_columns(union)
    if not processed:
        return len(cols) == 2
    sub = [[row[c] for c in cols] for row in processed]
    return int_rank(sub) == len(cols) - 2


def _insert_equality(
    rays: List[IntRay],
    masks: List[int],
    processed: Sequence[Tuple[int, ...]],
    h: Tuple[int, ...],
    threads: int,
) -> Tuple[List[IntRay], List[int]]:
    vals = [sum(hc * rc for hc, rc in zip(h, r)) for r in rays]
    zero = [i for i, v in enumerate(vals) if v == 0]
    pos = [i for i, v in enumerate(vals) if v > 0]
    neg = [i for i, v in enumerate(vals) if v < 0]
    new_rays = [rays[i] for i in zero]
    if not pos or not neg:
        return new_rays, [masks[i] for i in zero]
    pairs = [(ip, im) for ip in pos for im in neg]

    def combine(pair):
        ip, im = pair
        if not _adjacent(ip, im, masks, processed):
            return None
        rp, rm = rays[ip], rays[im]
        return _primitive(tuple(vals[ip] * b - vals[im] * a for a, b in zip(rp, rm)))

    if threads > 1 and len(pairs) > 64:
        chunk = (len(pairs) + threads - 1) // threads
        blocks = [pairs[i : i + chunk] for i in range(0, len(pairs), chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(lambda block: [combine(pr) for pr in block], blocks)
        produced = [ray for block in results for ray in block if ray is not None]
    else:
        produced = [ray for ray in map(combine, pairs) if ray is not None]

    seen = set(new_rays)
    for ray in produced:
        if ray not in seen:
            seen.add(ray)
            new_rays.append(ray)
    return new_rays, [_mask(r) for r in new_rays]


def _normalized(ray: IntRay) -> Tuple[Fraction, ...]:
    s = sum(ray)
    return tuple(Fraction(v, s) for v in ray)


def extreme_rays(H: ConstraintMatrix, threads: int = 1) -> RaySet:
    """All extreme rays of ``{y >= 0 : H y = 0}`` (empty set when the cone is {0}).

    The result is deterministic and independent of ``threads``.
    """
    n = H.n_cols
    int_rows = _integer_rows(H)
    rays: List[IntRay] = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    masks: List[int] = [1 << j for j in range(n)]
    processed: List[Tuple[int, ...]] = []
    certificate = None
    for label, h in zip(H.labels, int_rows):
        rays, masks = _insert_equality(rays, masks, processed, h, max(1, threads))
        processed.append(h)
        if not rays:
            certificate = label
            break
    order = sorted(range(len(rays)), key=lambda i: _normalized(rays[i]), reverse=True)
    return RaySet(
        d=H.d,
        rays=tuple(rays[i] for i in order),
        constraints=H,
        empty_certificate=certificate,
    )


def normalize(rays: RaySet) -> VertexSet:
    """Extreme pmfs: each ray divided by its coordinate sum."""
    vertices = []
    for ray in rays.rays:
        s = sum(ray)
        if s <= 0:
            raise AssertionError("extreme ray with nonpositive sum; enumeration invariant broken")
        vertices.append(
            Pmf(d=rays.d, cells=tuple(Fraction(v, s) for v in ray), mode=RATIONAL)
        )
    return VertexSet(vertices=tuple(vertices), constraints=rays.constraints)


def enumerate_vertices(H: ConstraintMatrix, threads: int = 1) -> VertexSet:
    """Convenience pipeline: extreme rays, then normalization."""
    return normalize(extreme_rays(H, threads=threads))


def polytope_dimension(H: ConstraintMatrix, threads: int = 1) -> int:
    """Affine dimension of the feasible polytope.

    Computed as ``2^d - 1 - rank(H)``, which matches the affine hull
    whenever the polytope has a full-support point (true for every
    nonempty system arising from strictly positive moment targets).

    Raises
    ------
    EmptyFeasibleSetError
        If the polytope is empty.
    """
    rays = extreme_rays(H, threads=threads)
    if not rays.rays:
        raise EmptyFeasibleSetError(
            "the feasible polytope is empty", certificate=rays.empty_certificate
        )
    return H.n_cols - 1 - frac_rank(H.rows)


# ---------------------------------------------------------------------------
# mixtures
# ---------------------------------------------------------------------------


def mixture(weights: Union[MixtureWeights, Sequence], V: VertexSet) -> Pmf:
    """Convex combination ``sum_i theta_i r_i`` of the vertex set."""
    if not isinstance(weights, MixtureWeights):
        weights = MixtureWeights(tuple(weights))
    theta = weights.theta
    if len(theta) != len(V.vertices):
        raise DimensionMismatchError(
            f"{len(theta)} weights for {len(V.vertices)} vertices"
        )
    d = V.vertices[0].d
    n = 2**d
    if all(isinstance(t, Fraction) for t in theta) and all(
        v.mode == RATIONAL for v in V.vertices
    ):
        cells = tuple(
            sum((t * v.cells[k] for t, v in zip(theta, V.vertices)), Fraction(0))
            for k in range(n)
        )
        return Pmf(d=d, cells=cells, mode=RATIONAL)
    cells = tuple(
        math.fsum(float(t) * float(v.cells[k]) for t, v in zip(theta, V.vertices))
        for k in range(n)
    )
    return Pmf(d=d, cells=cells, mode=FLOAT)


def decompose(p: Pmf, V: VertexSet, tol: float = 1e-9) -> MixtureWeights:
    """Mixture weights reproducing ``p`` over the vertex set.

    For rational inputs with at most ``EXACT_DECOMPOSE_LIMIT`` vertices the
    search is exact: all support subsets of size up to dim+1 are solved in
    rational arithmetic and, among the exact representations found, the one
    with the smallest Euclidean norm is returned (unique on segments).
    Otherwise, or when no exact representation exists, a nonnegative
    least-squares fit decides membership within ``tol``.

    Raises
    ------
    NotInPolytopeError
        If no convex combination reproduces ``p`` within ``tol``; the error
        carries the best-achievable max-norm residual.
    """
    n_d = len(V.vertices)
    if n_d == 0:
        raise DomainError("cannot decompose over an empty vertex set")
    d = V.vertices[0].d
    if p.d != d:
        raise DimensionMismatchError(f"pmf dimension {p.d} != vertex dimension {d}")
    n = 2**d

    if (
        p.mode == RATIONAL
        and n_d <= EXACT_DECOMPOSE_LIMIT
        and all(v.mode == RATIONAL for v in V.vertices)
    ):
        dim = affine_rank([v.cells for v in V.vertices]) or 0
        best = None
        best_norm = None
        for size in range(1, min(n_d, dim + 1) + 1):
            for subset in combinations(range(n_d), size):
                rows = [[V.vertices[s].cells[k] for s in subset] for k in range(n)]
                rows.append([Fraction(1)] * size)
                rhs = list(p.cells) + [Fraction(1)]
                solved = frac_solve(rows, rhs)
                if solved is None:
                    continue
                x, nullity = solved
                if nullity > 0 or any(v < 0 for v in x):
                    continue
                theta = [Fraction(0)] * n_d
                for s, v in zip(subset, x):
                    theta[s] = v
                norm = sum(v * v for v in x)
                if best_norm is None or norm < best_norm:
                    best, best_norm = theta, norm
        if best is not None:
            return MixtureWeights(tuple(best))

    # Nonnegative least squares on the cell system augmented with sum(theta)=1.
    A = np.array([[float(c) for c in v.cells] for v in V.vertices], dtype=float).T
    A_aug = np.vstack([A, np.ones((1, n_d))])
    b_aug = np.concatenate([np.array([float(c) for c in p.cells]), [1.0]])
    theta, _ = nnls(A_aug, b_aug)
    s = theta.sum()
    if s <= 0:
        raise NotInPolytopeError("no convex representation exists", best_residual=math.inf)
    theta = theta / s
    res = float(np.max(np.abs(A @ theta - b_aug[:-1])))
    if res <= tol:
        return MixtureWeights(tuple(float(t) for t in theta))
    raise NotInPolytopeError(
        f"pmf is not in the polytope (best max-norm residual {res:.3e} > tol {tol:.1e})",
        best_residual=res,
    )
