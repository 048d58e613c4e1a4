"""Random pmfs from the feasible polytope.

Two samplers with different targets:

* :func:`sample_dirichlet` draws symmetric Dirichlet(1) weights over the
  vertex set and mixes.  Fast, covers the whole polytope, and exactly
  uniform on a segment -- but NOT uniform over polytopes of dimension two
  or more (mass concentrates where many vertices are close).
* :func:`sample_hit_and_run` runs a hit-and-run random walk inside the
  polytope and targets the uniform distribution.  The walk moves in an
  orthonormalized chart of the exact rational kernel of the constraint
  system (including the total-mass row), so every iterate satisfies the
  constraints up to one matrix product of round-off.

Randomness comes from numpy's counter-based Philox bit generator; all
variates are derived from its uniform doubles with the transformations
coded here (inverse-exponential for Dirichlet, Box-Muller for directions),
so a fixed seed reproduces the byte-identical draw sequence for a given
numpy version on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List

import numpy as np

from ._linalg import frac_nullspace
from .constraints import ConstraintMatrix, residual
from .errors import DomainError
from .geometry import VertexSet
from .table import FLOAT, Pmf

#: Tolerance for validating the feasibility of a hit-and-run start point.
START_TOL = 1e-9

#: Direction components below this threshold do not constrain the chord.
CHORD_EPS = 1e-13


@dataclass(frozen=True)
class SamplerConfig:
    """Draw count, seed, and walk schedule.

    ``burn_in`` steps are discarded before the first kept draw and
    ``thinning`` steps are discarded between consecutive kept draws
    (hit-and-run only; the Dirichlet sampler ignores both).
    """

    seed: int
    count: int
    burn_in: int = 500
    thinning: int = 10

    def __post_init__(self):
        if self.count < 1:
            raise DomainError(f"count must be >= 1, got {self.count}")
        if self.burn_in < 0 or self.thinning < 0:
            raise DomainError("burn_in and thinning must be >= 0")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _standard_normals(rng: np.random.Generator, k: int) -> np.ndarray:
    """Box-Muller from Philox uniforms (self-contained for reproducibility)."""
    pairs = (k + 1) // 2
    u1 = rng.random(pairs)
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = 2.0 * math.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return z[:k]


def sample_dirichlet(V: VertexSet, cfg: SamplerConfig) -> List[Pmf]:
    """Dirichlet(1)-weighted vertex mixtures.

    Every draw lies in the polytope by convexity.  Uniform over the
    polytope only when it is a segment; see the module note.
    """
    n_d = len(V.vertices)
    if n_d == 0:
        raise DomainError("cannot sample from an empty vertex set")
    vertex_matrix = np.array(
        [[float(c) for c in v.cells] for v in V.vertices], dtype=float
    )
    rng = _rng(cfg.seed)
    draws = []
    for _ in range(cfg.count):
        # -log(1 - U) are iid Exp(1); normalizing gives symmetric Dirichlet(1).
        exponentials = -np.log1p(-rng.random(n_d))
        total = exponentials.sum()
        theta = exponentials / total if total > 0 else np.full(n_d, 1.0 / n_d)
        cells = theta @ vertex_matrix
        draws.append(Pmf(d=V.vertices[0].d, cells=tuple(float(c) for c in cells), mode=FLOAT))
    return draws


def sample_hit_and_run(H: ConstraintMatrix, start: Pmf, cfg: SamplerConfig) -> List[Pmf]:
    """Hit-and-run walk over the feasible polytope, targeting uniformity.

    ``start`` must satisfy the constraints (within ``START_TOL``) and be
    nonnegative.  On a zero-dimensional polytope the single point is
    repeated ``count`` times.
    """
    p0 = start.to_float() if start.mode != FLOAT else start
    if 2**p0.d != H.n_cols:
        raise DomainError(f"start pmf has {2**p0.d} cells but H has {H.n_cols} columns")
    res = max(abs(r) for r in residual(H, p0))
    if res > START_TOL:
        raise DomainError(f"start point violates the constraints (residual {res:.3e})")

    # Exact rational kernel of [H; ones], orthonormalized in floating point.
    ones_row = tuple([Fraction(1)] * H.n_cols)
    basis = frac_nullspace(list(H.rows) + [ones_row], H.n_cols)
    if not basis:
        return [p0] * cfg.count
    B = np.array([[float(v) for v in vec] for vec in basis], dtype=float).T
    N, _ = np.linalg.qr(B)
    k = N.shape[1]

    x0 = np.array(p0.cells, dtype=float)
    c = np.zeros(k)
    point = x0.copy()
    rng = _rng(cfg.seed)
    draws: List[Pmf] = []
    kept = 0
    steps_until_keep = cfg.burn_in

    while kept < cfg.count:
        direction_k = _standard_normals(rng, k)
        norm = np.linalg.norm(direction_k)
        if norm == 0.0:
            continue
        direction_k /= norm
        direction = N @ direction_k

        t_lo, t_hi = -np.inf, np.inf
        for pc, dc in zip(point, direction):
            if dc > CHORD_EPS:
                t_lo = max(t_lo, -pc / dc)
            elif dc < -CHORD_EPS:
                t_hi = min(t_hi, -pc / dc)
        if not (np.isfinite(t_lo) and np.isfinite(t_hi)) or t_hi < t_lo:
            continue  # numerically degenerate chord; resample the direction

        t = t_lo + rng.random() * (t_hi - t_lo)
        c = c + t * direction_k
        point = x0 + N @ c

        if steps_until_keep > 0:
            steps_until_keep -= 1
            continue
        kept += 1
        steps_until_keep = cfg.thinning
        cells = np.maximum(point, 0.0)
        draws.append(Pmf(d=p0.d, cells=tuple(float(v) for v in cells), mode=FLOAT))
    return draws
