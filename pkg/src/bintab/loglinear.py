"""Saturated log-linear decompositions of strictly positive binary tables.

``log p_alpha = lambda_0 + sum_S lambda_S_{alpha_S}`` over nonempty subsets
S of the axes.  Two classical codings of the per-level coefficients:

* zero-mean: along every axis in S the per-level coefficients sum to zero,
  so ``lambda_S_{alpha_S} = c_S * prod_{i in S} tau(alpha_i)`` with
  ``tau(1) = +1, tau(0) = -1``.  The stored coefficient is ``c_S``, the
  value at the all-ones level; it equals the character average
  ``2^-d sum_alpha prod_{i in S} tau(alpha_i) log p_alpha``.  Under the
  complement map ``alpha -> 1-alpha`` every stored coefficient picks up the
  factor ``(-1)^{|S|}`` (even orders invariant, odd orders negated).
* corner: the all-zeros cell is the reference; coefficients vanish on any
  level containing a 0 and the stored value is the Moebius alternating sum
  ``sum_{T subset S} (-1)^{|S - T|} log p_{1_T}``.  No complement symmetry.

Tables with zero cells are handled by epsilon-smoothing: logarithms are
taken of ``p_alpha + eps``.  All computation is floating point; rational
input is converted on entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Tuple

from .errors import DomainError
from .table import FLOAT, Pmf

#: Default smoothing constant added to every cell before taking logs.
DEFAULT_EPS = 1e-8

ZERO_MEAN = "zero-mean"
CORNER = "corner"

Subset = Tuple[int, ...]


@dataclass(frozen=True)
class LogLinearParams:
    """Coefficients of a saturated log-linear representation.

    ``coefficients`` maps each subset of axes (a sorted tuple, ``()`` for
    the intercept) to its stored coefficient under ``parametrization``.
    ``eps`` records the smoothing used, so results are reproducible.
    """

    d: int
    parametrization: str
    eps: float
    coefficients: Dict[Subset, float]

    def __post_init__(self):
        if self.parametrization not in (ZERO_MEAN, CORNER):
            raise DomainError(f"unknown parametrization {self.parametrization!r}")
        if len(self.coefficients) != 2**self.d:
            raise DomainError(
                f"expected {2**self.d} coefficients for d={self.d}, got {len(self.coefficients)}"
            )

    def coefficient(self, *axes: int) -> float:
        return self.coefficients[tuple(sorted(axes))]


def _log_cells(p: Pmf, eps: float):
    if eps < 0:
        raise DomainError(f"eps must be >= 0, got {eps}")
    cells = [float(c) + eps for c in p.cells]
    bad = next((k for k, c in enumerate(cells) if c <= 0), None)
    if bad is not None:
        raise DomainError(
            f"cell {bad + 1} is nonpositive after smoothing (eps={eps}); logs are undefined"
        )
    return [math.log(c) for c in cells]


def _subsets(d: int):
    """All axis subsets ordered by size, then lexicographically."""
    out = [()]
    for size in range(1, d + 1):
        out.extend(tuple(c) for c in combinations(range(1, d + 1), size))
    return out


def _character(subset: Subset, offset: int, d: int) -> int:
    """prod_{i in S} tau(alpha_i) for the configuration of the 0-based offset."""
    sign = 1
    for i in subset:
        if not (offset >> (d - i)) & 1:
            sign = -sign
    return sign


def zero_mean_params(p: Pmf, eps: float = DEFAULT_EPS) -> LogLinearParams:
    """Zero-mean coefficients of ``log(p + eps)``.

    The intercept is the mean of the log cells; the coefficient of S is
    the correlation of the log cells with the character of S.
    """
    logs = _log_cells(p, eps)
    n = 2**p.d
    coeffs = {}
    for subset in _subsets(p.d):
        total = math.fsum(
            _character(subset, k, p.d) * logs[k] for k in range(n)
        )
        coeffs[subset] = total / n
    return LogLinearParams(d=p.d, parametrization=ZERO_MEAN, eps=eps, coefficients=coeffs)


def corner_params(p: Pmf, eps: float = DEFAULT_EPS) -> LogLinearParams:
    """Corner coefficients of ``log(p + eps)`` with the all-zeros reference cell."""
    logs = _log_cells(p, eps)
    d = p.d

    def log_at_ones(axes: Subset) -> float:
        offset = 0
        for i in axes:
            offset |= 1 << (d - i)
        return logs[offset]

    coeffs = {}
    for subset in _subsets(d):
        total = 0.0
        for size in range(len(subset) + 1):
            for t in combinations(subset, size):
                total += (-1) ** (len(subset) - size) * log_at_ones(t)
        coeffs[subset] = total
    return LogLinearParams(d=d, parametrization=CORNER, eps=eps, coefficients=coeffs)


def reconstruct(params: LogLinearParams) -> Pmf:
    """Invert a saturated representation back to a (renormalized) float pmf.

    Round trip: ``reconstruct(zero_mean_params(p, eps))`` reproduces
    ``(p + eps) / sum(p + eps)`` up to floating round-off.
    """
    d = params.d
    n = 2**d
    logs = []
    if params.parametrization == ZERO_MEAN:
        for k in range(n):
            logs.append(
                math.fsum(
                    coeff * _character(subset, k, d)
                    for subset, coeff in params.coefficients.items()
                )
            )
    else:
        for k in range(n):
            ones = tuple(i for i in range(1, d + 1) if (k >> (d - i)) & 1)
            ones_set = set(ones)
            logs.append(
                math.fsum(
                    coeff
                    for subset, coeff in params.coefficients.items()
                    if set(subset) <= ones_set
                )
            )
    cells = [math.exp(v) for v in logs]
    total = math.fsum(cells)
    return Pmf(d=d, cells=tuple(c / total for c in cells), mode=FLOAT)
