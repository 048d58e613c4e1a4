"""Built-in case-study tables and their published reference values.

Three datasets ship with the package:

* ``example1`` -- a synthetic 3-way probability table with mild pairwise
  dependence, the running demonstration case.
* ``water`` -- a 4-way consumer survey (n=1008) cross-classifying water
  softness, detergent brand preference, previous brand use, and wash
  temperature.
* ``raters`` -- agreement data (n=164) of three raters classifying patient
  responses as negative vs positive-or-neutral.

``REFERENCE`` stores the published values each pipeline stage should
reproduce (odds ratios, moment targets, extreme pmfs, log-linear
coefficients) at their published rounding, for side-by-side comparison by
``bintab reproduce``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError
from .table import Pmf

EXAMPLE1 = "example1"
WATER = "water"
RATERS = "raters"

BUILTIN_NAMES = (EXAMPLE1, WATER, RATERS)

_F = Fraction

EXAMPLE1_CELLS = tuple(
    _F(v, 100) for v in (10, 5, 30, 20, 10, 5, 15, 5)
)
EXAMPLE1_LABELS = ("x1", "x2", "x3")

WATER_COUNTS = (19, 57, 29, 63, 29, 49, 27, 53, 47, 84, 75, 134, 90, 107, 53, 92)
WATER_LABELS = ("water_softness", "brand_preference", "previous_use", "temperature")

RATERS_COUNTS = (113, 5, 5, 7, 4, 3, 3, 24)
RATERS_LABELS = ("rater1", "rater2", "rater3")


def builtin_pmf(name: str) -> Pmf:
    """The built-in table as a rational pmf (counts are normalized)."""
    if name == EXAMPLE1:
        return Pmf.from_cells(EXAMPLE1_CELLS)
    if name == WATER:
        return Pmf.from_counts(list(WATER_COUNTS))
    if name == RATERS:
        return Pmf.from_counts(list(RATERS_COUNTS))
    raise DomainError(f"unknown built-in dataset {name!r}; available: {', '.join(BUILTIN_NAMES)}")


def builtin_labels(name: str):
    return {EXAMPLE1: EXAMPLE1_LABELS, WATER: WATER_LABELS, RATERS: RATERS_LABELS}.get(name)


# --------------------------------------------------------------------------
# Published reference values (at their published rounding).
# --------------------------------------------------------------------------

REFERENCE = {
    EXAMPLE1: {
        "marginal_odds_ratios": {(1, 2): 0.40, (1, 3): 0.64, (2, 3): 1.11},
        "moments_uniform": {(1, 2): 0.194, (1, 3): 0.222, (2, 3): 0.257},
        "vertices_uniform": (
            (0.0, 0.194, 0.222, 0.084, 0.257, 0.05, 0.021, 0.173),
            (0.173, 0.021, 0.05, 0.257, 0.084, 0.222, 0.194, 0.0),
        ),
        "vertices_observed": (
            (0.050, 0.100, 0.350, 0.150, 0.150, 0.0, 0.100, 0.100),
            (0.150, 0.0, 0.250, 0.250, 0.050, 0.100, 0.200, 0.0),
        ),
        # Log-linear coefficients of the uniform-margin extreme pmfs
        # (eps = 1e-8), in subset order (), 1, 2, 3, 12, 13, 23, 123.
        "loglinear": {
            "corner": (
                (-18.42, 17.06, 16.92, 16.78, -19.41, -18.42, -17.75, 21.49),
                (-1.76, -0.72, -1.24, -2.10, 2.08, 3.07, 3.74, -21.49),
            ),
            "zero-mean": (
                (-4.25, 1.76, 1.85, 2.03, -2.17, -1.92, -1.75, 2.69),
                (-4.25, -1.76, -1.85, -2.03, -2.17, -1.92, -1.75, -2.69),
            ),
        },
    },
    WATER: {
        "marginal_odds_ratios": {
            (1, 2): 1.070,
            (2, 3): 0.563,
            (1, 3): 0.966,
            (3, 4): 1.158,
            (2, 4): 0.761,
            (1, 4): 0.737,
        },
        "moments_uniform": {
            (1, 2): 0.254,
            (2, 3): 0.214,
            (1, 3): 0.248,
            (3, 4): 0.259,
            (2, 4): 0.233,
            (1, 4): 0.231,
        },
        "vertex_count": 96,
    },
    RATERS: {
        "pmf": (0.689, 0.03, 0.03, 0.043, 0.024, 0.018, 0.018, 0.146),
        "marginal_odds_ratios": {(1, 2): 37.929, (1, 3): 37.929, (2, 3): 56.672},
        "top_order_odds_ratio": 2.96625,
        "vertices_uniform": (
            (0.372, 0.059, 0.059, 0.011, 0.07, 0.0, 0.0, 0.43),
            (0.43, 0.0, 0.0, 0.07, 0.011, 0.059, 0.059, 0.372),
        ),
        "loglinear": {
            "corner": (
                (-0.99, -1.67, -1.85, -1.85, -13.91, -13.91, 0.19, 33.14),
                (-0.84, -3.65, -17.58, -17.58, 19.23, 19.23, 33.34, -33.14),
            ),
            "zero-mean": (
                (-6.44, -3.65, -0.21, -0.21, 0.66, 0.66, 4.19, 4.14),
                (-6.44, 3.65, 0.21, 0.21, 0.66, 0.66, 4.19, -4.14),
            ),
        },
    },
}
