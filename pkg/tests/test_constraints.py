"""Moment conversion, target derivation, and the constraint matrix."""

import math
from fractions import Fraction

import pytest

from bintab import (
    DomainError,
    InfeasibleTargetsError,
    MarginTargets,
    Pmf,
    UnsupportedTargetError,
    build_H,
    moment_for_margins,
    moment_from_odds_ratio,
    residual,
    satisfies,
    targets_from_pmf,
)
from bintab._linalg import frac_rank
from conftest import EXAMPLE1_VERTEX_A, random_rational_pmf

F = Fraction


class TestMomentFromOddsRatio:
    def test_published_three_digit_values(self, example1):
        assert moment_from_odds_ratio(F(2, 5), 3) == F(194, 1000)
        assert moment_from_odds_ratio(F(16, 25), 3) == F(222, 1000)
        assert moment_from_odds_ratio(F(10, 9), 3) == F(257, 1000)

    def test_independence(self):
        for digits in range(2, 10):
            assert moment_from_odds_ratio(1, digits) == F(1, 4)

    def test_water_pair(self):
        assert moment_from_odds_ratio(F(1070, 1000), 3) == F(254, 1000)

    def test_result_in_open_interval(self):
        for omega in (F(1, 100), F(1, 3), F(7, 2), F(100)):
            mu = moment_from_odds_ratio(omega, 12)
            assert 0 < mu < F(1, 2)

    def test_domain_errors(self):
        for bad in (0, -1, F(-3, 7), math.inf, math.nan):
            with pytest.raises(DomainError):
                moment_from_odds_ratio(bad, 3)

    def test_round_trip_at_high_precision(self):
        # the uniform-margin 2x2 table (mu, 1/2-mu, 1/2-mu, mu) must give
        # back omega up to the rounding of mu
        from bintab import marginal_odds_ratio

        omega = F(7, 3)
        mu = moment_from_odds_ratio(omega, 12)
        p = Pmf.from_cells([mu, F(1, 2) - mu, F(1, 2) - mu, mu])
        assert float(marginal_odds_ratio(p, 1, 2)) == pytest.approx(float(omega), rel=1e-10)


class TestMomentForMargins:
    def test_independence_gives_product(self):
        assert moment_for_margins(1, F(7, 20), F(7, 10), 6) == F(49, 200)

    def test_example1_observed_pairs(self):
        # margins of the running example are (0.35, 0.7, 0.35); its exact
        # odds ratios must map back to its own exact moments
        assert moment_for_margins(F(2, 5), F(7, 20), F(7, 10), 3) == F(1, 5)
        assert moment_for_margins(F(16, 25), F(7, 20), F(7, 20), 3) == F(1, 10)
        assert moment_for_margins(F(10, 9), F(7, 10), F(7, 20), 3) == F(1, 4)

    def test_root_inside_frechet_interval(self):
        import random

        rng = random.Random(5150)
        for _ in range(50):
            a = F(rng.randint(1, 19), 20)
            b = F(rng.randint(1, 19), 20)
            omega = F(rng.randint(1, 400), rng.randint(1, 400))
            mu = moment_for_margins(omega, a, b, 9)
            assert max(F(0), a + b - 1) <= mu <= min(a, b)

    def test_degenerate_margin_rejected(self):
        with pytest.raises(DomainError):
            moment_for_margins(F(1, 2), F(1), F(1, 2), 3)


class TestTargetsFromPmf:
    def test_example1_uniform(self, example1):
        targets = targets_from_pmf(example1, digits=3)
        assert targets.is_uniform
        assert targets.moments == {
            (1, 2): F(194, 1000),
            (1, 3): F(222, 1000),
            (2, 3): F(257, 1000),
        }

    def test_water_uniform_matches_published_column(self, water):
        targets = targets_from_pmf(water, digits=3)
        assert targets.moments == {
            (1, 2): F(254, 1000),
            (1, 3): F(248, 1000),
            (1, 4): F(231, 1000),
            (2, 3): F(214, 1000),
            (2, 4): F(233, 1000),
            (3, 4): F(259, 1000),
        }

    def test_example1_observed(self, example1):
        targets = targets_from_pmf(example1, digits=3, margins="observed")
        assert targets.univariate == (F(7, 20), F(7, 10), F(7, 20))
        assert targets.moments == {(1, 2): F(1, 5), (1, 3): F(1, 10), (2, 3): F(1, 4)}

    def test_infinite_ratio_unsupported(self):
        p = Pmf.from_cells([F(1, 2), F(0), F(0), F(0), F(0), F(0), F(0), F(1, 2)])
        with pytest.raises(UnsupportedTargetError):
            targets_from_pmf(p, digits=3)

    def test_zero_ratio_unsupported(self):
        # no cell has both of the first two axes at 1, so omega_12 = 0
        p = Pmf.from_cells(
            [F(1, 8), F(1, 8), F(1, 8), F(1, 8), F(1, 4), F(1, 4), F(0), F(0)]
        )
        with pytest.raises(UnsupportedTargetError):
            targets_from_pmf(p, digits=3)


class TestMarginTargets:
    def test_missing_pair_rejected(self):
        with pytest.raises(DomainError):
            MarginTargets(d=3, univariate=(F(1, 2),) * 3, moments={(1, 2): F(1, 4)})

    def test_frechet_violation_rejected(self):
        moments = {(1, 2): F(3, 5), (1, 3): F(1, 4), (2, 3): F(1, 4)}
        with pytest.raises(InfeasibleTargetsError) as err:
            MarginTargets.uniform(3, moments)
        assert err.value.pair == (1, 2)

    def test_frechet_boundary_allowed(self):
        MarginTargets.uniform(3, {(1, 2): F(1, 2), (1, 3): F(1, 4), (2, 3): F(1, 4)})

    def test_pair_margin_table(self):
        targets = MarginTargets(
            d=2, univariate=(F(7, 20), F(7, 10)), moments={(1, 2): F(1, 5)}
        )
        assert targets.pair_margin_table(1, 2) == (F(3, 20), F(1, 2), F(3, 20), F(1, 5))


class TestBuildH:
    def test_d3_displayed_matrix(self, example1_H3):
        """The 6x8 system at mu = (0.194, 0.222, 0.257), entry by entry."""
        mu12, mu13, mu23 = F(194, 1000), F(222, 1000), F(257, 1000)
        expected = (
            (1, 1, 1, 1, -1, -1, -1, -1),
            (1, 1, -1, -1, 1, 1, -1, -1),
            (1, -1, 1, -1, 1, -1, 1, -1),
            (mu12, mu12, mu12, mu12, mu12, mu12, mu12 - 1, mu12 - 1),
            (mu13, mu13, mu13, mu13, mu13, mu13 - 1, mu13, mu13 - 1),
            (mu23, mu23, mu23, mu23 - 1, mu23, mu23, mu23, mu23 - 1),
        )
        assert example1_H3.rows == tuple(tuple(F(v) for v in row) for row in expected)
        assert example1_H3.labels == (
            ("margin", 1),
            ("margin", 2),
            ("margin", 3),
            ("moment", 1, 2),
            ("moment", 1, 3),
            ("moment", 2, 3),
        )

    def test_row_count_formula(self, water):
        H = build_H(targets_from_pmf(water, digits=3))
        assert H.n_rows == 4 + 6
        assert H.n_cols == 16

    def test_d4_entries_against_indicator_oracle(self, water):
        # every entry recomputed from the indicator definition of the rows
        H = build_H(targets_from_pmf(water, digits=3))
        for label, row in zip(H.labels, H.rows):
            for k, entry in enumerate(row):
                bits = [(k >> (4 - i)) & 1 for i in range(1, 5)]
                if label[0] == "margin":
                    expected = 1 if bits[label[1] - 1] == 0 else -1
                else:
                    mu = H.targets.moments[(label[1], label[2])]
                    both = bits[label[1] - 1] and bits[label[2] - 1]
                    expected = mu - 1 if both else mu
                assert entry == expected

    def test_uniform_pmf_in_independence_kernel(self):
        targets = MarginTargets.uniform(
            3, {(1, 2): F(1, 4), (1, 3): F(1, 4), (2, 3): F(1, 4)}
        )
        assert satisfies(build_H(targets), Pmf.uniform(3), 0)

    def test_general_margin_rows_accept_source_table(self, example1):
        # the observed-margin system of a table must contain the table itself
        H = build_H(targets_from_pmf(example1, digits=3, margins="observed"))
        assert satisfies(H, example1, 0)

    def test_margin_rows_negate_under_reflection(self, example1_H3):
        for label, row in zip(example1_H3.labels, example1_H3.rows):
            if label[0] == "margin":
                assert tuple(reversed(row)) == tuple(-v for v in row)

    def test_row_space_invariant_under_reflection(self, example1_H3):
        reflected = [tuple(reversed(row)) for row in example1_H3.rows]
        base_rank = frac_rank(example1_H3.rows)
        assert frac_rank(list(example1_H3.rows) + reflected) == base_rank


class TestResidual:
    def test_vertex_in_kernel(self, example1_H3):
        vertex = Pmf.from_cells(list(EXAMPLE1_VERTEX_A))
        assert residual(example1_H3, vertex) == (F(0),) * 6

    def test_source_table_not_in_uniform_kernel(self, example1, example1_H3):
        assert any(r != 0 for r in residual(example1_H3, example1))

    def test_moment_row_identity(self, example1_H3):
        # each moment row applied to any pmf equals mu_target - mu_observed
        import random

        from bintab import second_order_moment

        rng = random.Random(99)
        for _ in range(20):
            p = random_rational_pmf(rng, 3)
            res = residual(example1_H3, p)
            for label, value in zip(example1_H3.labels, res):
                if label[0] == "moment":
                    pair = (label[1], label[2])
                    expected = example1_H3.targets.moments[pair] - second_order_moment(p, *pair)
                    assert value == expected

    def test_dimension_mismatch(self, example1_H3):
        with pytest.raises(DomainError):
            residual(example1_H3, Pmf.uniform(4))
