import math
from unittest import TestCase

import numpy as np

from dspoly.core import (
    CountData,
    Decision,
    DecisionReport,
    Diagnostics,
    NullModel,
    RandomPolytope,
    SimplexPoint,
    TailPair,
    TestConfig,
    chi_squared_stat,
    check_dimensions,
    point_estimate,
    statistic_value,
    validate_counts,
)
from dspoly.core.estimators import EstimatorMode, estimate
from dspoly.core.exceptions import (
    DimensionMismatch,
    EmptyCounts,
    InvalidConfig,
    InvalidInputError,
    InvalidNullModel,
    InvalidTailPair,
    NegativeCount,
    UnknownStatistic,
)
from dspoly.core.statistics import ALL_STATISTICS, TestStatisticSpec


class CountDataTest(TestCase):
    def test_validate_counts(self) -> None:
        data = validate_counts([3, 2, 5])
        self.assertEqual(data.k, 3)
        self.assertEqual(data.n, 10)

    def test_minimal_input(self) -> None:
        data = validate_counts([1, 0])
        self.assertEqual(data.k, 2)
        self.assertEqual(data.n, 1)

    def test_negative_count(self) -> None:
        with self.assertRaises(NegativeCount):
            validate_counts([-1, 2])

    def test_single_cell(self) -> None:
        with self.assertRaises(EmptyCounts):
            validate_counts([4])

    def test_all_zero(self) -> None:
        with self.assertRaises(EmptyCounts):
            validate_counts([0, 0, 0])

    def test_non_integer(self) -> None:
        with self.assertRaises(InvalidConfig):
            validate_counts([1.5, 2])

    def test_total_must_match(self) -> None:
        with self.assertRaises(InvalidConfig):
            CountData(counts=(1, 2), n=4)

    def test_errors_are_input_errors(self) -> None:
        self.assertTrue(issubclass(NegativeCount, InvalidInputError))
        self.assertTrue(issubclass(DimensionMismatch, InvalidInputError))


class NullModelTest(TestCase):
    def test_uniform(self) -> None:
        null = NullModel.uniform(4)
        self.assertEqual(null.k, 4)
        self.assertAlmostEqual(sum(null.p0), 1.0)

    def test_must_sum_to_one(self) -> None:
        with self.assertRaises(InvalidNullModel):
            NullModel(p0=(0.7, 0.2))

    def test_must_be_positive(self) -> None:
        with self.assertRaises(InvalidNullModel):
            NullModel(p0=(1.0, 0.0))

    def test_dimensions(self) -> None:
        check_dimensions(3, 3, 3)
        with self.assertRaises(DimensionMismatch):
            check_dimensions(3, 4)


class EstimatorTest(TestCase):
    def test_laplace(self) -> None:
        p = point_estimate(validate_counts([3, 2, 5]), EstimatorMode.LAPLACE)
        for actual, expected in zip(p.p, (4 / 13, 3 / 13, 6 / 13)):
            self.assertAlmostEqual(actual, expected, places=12)

    def test_centroid(self) -> None:
        p = point_estimate(validate_counts([3, 2, 5]), EstimatorMode.CENTROID)
        for actual, expected in zip(p.p, (10 / 33, 7 / 33, 16 / 33)):
            self.assertAlmostEqual(actual, expected, places=12)

    def test_mle_degenerate(self) -> None:
        p = point_estimate(validate_counts([0, 0, 4]), EstimatorMode.MLE)
        self.assertEqual(p.p, (0.0, 0.0, 1.0))

    def test_vectorized(self) -> None:
        counts = np.array([[3, 2, 5], [0, 0, 4]])
        estimates = estimate(counts, EstimatorMode.LAPLACE)
        self.assertEqual(estimates.shape, (2, 3))
        np.testing.assert_allclose(estimates.sum(axis=-1), [1.0, 1.0])

    def test_estimates_sum_to_one(self) -> None:
        rng = np.random.default_rng(8)
        for k in (2, 3, 7, 40):
            counts = rng.integers(0, 30, size=(100, k))
            counts[:, 0] += 1
            for mode in EstimatorMode:
                for row in counts:
                    p = point_estimate(validate_counts(row.tolist()), mode)
                    self.assertAlmostEqual(math.fsum(p.p), 1.0, places=12)
                    self.assertTrue(all(value >= 0.0 for value in p.p))

    def test_simplex_point_validation(self) -> None:
        with self.assertRaises(InvalidConfig):
            SimplexPoint(p=(0.5, 0.6))


class StatisticTest(TestCase):
    def test_identity(self) -> None:
        p = SimplexPoint(p=(1 / 3, 1 / 3, 1 / 3))
        self.assertAlmostEqual(chi_squared_stat(p, NullModel.uniform(3), 10), 0.0)

    def test_laplace_example(self) -> None:
        p = SimplexPoint(p=(4 / 13, 3 / 13, 6 / 13))
        value = chi_squared_stat(p, NullModel.uniform(3), 10)
        self.assertAlmostEqual(value, 0.82840, places=5)

    def test_vertex_example(self) -> None:
        p = SimplexPoint(p=(1.0, 0.0, 0.0))
        self.assertAlmostEqual(chi_squared_stat(p, NullModel.uniform(3), 3), 6.0)

    def test_convex_in_p(self) -> None:
        rng = np.random.default_rng(21)
        for k in (2, 4, 9):
            null = NullModel.uniform(k)

            def value(point: np.ndarray) -> float:
                return chi_squared_stat(
                    SimplexPoint(p=tuple(float(v) for v in point)), null, 20
                )

            for _ in range(200):
                p, q = rng.dirichlet(np.ones(k), size=2)
                weight = float(rng.random())
                mix = value(weight * p + (1.0 - weight) * q)
                chord = weight * value(p) + (1.0 - weight) * value(q)
                self.assertLessEqual(mix, chord + 1e-9)

    def test_dimension_mismatch(self) -> None:
        with self.assertRaises(DimensionMismatch):
            chi_squared_stat(SimplexPoint(p=(0.5, 0.5)), NullModel.uniform(3), 3)

    def test_root_chi_squared(self) -> None:
        p = SimplexPoint(p=(1.0, 0.0, 0.0))
        spec = TestStatisticSpec.of("root_chi_squared")
        value = statistic_value(spec, p, NullModel.uniform(3), 3)
        self.assertAlmostEqual(value, 6.0**0.5)

    def test_registry(self) -> None:
        self.assertIn("chi_squared", ALL_STATISTICS)
        self.assertIn("root_chi_squared", ALL_STATISTICS)
        with self.assertRaises(UnknownStatistic):
            TestStatisticSpec.of("kolmogorov")

    def test_bad_resolution(self) -> None:
        with self.assertRaises(InvalidConfig):
            TestStatisticSpec(fallback_resolution=0)


class ConfigTest(TestCase):
    def test_defaults(self) -> None:
        config = TestConfig(seed=7)
        self.assertEqual(config.alpha, 0.05)
        self.assertEqual(config.replicates, 1000)
        self.assertEqual(config.weaken_alpha, 0.0)
        self.assertEqual(config.estimator, EstimatorMode.CENTROID)
        self.assertEqual(config.statistic.kind, "chi_squared")

    def test_invalid_values(self) -> None:
        with self.assertRaises(InvalidConfig):
            TestConfig(seed=7, alpha=1.0)
        with self.assertRaises(InvalidConfig):
            TestConfig(seed=7, replicates=0)
        with self.assertRaises(InvalidConfig):
            TestConfig(seed=7, weaken_alpha=-1.0)
        with self.assertRaises(InvalidConfig):
            TestConfig(seed=2**64)

    def test_to_dict(self) -> None:
        data = TestConfig(seed=7, estimator=EstimatorMode.LAPLACE).to_dict()
        self.assertEqual(data["seed"], 7)
        self.assertEqual(data["estimator"], "laplace")
        self.assertEqual(data["anchor"], "null")


class TailPairTest(TestCase):
    def test_ordering(self) -> None:
        TailPair(q_lower_env=0.0, q_upper_env=0.0)
        TailPair(q_lower_env=0.2, q_upper_env=1.0)
        with self.assertRaises(InvalidTailPair):
            TailPair(q_lower_env=0.3, q_upper_env=0.2)
        with self.assertRaises(InvalidTailPair):
            TailPair(q_lower_env=-0.1, q_upper_env=0.2)

    def test_belief_and_plausibility(self) -> None:
        data = validate_counts([3, 2, 5])
        report = DecisionReport(
            data=data,
            null=NullModel.uniform(3),
            config=TestConfig(seed=1),
            t_obs=1.0,
            point_estimate=point_estimate(data, EstimatorMode.CENTROID),
            tails=TailPair(q_lower_env=0.25, q_upper_env=0.75),
            decision=Decision.UNKNOWN,
            diagnostics=Diagnostics(q_mean_env=0.5, mean_width=0.1),
        )
        self.assertAlmostEqual(report.belief, 0.25)
        self.assertAlmostEqual(report.plausibility, 0.75)

    def test_friendly_names(self) -> None:
        self.assertEqual(
            Decision.ACCEPT.friendly_name, "Accept (fail-to-reject with confidence)"
        )
        self.assertEqual(Decision.REJECT.friendly_name, "Reject")


class RandomPolytopeTest(TestCase):
    def test_validation(self) -> None:
        poly = RandomPolytope(z0=0.1, z=(0.5, 0.2, 0.2))
        self.assertEqual(poly.k, 3)
        with self.assertRaises(InvalidConfig):
            RandomPolytope(z0=0.1, z=(0.5, 0.2, 0.3))
        with self.assertRaises(InvalidConfig):
            RandomPolytope(z0=1.5, z=(0.0, -0.5))
