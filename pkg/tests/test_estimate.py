#!/usr/bin/env python3
"""
Tests for the cheater proportion, the honest-effect estimators, inference
and the bootstrap.
"""

import os
import sys
import unittest

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from conftest import arm_counts, split_counts

from RP_RCT_Toolkit.design import DesignSpec
from RP_RCT_Toolkit.errors import DegenerateDataError, IdentificationError, SchemaError
from RP_RCT_Toolkit.estimate import (
    CheaterEstimate,
    EffectEstimate,
    EstimateReport,
    Method,
    MultiOutcomeDataset,
    PrivateDataset,
    bootstrap_se,
    covariate_balance,
    estimate_classical,
    estimate_lambda,
    estimate_outcome,
    estimate_outcomes,
    estimate_tau_h_cov,
    estimate_tau_h_diff,
    wald_test,
)
from RP_RCT_Toolkit.mechanism import FrrParams


class TestPrivateDataset(unittest.TestCase):

    def test_codes_validated(self):
        with self.assertRaises(SchemaError) as ctx:
            PrivateDataset([0, 1], [0, 1], [1, 3])
        self.assertEqual(ctx.exception.column, "s")
        self.assertEqual(ctx.exception.row, 1)

    def test_lengths_must_match(self):
        with self.assertRaises(SchemaError):
            PrivateDataset([0, 1, 1], [0, 1], [1, 2])

    def test_columns_are_read_only(self):
        data = PrivateDataset([0, 1], [0, 1], [1, 2])
        with self.assertRaises(ValueError):
            data.y_tilde[0] = 1

    def test_relabeled_swaps_subsamples(self):
        data = PrivateDataset([0, 1, 1], [0, 1, 0], [1, 2, 2])
        self.assertEqual(data.relabeled().s.tolist(), [2, 1, 1])

    def test_frame_column_order(self):
        data = PrivateDataset([0, 1], [0, 1], [1, 2], {"age": [20.0, 21.0]}, ids=[7, 8])
        self.assertEqual(list(data.to_frame().columns), ["id", "s", "a", "y_tilde", "age"])

    def test_unknown_outcome(self):
        multi = MultiOutcomeDataset({"attention": [0, 1]}, [0, 1], [1, 2])
        with self.assertRaises(KeyError):
            multi.dataset("retention")


class TestEstimateLambda(unittest.TestCase):

    def setUp(self):
        self.spec = DesignSpec.symmetric(0.5, 0.1, 0.2)

    def test_worked_example(self):
        lam = estimate_lambda(split_counts(50, 23, 50, 22), self.spec)
        self.assertAlmostEqual(lam.lambda_hat, 0.24, places=12)
        self.assertFalse(lam.boundary_corrected)
        self.assertGreater(lam.se, 0)

    def test_relabeling_invariance(self):
        data = split_counts(50, 23, 50, 22)
        lam = estimate_lambda(data, self.spec)
        swapped = estimate_lambda(data.relabeled(), self.spec.swapped())
        self.assertAlmostEqual(lam.lambda_hat, swapped.lambda_hat, places=12)
        self.assertAlmostEqual(lam.se, swapped.se, places=12)

    def test_negative_raw_value_goes_to_zero(self):
        lam = estimate_lambda(split_counts(50, 25, 50, 30), self.spec)
        self.assertLess(lam.raw_value, 0)
        self.assertTrue(lam.boundary_corrected)
        self.assertEqual(lam.lambda_hat, 0.0)

    def test_identical_maps_not_identified(self):
        spec = DesignSpec.degenerate(0.5, FrrParams(0.1, 0.1), FrrParams(0.1, 0.1))
        with self.assertRaises(IdentificationError):
            estimate_lambda(split_counts(50, 23, 50, 22), spec)

    def test_empty_subsample(self):
        data = PrivateDataset([0, 1, 1, 0], [0, 1, 0, 1], [1, 1, 1, 1])
        with self.assertRaises(IdentificationError):
            estimate_lambda(data, self.spec)


class TestHonestEffect(unittest.TestCase):

    def setUp(self):
        self.spec = DesignSpec.symmetric(0.5, 0.2, 0.1)
        self.data = arm_counts(10, 6, 10, 4)

    def test_difference_estimator(self):
        est = estimate_tau_h_diff(self.data, self.spec, CheaterEstimate.fixed(0.2))
        self.assertAlmostEqual(est.tau_hat, 0.2 / (0.8 * 0.7), places=12)
        self.assertAlmostEqual(est.tau_hat, 0.35714, places=5)
        self.assertIs(est.method, Method.H_DIFF)
        self.assertLess(est.ci[0], est.tau_hat)
        self.assertGreater(est.ci[1], est.tau_hat)

    def test_covariate_estimator_with_arm_means_equals_difference(self):
        lam = CheaterEstimate.fixed(0.2)
        diff = estimate_tau_h_diff(self.data, self.spec, lam)
        cov = estimate_tau_h_cov(self.data, self.spec, lam, (0.6, 0.4))
        self.assertAlmostEqual(cov.tau_hat, diff.tau_hat, places=12)

    def test_empty_arm(self):
        data = PrivateDataset([0, 1, 1], [1, 1, 1], [1, 2, 1])
        with self.assertRaises(DegenerateDataError):
            estimate_tau_h_diff(data, self.spec, CheaterEstimate.fixed(0.0))

    def test_vanishing_denominator(self):
        with self.assertRaises(DegenerateDataError):
            estimate_tau_h_diff(self.data, self.spec, CheaterEstimate.fixed(1.0 - 1e-6))

    def test_predictions_outside_unit_interval(self):
        from RP_RCT_Toolkit.errors import ModelFitError

        with self.assertRaises(ModelFitError):
            estimate_tau_h_cov(self.data, self.spec, CheaterEstimate.fixed(0.0), (1.2, 0.4))

    def test_constant_responses_floor_se(self):
        data = arm_counts(10, 10, 10, 10)
        est = estimate_tau_h_diff(data, self.spec, CheaterEstimate.fixed(0.0))
        self.assertEqual(est.tau_hat, 0.0)
        self.assertTrue(est.se_floored)
        self.assertGreater(est.se_analytic, 0)


class TestClassical(unittest.TestCase):

    def test_hand_dataset(self):
        data = PrivateDataset([1, 0, 0, 0], [1, 1, 0, 0], [1, 2, 1, 2])
        diff, cov = estimate_classical(data, 0.5, models=(0.5, 0.0))
        self.assertAlmostEqual(diff.tau_hat, 0.5)
        self.assertAlmostEqual(cov.tau_hat, 0.5)
        self.assertIs(diff.method, Method.DIFF)
        self.assertIs(cov.method, Method.COV)

    def test_no_privacy_reduces_to_classical(self):
        data = arm_counts(12, 7, 9, 3)
        spec = DesignSpec.degenerate(0.5, FrrParams(0.0, 0.0), FrrParams(0.0, 0.0))
        honest = estimate_tau_h_diff(data, spec, CheaterEstimate.fixed(0.0))
        diff, _ = estimate_classical(data, 0.5)
        self.assertAlmostEqual(honest.tau_hat, diff.tau_hat, places=12)


class TestWald(unittest.TestCase):

    def test_null_estimate(self):
        est = EffectEstimate.build(0.0, 1.0, 100, 0.05, Method.H_DIFF)
        result = wald_test(est)
        self.assertEqual(result.t, 0.0)
        self.assertAlmostEqual(result.p_value, 1.0)
        self.assertFalse(result.reject)

    def test_boundary_statistic(self):
        est = EffectEstimate.build(0.196, 1.0, 100, 0.05, Method.H_DIFF)
        result = wald_test(est)
        self.assertAlmostEqual(result.t, 1.96, places=9)
        self.assertAlmostEqual(result.p_value, 0.05, places=3)
        self.assertTrue(result.reject)

    def test_shifted_null(self):
        est = EffectEstimate.build(0.3, 1.0, 100, 0.05, Method.H_DIFF)
        self.assertAlmostEqual(wald_test(est, tau0=0.3).t, 0.0)

    def test_bootstrap_se_used_when_requested(self):
        est = EffectEstimate.build(0.2, 1.0, 100, 0.05, Method.H_DIFF)
        est = est.with_bootstrap(0.2, (-0.2, 0.6))
        self.assertAlmostEqual(wald_test(est, bootstrap=True).t, 1.0)
        self.assertAlmostEqual(wald_test(est).t, 2.0)


class TestBootstrap(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(11)
        n = 300
        self.spec = DesignSpec.symmetric(0.5, 0.45, 0.05)
        self.data = PrivateDataset(
            (rng.random(n) < 0.5).astype(int),
            (rng.random(n) < 0.5).astype(int),
            1 + (rng.random(n) < 0.5).astype(int),
        )

    def test_too_few_resamples(self):
        with self.assertRaises(ValueError):
            bootstrap_se(self.data, self.spec, [Method.H_DIFF], B=99, seed=1)

    def test_deterministic_for_seed(self):
        first = bootstrap_se(self.data, self.spec, [Method.H_DIFF], B=100, seed=5, n_jobs=1)
        second = bootstrap_se(self.data, self.spec, [Method.H_DIFF], B=100, seed=5, n_jobs=1)
        self.assertEqual(first, second)
        self.assertEqual(first.resamples + first.skipped, 100)
        self.assertGreater(first.se["HDiff"], 0)
        low, high = first.ci["lambda"]
        self.assertLessEqual(low, high)

    @pytest.mark.slow
    def test_independent_of_worker_count(self):
        serial = bootstrap_se(self.data, self.spec, [Method.H_DIFF], B=100, seed=5, n_jobs=1)
        parallel = bootstrap_se(self.data, self.spec, [Method.H_DIFF], B=100, seed=5, n_jobs=2)
        self.assertEqual(serial.se, parallel.se)
        self.assertEqual(serial.ci, parallel.ci)

    def test_classical_methods_rejected(self):
        with self.assertRaises(ValueError):
            bootstrap_se(self.data, self.spec, [Method.DIFF], B=100, seed=5)


def test_balance_rows(noise_dataset):
    rows = covariate_balance(noise_dataset)
    names = [row.covariate for row in rows]
    assert names[0] == "age"
    assert {"group[east]", "group[north]", "group[south]"} <= set(names)
    assert all(row.smd is not None for row in rows)


def test_balance_constant_and_missing():
    x = {"const": [1.0, 1.0, 1.0, 1.0], "gone": [np.nan] * 4}
    data = PrivateDataset([0, 1, 0, 1], [0, 1, 0, 1], [1, 2, 1, 2], x)
    rows = {row.covariate: row for row in covariate_balance(data)}
    assert rows["const"].smd is None and rows["const"].note == "constant"
    assert rows["gone"].note == "all missing"


def test_full_report(noise_dataset, wide_spec):
    report = estimate_outcome(noise_dataset, wide_spec, alpha=0.05)
    assert report.outcome == "y_tilde"
    assert report.n == 400
    assert 0.0 <= report.lam.lambda_hat <= 1.0
    assert set(report.wald) == {"HDiff", "HCov"}
    assert report.balance
    assert report.lambda_se == report.lam.se
    restored = EstimateReport.from_dict(report.to_dict())
    assert restored.h_cov.tau_hat == report.h_cov.tau_hat
    assert restored.lam == report.lam


def test_multi_outcome_reports(wide_spec):
    rng = np.random.default_rng(8)
    n = 200
    outcomes = {name: (rng.random(n) < 0.5).astype(int) for name in ("attention", "retention")}
    multi = MultiOutcomeDataset(
        outcomes, (rng.random(n) < 0.5).astype(int), 1 + (rng.random(n) < 0.5).astype(int)
    )
    reports = estimate_outcomes(multi, wide_spec)
    assert [r.outcome for r in reports] == ["attention", "retention"]


if __name__ == '__main__':
    unittest.main()
