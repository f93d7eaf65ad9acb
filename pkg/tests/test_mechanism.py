#!/usr/bin/env python3
"""
Tests for forced randomized response and its privacy accounting.
"""

import math
import os
import sys
import unittest

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from RP_RCT_Toolkit.errors import DesignError
from RP_RCT_Toolkit.mechanism import (
    FrrParams,
    PrivacyLoss,
    Prompt,
    channel_epsilon,
    epsilon_from_sum,
    epsilon_general,
    epsilon_symmetric,
    epsilon_variants,
    mixture_channel,
    privatize,
    privatize_many,
    response_distribution,
    sample_prompt,
    sample_prompts,
)


class TestFrrParams(unittest.TestCase):

    def test_valid_map(self):
        frr = FrrParams(0.1, 0.2)
        self.assertAlmostEqual(frr.truth_probability, 0.7)
        self.assertFalse(frr.is_symmetric)
        self.assertEqual(FrrParams.from_dict(frr.to_dict()), frr)

    def test_invalid_maps_rejected(self):
        invalid = [(0.5, 0.5), (0.7, 0.4), (-0.1, 0.2), (0.2, 1.1), (float("nan"), 0.1)]
        for r0, r1 in invalid:
            with self.subTest(r0=r0, r1=r1):
                with self.assertRaises(DesignError):
                    FrrParams(r0, r1)


class TestPrivatize(unittest.TestCase):

    def test_forced_prompts_ignore_truth(self):
        for y in (0, 1):
            self.assertEqual(privatize(y, Prompt.FORCE0), 0)
            self.assertEqual(privatize(y, Prompt.FORCE1), 1)

    def test_report_truth(self):
        self.assertEqual(privatize(0, Prompt.REPORT_TRUTH), 0)
        self.assertEqual(privatize(1, Prompt.REPORT_TRUTH), 1)

    def test_non_binary_rejected(self):
        with self.assertRaises(ValueError):
            privatize(2, Prompt.REPORT_TRUTH)

    def test_vectorised_matches_scalar(self):
        y = np.array([0, 1, 0, 1, 0, 1])
        prompts = np.array([0, 0, 1, 1, 2, 2])
        expected = [privatize(int(v), int(p)) for v, p in zip(y, prompts)]
        self.assertEqual(privatize_many(y, prompts).tolist(), expected)


def test_response_distribution():
    frr = FrrParams.symmetric(0.1)
    assert response_distribution(frr, 1) == pytest.approx(0.9)
    assert response_distribution(frr, 0) == pytest.approx(0.1)


def test_prompt_frequencies():
    frr = FrrParams(0.1, 0.2)
    prompts = sample_prompts(frr, 200000, np.random.default_rng(1))
    assert np.mean(prompts == Prompt.FORCE0) == pytest.approx(0.1, abs=0.005)
    assert np.mean(prompts == Prompt.FORCE1) == pytest.approx(0.2, abs=0.005)
    assert np.mean(prompts == Prompt.REPORT_TRUTH) == pytest.approx(0.7, abs=0.005)


def test_single_prompt_is_enum():
    assert isinstance(sample_prompt(FrrParams(0.1, 0.1), np.random.default_rng(0)), Prompt)


def test_truthful_map_always_reports_truth():
    prompts = sample_prompts(FrrParams(0.0, 0.0), 1000, np.random.default_rng(3))
    assert (prompts == Prompt.REPORT_TRUTH).all()


@pytest.mark.slow
def test_channel_matches_response_distribution():
    rng = np.random.default_rng(2)
    draws = 1_000_000
    for _ in range(10):
        frr = FrrParams(*rng.uniform(0.0, 0.45, size=2))
        for y in (0, 1):
            reports = privatize_many(np.full(draws, y), sample_prompts(frr, draws, rng))
            expected = response_distribution(frr, y)
            se = math.sqrt(expected * (1 - expected) / draws)
            assert abs(reports.mean() - expected) <= 4 * se


@pytest.mark.slow
def test_empirical_privacy_ratio_within_bound():
    rng = np.random.default_rng(5)
    draws = 1_000_000
    for _ in range(10):
        maps = [FrrParams.symmetric(r) for r in rng.uniform(0.05, 0.45, size=2)]
        bound = epsilon_general(maps).epsilon
        rates = []
        for y in (1, 0):
            split = (rng.random(draws) < 0.5).astype(int)
            reports = np.empty(draws, dtype=np.int8)
            for label, params in enumerate(maps):
                rows = split == label
                prompts = sample_prompts(params, int(rows.sum()), rng)
                reports[rows] = privatize_many(np.full(int(rows.sum()), y), prompts)
            rates.append(reports.mean())
        assert channel_epsilon(*rates) <= bound + 0.03


class TestPrivacyLoss(unittest.TestCase):

    def test_quarter_maps_give_ln3(self):
        self.assertAlmostEqual(epsilon_symmetric(0.25, 0.25).epsilon, math.log(3.0))

    def test_symmetric_matches_closed_form(self):
        for r, r_prime in ((0.1492, 0.0892), (0.3, 0.1), (0.45, 0.05)):
            self.assertAlmostEqual(
                epsilon_symmetric(r, r_prime).epsilon, epsilon_from_sum(r + r_prime), places=12
            )

    def test_truthful_maps_are_not_private(self):
        loss = epsilon_symmetric(0.0, 0.0)
        self.assertTrue(math.isinf(loss.epsilon))
        self.assertFalse(loss.is_private)
        self.assertEqual(loss.to_json(), "inf")
        self.assertEqual(PrivacyLoss.from_json("inf"), loss)

    def test_symmetric_r_range(self):
        with self.assertRaises(DesignError):
            epsilon_symmetric(0.5, 0.1)

    def test_case_study_maps_strictly_infinite(self):
        variants = epsilon_variants(FrrParams(0.0, 0.104), FrrParams(0.0, 0.1667))
        self.assertTrue(math.isinf(variants.strict.epsilon))
        self.assertAlmostEqual(variants.formula.epsilon, math.log(2 / 0.2707 - 1), places=9)
        self.assertAlmostEqual(variants.one_sided.epsilon, math.log(1 / 0.13535), places=9)

    def test_channel_epsilon_is_symmetric_in_inputs(self):
        self.assertAlmostEqual(channel_epsilon(0.8, 0.3), channel_epsilon(0.3, 0.8))
        self.assertEqual(channel_epsilon(0.4, 0.4), 0.0)

    def test_mixture_weights_validated(self):
        maps = [FrrParams(0.1, 0.1), FrrParams(0.2, 0.2)]
        with self.assertRaises(DesignError):
            mixture_channel(maps, [0.7, 0.7])
        with self.assertRaises(DesignError):
            mixture_channel(maps, [1.0])

    def test_general_defaults_to_equal_split(self):
        maps = [FrrParams(0.1, 0.1), FrrParams(0.2, 0.2)]
        self.assertEqual(epsilon_general(maps), epsilon_general(maps, [0.5, 0.5]))


if __name__ == '__main__':
    unittest.main()
