"""
Shared fixtures for the RP_RCT_Toolkit test suite.
"""

import os
import sys

import numpy as np
import pytest

# Add the src directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from RP_RCT_Toolkit.design import DesignSpec
from RP_RCT_Toolkit.estimate import PrivateDataset


def split_counts(n1, ones1, n2, ones2):
    """Dataset with the given size and number of 1 reports in each subsample."""
    y = [1] * ones1 + [0] * (n1 - ones1) + [1] * ones2 + [0] * (n2 - ones2)
    s = [1] * n1 + [2] * n2
    a = [i % 2 for i in range(n1 + n2)]
    return PrivateDataset(y, a, s)


def arm_counts(n1, ones1, n0, ones0):
    """Dataset with the given size and number of 1 reports in each arm."""
    y = [1] * ones1 + [0] * (n1 - ones1) + [1] * ones0 + [0] * (n0 - ones0)
    a = [1] * n1 + [0] * n0
    s = [1 + i % 2 for i in range(n1 + n0)]
    return PrivateDataset(y, a, s)


@pytest.fixture
def lambda_spec():
    """Symmetric maps r = 0.1, r' = 0.2 (determinant -0.1)."""
    return DesignSpec.symmetric(0.5, 0.1, 0.2)


@pytest.fixture
def wide_spec():
    """Well separated maps; lambda is estimated precisely."""
    return DesignSpec.symmetric(0.5, 0.45, 0.05)


@pytest.fixture
def noise_dataset():
    """400 honest-looking reports with covariates, consistent with lambda = 0 under wide_spec."""
    rng = np.random.default_rng(2024)
    n = 400
    x = {
        "age": rng.normal(20.0, 2.0, n),
        "group": rng.choice(["north", "south", "east"], n).astype(object),
    }
    return PrivateDataset(
        (rng.random(n) < 0.5).astype(int),
        (rng.random(n) < 0.5).astype(int),
        1 + (rng.random(n) < 0.5).astype(int),
        x,
        ids=np.arange(1, n + 1),
    )
