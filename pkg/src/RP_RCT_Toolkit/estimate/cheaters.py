"""
Proportion of cheaters from the two FRR subsamples.

Honest answers in subsample s average a_s + b_s * mu, where a_s is the
forced-1 probability and b_s the report-truth probability of that
subsample's map. Cheaters are modelled as answering 0, which makes the two
subsample means identify lambda.
"""
import logging
import math
from typing import Optional

import numpy as np
from scipy.special import xlogy

from ..design import DesignSpec
from ..errors import IdentificationError
from ..utils.settings import get_settings
from .dataset import PrivateDataset
from .types import CheaterEstimate

logger = logging.getLogger(__name__)

BOUNDARY_UPPER = 1.0 - 1e-6
MU_GRID = np.linspace(0.0, 1.0, 10001)


def _split_summary(data: PrivateDataset, label: int):
    rows = data.s == label
    count = int(rows.sum())
    if count == 0:
        raise IdentificationError(
            f"Subsample S={label} is empty: lambda is not identified without both FRR maps"
        )
    ones = int(data.y_tilde[rows].sum())
    return count, ones


def profile_log_likelihood(
    lam: float, counts, ones, spec: DesignSpec, grid: np.ndarray = MU_GRID
) -> float:
    """Binomial log-likelihood of the subsample counts maximised over the honest mean."""
    coef = spec.lambda_coefficients()
    total = np.zeros_like(grid)
    for (a_s, b_s), n_s, k_s in zip(((coef.a1, coef.b1), (coef.a2, coef.b2)), counts, ones):
        p = (1.0 - lam) * (a_s + b_s * grid)
        total += xlogy(k_s, p) + xlogy(n_s - k_s, 1.0 - p)
    return float(np.max(total))


def lambda_variance(m1: float, m2: float, pi1: float, pi2: float, spec: DesignSpec) -> float:
    """n-scaled plug-in variance of the raw estimate."""
    coef = spec.lambda_coefficients()
    det = coef.determinant
    v1, v2 = m1 * (1.0 - m1), m2 * (1.0 - m2)
    return (coef.b2 ** 2 * v1 / pi1 + coef.b1 ** 2 * v2 / pi2) / det ** 2


def estimate_lambda(
    data: PrivateDataset, spec: DesignSpec, tolerance: Optional[float] = None
) -> CheaterEstimate:
    """
    Estimate the proportion of cheaters.

    A raw value outside [0, 1] is replaced by whichever of 0 and 1 - 1e-6 has
    the higher profile likelihood.

    Raises:
        IdentificationError: The maps do not separate lambda or a subsample is empty
    """
    if tolerance is None:
        tolerance = get_settings().lambda_tolerance
    coef = spec.lambda_coefficients()
    det = coef.determinant
    if abs(det) <= tolerance:
        raise IdentificationError(
            f"The two FRR maps do not identify lambda (determinant {det:.3g}); "
            "use maps whose forced probabilities differ"
        )
    n1, k1 = _split_summary(data, 1)
    n2, k2 = _split_summary(data, 2)
    n = n1 + n2
    m1, m2 = k1 / n1, k2 / n2
    raw = 1.0 - (coef.b2 * m1 - coef.b1 * m2) / det
    variance = lambda_variance(m1, m2, n1 / n, n2 / n, spec)
    se = math.sqrt(variance / n)

    if 0.0 <= raw <= 1.0:
        return CheaterEstimate(raw, se, raw, False, variance, n)

    candidates = (0.0, BOUNDARY_UPPER)
    scores = [profile_log_likelihood(c, (n1, n2), (k1, k2), spec) for c in candidates]
    corrected = candidates[int(np.argmax(scores))]
    logger.debug(
        "Raw cheater proportion %.4f outside [0, 1]; boundary likelihood picks %.6g",
        raw,
        corrected,
    )
    return CheaterEstimate(corrected, se, raw, True, variance, n)
