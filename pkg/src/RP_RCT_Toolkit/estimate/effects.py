"""
Treatment-effect estimators: the honest-participant effect from privatized
responses, and the classical baselines on true responses.
"""
import logging
from typing import Optional, Tuple, Union

import numpy as np
from scipy.stats import norm

from ..design import DesignSpec
from ..errors import DegenerateDataError, ModelFitError
from ..glm import WorkingModels, fit_working_models
from ..utils.settings import get_settings
from .dataset import PrivateDataset
from .types import CheaterEstimate, EffectEstimate, Method, WaldResult

logger = logging.getLogger(__name__)

Predictions = Union[WorkingModels, Tuple[np.ndarray, np.ndarray]]


def _arm_summary(data: PrivateDataset) -> Tuple[float, float, float]:
    """(mean y among treated, mean y among controls, treated fraction)."""
    treated = data.a == 1
    n1 = int(treated.sum())
    if n1 == 0 or n1 == data.n:
        arm = 1 if n1 == 0 else 0
        raise DegenerateDataError(f"Treatment arm A={arm} is empty")
    y = data.y_tilde
    return float(y[treated].mean()), float(y[~treated].mean()), n1 / data.n


def _denominator(spec: DesignSpec, lam: CheaterEstimate, tolerance: Optional[float]) -> float:
    if tolerance is None:
        tolerance = get_settings().denominator_tolerance
    denom = (1.0 - lam.lambda_hat) * spec.masking_factor()
    if denom <= tolerance:
        raise DegenerateDataError(
            f"(1 - lambda) * masking factor = {denom:.3g} is too small to rescale the "
            "effect: almost every answer is a cheater's or forced; use FRR maps with "
            "smaller forced probabilities or collect more honest responses"
        )
    return denom


def _lambda_term(lam: CheaterEstimate) -> float:
    return lam.variance / (1.0 - lam.lambda_hat) ** 2


def _finish(
    tau: float, variance: float, n: int, alpha: float, method: Method, lam=None
) -> EffectEstimate:
    settings = get_settings()
    estimate = EffectEstimate.build(tau, variance, n, alpha, method, lam, settings.se_floor)
    if estimate.se_floored:
        logger.debug(
            "%s: analytic standard error is zero (constant responses in an arm), "
            "floored at %g",
            method.label,
            settings.se_floor,
        )
    return estimate


def estimate_tau_h_diff(
    data: PrivateDataset,
    spec: DesignSpec,
    lam: CheaterEstimate,
    alpha: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> EffectEstimate:
    """
    Difference in privatized arm means, rescaled by (1 - lambda) * masking factor.

    Raises:
        DegenerateDataError: Empty arm or vanishing rescaling factor
    """
    alpha = get_settings().alpha if alpha is None else alpha
    p1, p0, pi = _arm_summary(data)
    denom = _denominator(spec, lam, tolerance)
    tau = (p1 - p0) / denom
    variance = (p1 * (1 - p1) / pi + p0 * (1 - p0) / (1 - pi)) / denom ** 2
    variance += tau ** 2 * (2.0 + _lambda_term(lam))
    return _finish(tau, variance, data.n, alpha, Method.H_DIFF, lam)


def _predictions(data: PrivateDataset, models: Predictions) -> Tuple[np.ndarray, np.ndarray]:
    if hasattr(models, "predict"):
        f1, f0 = models.predict(data)
    else:
        f1, f0 = (np.broadcast_to(np.asarray(f, dtype=float), (data.n,)) for f in models)
    for name, values in (("f1", f1), ("f0", f0)):
        if not np.all((values >= 0.0) & (values <= 1.0)):
            raise ModelFitError(f"Working-model predictions {name} fall outside [0, 1]")
    return f1, f0


def _augmented_terms(y, a, f1, f0, delta):
    treated = (y - f1) * a / delta + f1
    control = (y - f0) * (1 - a) / (1 - delta) + f0
    return treated, control


def estimate_tau_h_cov(
    data: PrivateDataset,
    spec: DesignSpec,
    lam: CheaterEstimate,
    models: Predictions,
    alpha: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> EffectEstimate:
    """
    Doubly robust estimate with working models of the privatized outcome.

    Weights use the design's treatment probability, not the realized
    treated fraction.

    Args:
        models: Fitted WorkingModels, or a pair (f1, f0) of per-row predictions
    """
    alpha = get_settings().alpha if alpha is None else alpha
    _arm_summary(data)
    denom = _denominator(spec, lam, tolerance)
    f1, f0 = _predictions(data, models)
    y = data.y_tilde.astype(float)
    a = data.a.astype(float)
    delta = spec.delta
    treated, control = _augmented_terms(y, a, f1, f0, delta)
    tau = (treated.mean() - control.mean()) / denom

    rows1, rows0 = data.a == 1, data.a == 0
    inner = (
        np.mean((f1 - f0) ** 2)
        + np.mean((y[rows1] - f1[rows1]) ** 2) / delta
        + np.mean((y[rows0] - f0[rows0]) ** 2) / (1 - delta)
    )
    variance = inner / denom ** 2 + tau ** 2 * (1.0 + _lambda_term(lam))
    return _finish(float(tau), float(variance), data.n, alpha, Method.H_COV, lam)


def estimate_classical(
    data: PrivateDataset,
    delta: float,
    models: Optional[Predictions] = None,
    alpha: Optional[float] = None,
) -> Tuple[EffectEstimate, EffectEstimate]:
    """
    Difference in means and the covariate-adjusted estimator on true outcomes.

    Args:
        data: Dataset whose response column holds true (non-private) outcomes
        delta: Treatment probability of the design
        models: Outcome models for the adjusted estimator; fitted per arm
            (AIC-selected) when omitted

    Returns:
        (difference in means, covariate-adjusted) estimates
    """
    alpha = get_settings().alpha if alpha is None else alpha
    p1, p0, pi = _arm_summary(data)
    tau_diff = p1 - p0
    var_diff = p1 * (1 - p1) / pi + p0 * (1 - p0) / (1 - pi)
    diff = _finish(tau_diff, var_diff, data.n, alpha, Method.DIFF)

    if models is None:
        selection = "aic" if data.has_covariates else "intercept"
        models = fit_working_models(data, selection=selection)
    f1, f0 = _predictions(data, models)
    y = data.y_tilde.astype(float)
    treated, control = _augmented_terms(y, data.a.astype(float), f1, f0, delta)
    influence = treated - control
    tau_cov = float(influence.mean())
    var_cov = float(np.mean((influence - tau_cov) ** 2))
    cov = _finish(tau_cov, var_cov, data.n, alpha, Method.COV)
    return diff, cov


def wald_test(est: EffectEstimate, tau0: float = 0.0, bootstrap: bool = False) -> WaldResult:
    """
    Two-sided Wald test of tau = tau0.

    t = sqrt(n) (tau_hat - tau0) / sqrt(V), i.e. (tau_hat - tau0) / se.
    """
    se = est.se_bootstrap if bootstrap and est.se_bootstrap else est.se_analytic
    t = (est.tau_hat - tau0) / se
    p_value = float(2.0 * norm.sf(abs(t)))
    reject = abs(t) > norm.ppf(1.0 - est.alpha / 2.0)
    return WaldResult(float(t), min(1.0, p_value), bool(reject))
