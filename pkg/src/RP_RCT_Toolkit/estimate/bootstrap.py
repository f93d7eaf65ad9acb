"""
Nonparametric bootstrap of the cheater proportion and the honest effects.

Replicate b resamples rows with its own generator derived from (seed, b),
so the result does not depend on the number of workers.
"""
import logging
import math
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..design import DesignSpec
from ..errors import DegenerateDataError, RpRctError
from ..glm import fit_working_models
from ..utils.rng import substream
from ..utils.settings import get_settings, worker_count
from ..workers import blocks, run_jobs
from .cheaters import estimate_lambda
from .dataset import PrivateDataset
from .effects import estimate_tau_h_cov, estimate_tau_h_diff
from .types import Method

logger = logging.getLogger(__name__)

MIN_RESAMPLES = 100
MAX_SKIPPED_FRACTION = 0.01
LAMBDA = "lambda"


class ModelPolicy(NamedTuple):
    """How working models are refitted on every resample."""

    covariates: Optional[Tuple[str, ...]] = None
    selection: str = "aic"
    direction: str = "backward"
    missing_indicators: bool = False


class BootstrapResult(NamedTuple):
    """
    se and ci are keyed by "lambda" and by Method value ("HDiff", "HCov").
    """

    se: Dict[str, float]
    ci: Dict[str, Tuple[float, float]]
    resamples: int
    skipped: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "se": dict(self.se),
            "ci": {k: list(v) for k, v in self.ci.items()},
            "resamples": self.resamples,
            "skipped": self.skipped,
            "seed": self.seed,
        }


def replicate_estimates(
    data: PrivateDataset,
    spec: DesignSpec,
    methods: Sequence[Method],
    policy: ModelPolicy = ModelPolicy(),
) -> Dict[str, float]:
    """Point estimates of one (re)sample."""
    lam = estimate_lambda(data, spec)
    out = {LAMBDA: lam.lambda_hat}
    for method in methods:
        if method is Method.H_DIFF:
            out[method.value] = estimate_tau_h_diff(data, spec, lam).tau_hat
        elif method is Method.H_COV:
            covariates = None if policy.covariates is None else list(policy.covariates)
            selection = policy.selection if data.has_covariates else "intercept"
            models = fit_working_models(
                data, covariates, selection, policy.direction, policy.missing_indicators
            )
            out[method.value] = estimate_tau_h_cov(data, spec, lam, models).tau_hat
        else:
            raise ValueError(f"Bootstrap supports honest-effect methods only, got {method}")
    return out


def _run_block(
    indices: Sequence[int],
    data: PrivateDataset,
    spec: DesignSpec,
    methods: Sequence[Method],
    policy: ModelPolicy,
    seed: int,
) -> List[Optional[Dict[str, float]]]:
    results = []
    for b in indices:
        rng = substream(seed, b)
        rows = rng.integers(0, data.n, size=data.n)
        try:
            results.append(replicate_estimates(data.take(rows), spec, methods, policy))
        except RpRctError as e:
            logger.debug("Bootstrap resample %d skipped: %s", b, e)
            results.append(None)
    return results


def bootstrap_se(
    data: PrivateDataset,
    spec: DesignSpec,
    methods: Sequence[Method] = (Method.H_DIFF, Method.H_COV),
    B: Optional[int] = None,
    seed: int = 0,
    alpha: Optional[float] = None,
    policy: ModelPolicy = ModelPolicy(),
    n_jobs: Optional[int] = None,
) -> BootstrapResult:
    """
    Bootstrap standard errors and percentile intervals.

    Resamples whose estimators fail are skipped and counted.

    Raises:
        ValueError: Fewer than 100 resamples requested
        DegenerateDataError: More than 1% of resamples failed
    """
    settings = get_settings()
    B = settings.bootstrap if B is None else int(B)
    alpha = settings.alpha if alpha is None else alpha
    if B < MIN_RESAMPLES:
        raise ValueError(f"Bootstrap needs at least {MIN_RESAMPLES} resamples, got {B}")
    methods = [Method(m) for m in methods]

    workers = worker_count(n_jobs)
    chunks = run_jobs(_run_block, blocks(B, workers), workers, data, spec, methods, policy, seed)
    results = [r for chunk in chunks for r in chunk]
    kept = [r for r in results if r is not None]
    skipped = len(results) - len(kept)
    if skipped > MAX_SKIPPED_FRACTION * B:
        raise DegenerateDataError(
            f"{skipped} of {B} bootstrap resamples failed (more than 1%); "
            "the data are too sparse for resampling, report analytic SEs instead"
        )
    if skipped:
        logger.warning("Skipped %d of %d bootstrap resamples", skipped, B)

    se, ci = {}, {}
    for key in [LAMBDA] + [m.value for m in methods]:
        values = np.array([r[key] for r in kept], dtype=float)
        se[key] = float(np.std(values, ddof=1))
        low, high = np.quantile(values, [alpha / 2.0, 1.0 - alpha / 2.0])
        ci[key] = (float(low), float(high))
    logger.info("Bootstrap with %d resamples: %s", len(kept), se)
    return BootstrapResult(se=se, ci=ci, resamples=len(kept), skipped=skipped, seed=seed)


def se_discrepancy(analytic: float, bootstrap: float) -> float:
    """Relative difference of the analytic SE from the bootstrap SE."""
    if bootstrap == 0:
        return math.inf if analytic > 0 else 0.0
    return abs(analytic - bootstrap) / bootstrap
