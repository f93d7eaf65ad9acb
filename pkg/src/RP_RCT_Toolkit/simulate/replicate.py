"""
Monte Carlo harness: repeated population draw, protocol run and estimation
on per-replicate random streams, summarised against the latent truth.
"""
import logging
import math
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..design import DesignSpec
from ..errors import DesignError, RpRctError
from ..estimate import (
    Method,
    ModelPolicy,
    PrivateDataset,
    bootstrap_se,
    estimate_classical,
    estimate_lambda,
    estimate_tau_h_cov,
    estimate_tau_h_diff,
    wald_test,
)
from ..glm import fit_working_models
from ..utils.rng import StreamManager
from ..utils.settings import worker_count
from ..workers import blocks, run_jobs
from .behaviors import CheaterBehavior
from .population import PopulationConfig, generate_population
from .protocol import run_protocol, true_ate, true_tau_h

logger = logging.getLogger(__name__)


class ReplicateOptions(NamedTuple):
    methods: Tuple[Method, ...] = (Method.H_DIFF, Method.H_COV)
    bootstrap: int = 0
    alpha: float = 0.05
    policy: ModelPolicy = ModelPolicy()
    tau0: float = 0.0
    outcome: Optional[str] = None


class EstimatorSummary(NamedTuple):
    method: str
    replicates: int
    mean: float
    truth: float
    bias: float
    variance: float
    coverage: float
    mean_se: float
    rejection_rate: float
    coverage_bootstrap: Optional[float] = None
    mean_se_bootstrap: Optional[float] = None

    def to_dict(self) -> dict:
        return self._asdict()


class LambdaSummary(NamedTuple):
    replicates: int
    mean: float
    raw_mean: float
    truth: float
    bias: float
    variance: float
    mean_se: float
    boundary_rate: float

    def to_dict(self) -> dict:
        return self._asdict()


class MonteCarloSummary(NamedTuple):
    reps: int
    seed: int
    n: int
    failures: int
    lam: LambdaSummary
    estimators: Dict[str, EstimatorSummary]

    def to_dict(self) -> dict:
        return {
            "reps": self.reps,
            "seed": self.seed,
            "n": self.n,
            "failures": self.failures,
            "lambda": self.lam.to_dict(),
            "estimators": {k: v.to_dict() for k, v in self.estimators.items()},
        }


def _models(data: PrivateDataset, policy: ModelPolicy):
    covariates = None if policy.covariates is None else list(policy.covariates)
    selection = policy.selection if data.has_covariates else "intercept"
    return fit_working_models(
        data, covariates, selection, policy.direction, policy.missing_indicators
    )


def run_replicate(
    replicate: int,
    config: PopulationConfig,
    spec: DesignSpec,
    options: ReplicateOptions,
    seed: int,
) -> dict:
    """One protocol + estimation cycle; failures are returned, not raised."""
    streams = StreamManager(seed, replicate)
    population = generate_population(config, streams.get_stream("population"))
    protocol = streams.get_stream("protocol")
    data, sidecar = run_protocol(population, spec, protocol, options.outcome)
    record = {
        "replicate": replicate,
        "lambda_true": float(np.mean(sidecar.c)),
        "ate": true_ate(sidecar),
    }
    try:
        record["tau_h"] = true_tau_h(sidecar)
        lam = estimate_lambda(data, spec)
        record["lambda_hat"] = lam.lambda_hat
        record["lambda_raw"] = lam.raw_value
        record["lambda_se"] = lam.se
        record["boundary"] = lam.boundary_corrected
        boot = None
        honest = [m for m in options.methods if m.honest]
        if options.bootstrap and honest:
            boot_seed = int(streams.get_stream("bootstrap").integers(2 ** 32))
            boot = bootstrap_se(
                data, spec, honest, options.bootstrap, boot_seed,
                options.alpha, options.policy, 1,
            )
        estimates = {}
        for method in options.methods:
            if method is Method.H_DIFF:
                estimates[method] = estimate_tau_h_diff(data, spec, lam, options.alpha)
            elif method is Method.H_COV:
                models = _models(data, options.policy)
                estimates[method] = estimate_tau_h_cov(data, spec, lam, models, options.alpha)
        classical = [m for m in options.methods if not m.honest]
        if classical:
            truth_data = PrivateDataset(
                sidecar.y, data.a, data.s, data.x, outcome=data.outcome
            )
            diff, cov = estimate_classical(
                truth_data, spec.delta, _models(truth_data, options.policy), options.alpha
            )
            estimates.update({Method.DIFF: diff, Method.COV: cov})
        record["estimates"] = {}
        for method in options.methods:
            est = estimates[method]
            if boot is not None and method.honest:
                est = est.with_bootstrap(boot.se[method.value], boot.ci[method.value])
            truth = record["tau_h"] if method.honest else record["ate"]
            wald = wald_test(est, options.tau0)
            record["estimates"][method.value] = {
                "tau": est.tau_hat,
                "se": est.se_analytic,
                "covered": est.covers(truth),
                "reject": wald.reject,
                "p_value": wald.p_value,
                "se_bootstrap": est.se_bootstrap,
                "covered_bootstrap": (
                    est.covers(truth, bootstrap=True) if est.se_bootstrap is not None else None
                ),
            }
    except RpRctError as e:
        logger.debug("Replicate %d failed: %s", replicate, e)
        record["failed"] = str(e)
    return record


def _run_block(indices, config, spec, options, seed) -> List[dict]:
    return [run_replicate(r, config, spec, options, seed) for r in indices]


def _mean(values: Sequence[float]) -> float:
    return float(np.mean(values)) if len(values) else math.nan


def _variance(values: Sequence[float]) -> float:
    return float(np.var(values, ddof=1)) if len(values) > 1 else math.nan


def summarize(
    records: Sequence[dict], n: int, seed: int, methods: Sequence[Method]
) -> MonteCarloSummary:
    ok = [r for r in records if "failed" not in r]
    failures = len(records) - len(ok)
    lam_hat = [r["lambda_hat"] for r in ok]
    lam_true = [r["lambda_true"] for r in ok]
    lam = LambdaSummary(
        replicates=len(ok),
        mean=_mean(lam_hat),
        raw_mean=_mean([r["lambda_raw"] for r in ok]),
        truth=_mean(lam_true),
        bias=_mean(np.subtract(lam_hat, lam_true)) if ok else math.nan,
        variance=_variance(lam_hat),
        mean_se=_mean([r["lambda_se"] for r in ok]),
        boundary_rate=_mean([float(r["boundary"]) for r in ok]),
    )
    estimators = {}
    for method in methods:
        key = method.value
        rows = [r["estimates"][key] for r in ok]
        taus = [row["tau"] for row in rows]
        truths = [r["tau_h"] if method.honest else r["ate"] for r in ok]
        boot_rows = [row for row in rows if row["se_bootstrap"] is not None]
        boot_coverage = boot_se = None
        if boot_rows:
            boot_coverage = _mean([float(row["covered_bootstrap"]) for row in boot_rows])
            boot_se = _mean([row["se_bootstrap"] for row in boot_rows])
        estimators[key] = EstimatorSummary(
            method=key,
            replicates=len(rows),
            mean=_mean(taus),
            truth=_mean(truths),
            bias=_mean(np.subtract(taus, truths)) if rows else math.nan,
            variance=_variance(taus),
            coverage=_mean([float(row["covered"]) for row in rows]),
            mean_se=_mean([row["se"] for row in rows]),
            rejection_rate=_mean([float(row["reject"]) for row in rows]),
            coverage_bootstrap=boot_coverage,
            mean_se_bootstrap=boot_se,
        )
    return MonteCarloSummary(
        reps=len(records), seed=seed, n=n, failures=failures, lam=lam, estimators=estimators
    )


def replicate(
    config: PopulationConfig,
    spec: DesignSpec,
    reps: int,
    seed: int,
    options: ReplicateOptions = ReplicateOptions(),
    n_jobs: Optional[int] = None,
) -> MonteCarloSummary:
    """
    Run `reps` independent replicates and summarise each estimator.

    Replicate r draws from streams derived from (seed, r); the summary is
    identical for any worker count.
    """
    if reps < 1:
        raise DesignError(f"reps must be at least 1, got {reps}")
    config.validate()
    options = options._replace(methods=tuple(Method(m) for m in options.methods))
    workers = worker_count(n_jobs)
    chunks = run_jobs(_run_block, blocks(reps, workers), workers, config, spec, options, seed)
    records = [r for chunk in chunks for r in chunk]
    summary = summarize(records, config.n, seed, options.methods)
    if summary.failures:
        logger.warning("%d of %d replicates failed and were excluded", summary.failures, reps)
    logger.info("Monte Carlo: %d replicates of n=%d done", reps, config.n)
    return summary


class BehaviorBias(NamedTuple):
    behavior: str
    treatment_independent: bool
    mean_lambda: float
    lambda_bias: float
    mean_tau: float
    tau_bias: float
    failures: int

    def to_dict(self) -> dict:
        return self._asdict()


def behavior_bias_study(
    config: PopulationConfig,
    spec: DesignSpec,
    reps: int,
    seed: int,
    behaviors: Sequence[CheaterBehavior] = tuple(CheaterBehavior),
    n_jobs: Optional[int] = None,
) -> List[BehaviorBias]:
    """Bias of the cheater proportion and the difference estimator per cheater behavior."""
    options = ReplicateOptions(methods=(Method.H_DIFF,))
    rows = []
    for behavior in behaviors:
        summary = replicate(config.with_behavior(behavior), spec, reps, seed, options, n_jobs)
        est = summary.estimators[Method.H_DIFF.value]
        rows.append(
            BehaviorBias(
                behavior=behavior.label,
                treatment_independent=behavior.treatment_independent,
                mean_lambda=summary.lam.mean,
                lambda_bias=summary.lam.bias,
                mean_tau=est.mean,
                tau_bias=est.bias,
                failures=summary.failures,
            )
        )
        logger.info(
            "%s: lambda bias %.4f, tau bias %.4f", behavior.label, summary.lam.bias, est.bias
        )
    return rows
