"""
Full analysis of one privatized outcome: cheater proportion, both honest
effect estimators, inference and diagnostics.
"""
import logging
from typing import Dict, List, NamedTuple, Optional

from ..design import DesignSpec
from ..design.report import DETERMINANT_WARNING
from ..glm import fit_working_models
from ..utils.settings import get_settings
from .balance import BalanceRow, covariate_balance
from .bootstrap import LAMBDA, BootstrapResult, ModelPolicy, bootstrap_se, se_discrepancy
from .cheaters import estimate_lambda
from .dataset import MultiOutcomeDataset, PrivateDataset
from .effects import estimate_tau_h_cov, estimate_tau_h_diff, wald_test
from .types import CheaterEstimate, EffectEstimate, Method, WaldResult

logger = logging.getLogger(__name__)

SE_DISCREPANCY_WARNING = 0.5


class EstimateReport(NamedTuple):
    outcome: str
    n: int
    alpha: float
    design: dict
    lam: CheaterEstimate
    h_diff: EffectEstimate
    h_cov: EffectEstimate
    wald: Dict[str, WaldResult]
    models: Optional[dict] = None
    balance: List[BalanceRow] = []
    bootstrap: Optional[BootstrapResult] = None
    warnings: List[str] = []

    @property
    def lambda_se(self) -> float:
        """Bootstrap SE of lambda-hat when available, analytic otherwise."""
        if self.bootstrap is not None:
            return self.bootstrap.se[LAMBDA]
        return self.lam.se

    def effect(self, method: Method) -> EffectEstimate:
        return {Method.H_DIFF: self.h_diff, Method.H_COV: self.h_cov}[Method(method)]

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "n": self.n,
            "alpha": self.alpha,
            "design": self.design,
            "lambda": self.lam.to_dict(),
            "lambda_se": self.lambda_se,
            "h_diff": self.h_diff.to_dict(),
            "h_cov": self.h_cov.to_dict(),
            "wald": {k: v._asdict() for k, v in self.wald.items()},
            "models": self.models,
            "balance": [row.to_dict() for row in self.balance],
            "bootstrap": None if self.bootstrap is None else self.bootstrap.to_dict(),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EstimateReport":
        boot = data.get("bootstrap")
        if boot is not None:
            boot = BootstrapResult(
                se=dict(boot["se"]),
                ci={k: tuple(v) for k, v in boot["ci"].items()},
                resamples=int(boot["resamples"]),
                skipped=int(boot["skipped"]),
                seed=int(boot["seed"]),
            )
        return cls(
            outcome=data["outcome"],
            n=int(data["n"]),
            alpha=float(data["alpha"]),
            design=data["design"],
            lam=CheaterEstimate.from_dict(data["lambda"]),
            h_diff=EffectEstimate.from_dict(data["h_diff"]),
            h_cov=EffectEstimate.from_dict(data["h_cov"]),
            wald={k: WaldResult(**v) for k, v in data["wald"].items()},
            models=data.get("models"),
            balance=[BalanceRow(**row) for row in data.get("balance", [])],
            bootstrap=boot,
            warnings=list(data.get("warnings", [])),
        )


def _warn(warnings: List[str], message: str) -> None:
    logger.warning(message)
    warnings.append(message)


def estimate_outcome(
    data: PrivateDataset,
    spec: DesignSpec,
    alpha: Optional[float] = None,
    bootstrap: int = 0,
    seed: int = 0,
    policy: ModelPolicy = ModelPolicy(),
    n_jobs: Optional[int] = None,
    tau0: float = 0.0,
) -> EstimateReport:
    """
    Run the complete analysis of one outcome.

    Args:
        data: Observed dataset
        spec: Design the data were collected under
        alpha: Test level (default from settings)
        bootstrap: Number of resamples, 0 for analytic inference only
        seed: Bootstrap seed
        policy: Working-model fitting policy
        n_jobs: Bootstrap workers
        tau0: Null value of the Wald tests
    """
    alpha = get_settings().alpha if alpha is None else alpha
    warnings: List[str] = []
    logger.info("Estimating outcome %s on %d rows", data.outcome, data.n)

    if abs(spec.lambda_coefficients().determinant) < DETERMINANT_WARNING:
        _warn(warnings, "FRR maps are close: the cheater proportion is estimated imprecisely")
    lam = estimate_lambda(data, spec)
    if lam.boundary_corrected:
        _warn(
            warnings,
            f"{data.outcome}: raw cheater proportion {lam.raw_value:.4f} outside [0, 1], "
            f"boundary likelihood set it to {lam.lambda_hat:.6g}",
        )

    h_diff = estimate_tau_h_diff(data, spec, lam, alpha)
    covariates = None if policy.covariates is None else list(policy.covariates)
    selection = policy.selection if data.has_covariates else "intercept"
    models = fit_working_models(
        data, covariates, selection, policy.direction, policy.missing_indicators
    )
    for arm, model in (("treated", models.treated), ("control", models.control)):
        if model.separated:
            _warn(
                warnings,
                f"{data.outcome}: {arm} working model is separated, predictions clamped",
            )
    h_cov = estimate_tau_h_cov(data, spec, lam, models, alpha)
    for est in (h_diff, h_cov):
        if est.se_floored:
            _warn(
                warnings,
                f"{data.outcome}: {est.method.label} analytic SE is zero and was floored",
            )

    boot = None
    if bootstrap:
        methods = (Method.H_DIFF, Method.H_COV)
        boot = bootstrap_se(data, spec, methods, bootstrap, seed, alpha, policy, n_jobs)
        estimates = []
        for est in (h_diff, h_cov):
            key = est.method.value
            est = est.with_bootstrap(boot.se[key], boot.ci[key])
            if se_discrepancy(est.se_analytic, est.se_bootstrap) > SE_DISCREPANCY_WARNING:
                _warn(
                    warnings,
                    f"{data.outcome}: {est.method.label} analytic SE {est.se_analytic:.4g} "
                    f"differs from bootstrap SE {est.se_bootstrap:.4g} by more than 50%",
                )
            estimates.append(est)
        h_diff, h_cov = estimates

    wald = {
        est.method.value: wald_test(est, tau0, bootstrap=boot is not None)
        for est in (h_diff, h_cov)
    }
    return EstimateReport(
        outcome=data.outcome,
        n=data.n,
        alpha=alpha,
        design=spec.to_dict(),
        lam=lam,
        h_diff=h_diff,
        h_cov=h_cov,
        wald=wald,
        models=models.to_dict(),
        balance=covariate_balance(data) if data.has_covariates else [],
        bootstrap=boot,
        warnings=warnings,
    )


def estimate_outcomes(
    data: MultiOutcomeDataset, spec: DesignSpec, **options
) -> List[EstimateReport]:
    """estimate_outcome for every outcome; bootstrap resamples the same rows for each."""
    return [estimate_outcome(data.dataset(name), spec, **options) for name in data.outcome_names]
