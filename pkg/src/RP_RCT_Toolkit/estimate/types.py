"""
Value types produced by the estimators.
"""
import enum
import math
from typing import NamedTuple, Optional, Tuple

from scipy.stats import norm

from ..utils.numeric import format_float, parse_float


class Method(str, enum.Enum):
    H_DIFF = "HDiff"
    H_COV = "HCov"
    DIFF = "Diff"
    COV = "Cov"

    @property
    def label(self) -> str:
        return {
            "HDiff": "τ̂_H,Diff",
            "HCov": "τ̂_H,Cov",
            "Diff": "τ̂_Diff",
            "Cov": "τ̂_Cov",
        }[self.value]

    @property
    def honest(self) -> bool:
        return self in (Method.H_DIFF, Method.H_COV)


class CheaterEstimate(NamedTuple):
    """
    Estimated proportion of cheaters.

    variance is the n-scaled plug-in variance; se = sqrt(variance / n).
    """

    lambda_hat: float
    se: float
    raw_value: float
    boundary_corrected: bool
    variance: float = 0.0
    n: int = 0

    @classmethod
    def fixed(cls, value: float = 0.0) -> "CheaterEstimate":
        """A known proportion, carrying no sampling variance."""
        return cls(value, 0.0, value, False, 0.0, 0)

    def to_dict(self) -> dict:
        return {
            "lambda_hat": self.lambda_hat,
            "se": self.se,
            "raw_value": format_float(self.raw_value),
            "boundary_corrected": self.boundary_corrected,
            "variance": self.variance,
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CheaterEstimate":
        return cls(
            float(data["lambda_hat"]),
            float(data["se"]),
            parse_float(data["raw_value"]),
            bool(data["boundary_corrected"]),
            float(data.get("variance", 0.0)),
            int(data.get("n", 0)),
        )


def wald_interval(tau_hat: float, se: float, alpha: float) -> Tuple[float, float]:
    z = norm.ppf(1.0 - alpha / 2.0)
    return (tau_hat - z * se, tau_hat + z * se)


class EffectEstimate(NamedTuple):
    """
    Point estimate with analytic (and optionally bootstrap) inference.

    variance is the n-scaled plug-in variance, se_analytic = sqrt(variance / n)
    floored at a small positive value.
    """

    tau_hat: float
    se_analytic: float
    ci: Tuple[float, float]
    alpha: float
    method: Method
    n: int
    variance: float
    lam: Optional[CheaterEstimate] = None
    se_bootstrap: Optional[float] = None
    ci_bootstrap: Optional[Tuple[float, float]] = None
    se_floored: bool = False

    @classmethod
    def build(
        cls,
        tau_hat: float,
        variance: float,
        n: int,
        alpha: float,
        method: Method,
        lam: Optional[CheaterEstimate] = None,
        se_floor: float = 1e-8,
    ) -> "EffectEstimate":
        se = math.sqrt(max(variance, 0.0) / n)
        floored = se < se_floor
        if floored:
            se = se_floor
        return cls(
            tau_hat=tau_hat,
            se_analytic=se,
            ci=wald_interval(tau_hat, se, alpha),
            alpha=alpha,
            method=method,
            n=n,
            variance=variance,
            lam=lam,
            se_floored=floored,
        )

    @property
    def se(self) -> float:
        """Bootstrap SE when available, analytic otherwise."""
        return self.se_bootstrap if self.se_bootstrap is not None else self.se_analytic

    def with_bootstrap(self, se: float, ci: Tuple[float, float]) -> "EffectEstimate":
        return self._replace(se_bootstrap=se, ci_bootstrap=tuple(ci))

    def covers(self, value: float, bootstrap: bool = False) -> bool:
        low, high = self.ci_bootstrap if bootstrap and self.ci_bootstrap else self.ci
        return low <= value <= high

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "tau_hat": self.tau_hat,
            "se_analytic": self.se_analytic,
            "se_bootstrap": self.se_bootstrap,
            "ci": list(self.ci),
            "ci_bootstrap": None if self.ci_bootstrap is None else list(self.ci_bootstrap),
            "alpha": self.alpha,
            "n": self.n,
            "variance": self.variance,
            "se_floored": self.se_floored,
            "lambda": None if self.lam is None else self.lam.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EffectEstimate":
        return cls(
            tau_hat=float(data["tau_hat"]),
            se_analytic=float(data["se_analytic"]),
            ci=tuple(data["ci"]),
            alpha=float(data["alpha"]),
            method=Method(data["method"]),
            n=int(data["n"]),
            variance=float(data["variance"]),
            lam=None if data.get("lambda") is None else CheaterEstimate.from_dict(data["lambda"]),
            se_bootstrap=data.get("se_bootstrap"),
            ci_bootstrap=None if data.get("ci_bootstrap") is None else tuple(data["ci_bootstrap"]),
            se_floored=bool(data.get("se_floored", False)),
        )


class WaldResult(NamedTuple):
    t: float
    p_value: float
    reject: bool
