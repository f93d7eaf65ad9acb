"""
Synthetic populations with covariates, potential outcomes and cheaters.
"""
import logging
import math
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.special import expit, logit

from ..errors import DesignError
from .behaviors import HONEST, CheaterBehavior

logger = logging.getLogger(__name__)

COVARIATE_KINDS = ("bernoulli", "categorical", "uniform", "gaussian")
CASE_STUDY_OUTCOMES = (
    "attention", "retention", "judgement_of_learning", "comprehension"
)


class CovariateSpec(NamedTuple):
    """
    One independent covariate generator.

    params by kind: bernoulli (p,), categorical (p_0, ..., p_k),
    uniform (low, high), gaussian (mean, sd).
    """

    name: str
    kind: str
    params: Tuple[float, ...]
    missing_rate: float = 0.0

    def validate(self) -> None:
        if self.kind not in COVARIATE_KINDS:
            raise DesignError(f"Covariate {self.name}: unknown kind {self.kind!r}")
        p = self.params
        if self.kind == "bernoulli" and not (len(p) == 1 and 0 <= p[0] <= 1):
            raise DesignError(f"Covariate {self.name}: bernoulli needs one probability")
        if self.kind == "categorical" and (
            len(p) < 2 or min(p) < 0 or not math.isclose(math.fsum(p), 1.0, abs_tol=1e-9)
        ):
            raise DesignError(
                f"Covariate {self.name}: categorical probabilities must sum to 1"
            )
        if self.kind == "uniform" and not (len(p) == 2 and p[0] < p[1]):
            raise DesignError(f"Covariate {self.name}: uniform needs low < high")
        if self.kind == "gaussian" and not (len(p) == 2 and p[1] > 0):
            raise DesignError(f"Covariate {self.name}: gaussian needs a positive sd")
        if not 0 <= self.missing_rate < 1:
            raise DesignError(f"Covariate {self.name}: missing_rate must lie in [0, 1)")

    def draw(self, n: int, rng: np.random.Generator) -> np.ndarray:
        p = self.params
        if self.kind == "bernoulli":
            return (rng.random(n) < p[0]).astype(float)
        if self.kind == "categorical":
            return rng.choice(len(p), size=n, p=np.asarray(p) / math.fsum(p)).astype(float)
        if self.kind == "uniform":
            return rng.uniform(p[0], p[1], size=n)
        return rng.normal(p[0], p[1], size=n)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "params": list(self.params),
            "missing_rate": self.missing_rate,
        }


Coefficient = Union[float, Sequence[float]]


class OutcomeModel(NamedTuple):
    """
    Logistic model of one binary outcome.

    logit Pr(Y(0)=1 | X) = intercept + sum of covariate terms; Y(1) adds
    treatment_shift on the log-odds scale. A categorical covariate takes a
    sequence of per-level effects, every other kind a slope.
    """

    name: str = "y_tilde"
    intercept: float = 0.0
    coefficients: Mapping[str, Coefficient] = {}
    treatment_shift: float = 0.0

    def linear_predictor(self, x: Mapping[str, np.ndarray], n: int) -> np.ndarray:
        eta = np.full(n, float(self.intercept))
        for name, coef in self.coefficients.items():
            values = x[name]
            if isinstance(coef, (list, tuple, np.ndarray)):
                eta = eta + np.asarray(coef, dtype=float)[values.astype(int)]
            else:
                eta = eta + float(coef) * values
        return eta

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "intercept": self.intercept,
            "coefficients": {
                k: list(v) if isinstance(v, (list, tuple)) else v
                for k, v in self.coefficients.items()
            },
            "treatment_shift": self.treatment_shift,
        }


class PopulationConfig(NamedTuple):
    """
    Generator settings of a synthetic population.

    cheater_dependence tilts the log-odds of being a cheater by
    +/- cheater_dependence according to Y(0) of the first outcome; 0 keeps
    cheater status independent of everything else.
    """

    n: int
    lam: float = 0.0
    covariates: Tuple[CovariateSpec, ...] = ()
    outcomes: Tuple[OutcomeModel, ...] = (OutcomeModel(),)
    behavior_mix: Mapping[CheaterBehavior, float] = {CheaterBehavior.ALWAYS_ZERO: 1.0}
    cheater_dependence: float = 0.0

    def validate(self) -> "PopulationConfig":
        if int(self.n) != self.n or self.n < 1:
            raise DesignError(f"n must be a positive integer, got {self.n}")
        if not 0 <= self.lam < 1:
            raise DesignError(
                f"Cheater proportion must lie in [0, 1), got {self.lam}: "
                "not every participant can be a cheater"
            )
        if not self.outcomes:
            raise DesignError("At least one outcome model is required")
        names = [o.name for o in self.outcomes]
        if len(set(names)) != len(names):
            raise DesignError(f"Outcome names must be unique: {names}")
        covariate_names = [c.name for c in self.covariates]
        if len(set(covariate_names)) != len(covariate_names):
            raise DesignError(f"Covariate names must be unique: {covariate_names}")
        for spec in self.covariates:
            spec.validate()
        for outcome in self.outcomes:
            unknown = set(outcome.coefficients) - set(covariate_names)
            if unknown:
                raise DesignError(
                    f"Outcome {outcome.name} uses unknown covariates {sorted(unknown)}"
                )
        weights = list(self.behavior_mix.values())
        total = math.fsum(weights)
        if not weights or min(weights) < 0 or not math.isclose(total, 1.0, abs_tol=1e-9):
            raise DesignError(f"Behavior mix must be nonnegative and sum to 1: {weights}")
        if not math.isfinite(self.cheater_dependence):
            raise DesignError("cheater_dependence must be finite")
        return self

    @property
    def outcome_names(self) -> List[str]:
        return [o.name for o in self.outcomes]

    def with_behavior(self, behavior: CheaterBehavior) -> "PopulationConfig":
        return self._replace(behavior_mix={behavior: 1.0})

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "lambda": self.lam,
            "covariates": [c.to_dict() for c in self.covariates],
            "outcomes": [o.to_dict() for o in self.outcomes],
            "behavior_mix": {b.label: w for b, w in self.behavior_mix.items()},
            "cheater_dependence": self.cheater_dependence,
        }


def case_study_population(n: int = 72, lam: float = 0.1) -> PopulationConfig:
    """Four outcomes sharing covariates, shaped like the online-lecture study."""
    covariates = (
        CovariateSpec("female", "bernoulli", (0.5,)),
        CovariateSpec("year", "categorical", (0.3, 0.3, 0.4)),
        CovariateSpec("gpa", "gaussian", (3.3, 0.4), missing_rate=0.05),
        CovariateSpec("hours_online", "uniform", (0.0, 6.0)),
    )
    outcomes = (
        OutcomeModel("attention", 0.5, {"hours_online": -0.2}, -1.0),
        OutcomeModel("retention", -0.5, {"gpa": 0.6}, -0.3),
        OutcomeModel("judgement_of_learning", 0.2, {"year": (0.0, 0.2, 0.4)}, 0.1),
        OutcomeModel("comprehension", -1.5, {"gpa": 0.5, "female": 0.2}, -0.2),
    )
    return PopulationConfig(n=n, lam=lam, covariates=covariates, outcomes=outcomes)


class LatentPopulation(NamedTuple):
    """Units with observed covariates and everything the investigator never sees."""

    x: Optional[pd.DataFrame]
    y1: Dict[str, np.ndarray]
    y0: Dict[str, np.ndarray]
    c: np.ndarray
    behavior: np.ndarray

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def outcome_names(self) -> List[str]:
        return list(self.y1)

    def tau_h(self, outcome: Optional[str] = None) -> float:
        name = outcome or self.outcome_names[0]
        honest = self.c == 0
        return float(np.mean(self.y1[name][honest] - self.y0[name][honest]))


def generate_population(
    config: PopulationConfig, rng: np.random.Generator
) -> LatentPopulation:
    """
    Draw i.i.d. units: covariates, coupled potential outcomes, cheater flags.

    Potential outcomes share one uniform per unit and outcome, so Y(1) = Y(0)
    whenever the treatment shift is zero.
    """
    config.validate()
    n = int(config.n)
    true_x = {spec.name: spec.draw(n, rng) for spec in config.covariates}
    observed = {}
    for spec in config.covariates:
        values = true_x[spec.name].copy()
        if spec.missing_rate > 0:
            values[rng.random(n) < spec.missing_rate] = np.nan
        if spec.kind == "categorical":
            values = np.array(
                [None if np.isnan(v) else f"L{int(v)}" for v in values], dtype=object
            )
        observed[spec.name] = values

    y1, y0 = {}, {}
    for outcome in config.outcomes:
        eta = outcome.linear_predictor(true_x, n)
        u = rng.random(n)
        y0[outcome.name] = (u < expit(eta)).astype(np.int8)
        y1[outcome.name] = (u < expit(eta + outcome.treatment_shift)).astype(np.int8)

    u = rng.random(n)
    if config.lam == 0:
        c = np.zeros(n, dtype=np.int8)
    elif config.cheater_dependence == 0:
        c = (u < config.lam).astype(np.int8)
    else:
        tilt = config.cheater_dependence * (2.0 * y0[config.outcomes[0].name] - 1.0)
        c = (u < expit(logit(config.lam) + tilt)).astype(np.int8)

    behaviors = list(config.behavior_mix)
    weights = np.asarray([config.behavior_mix[b] for b in behaviors], dtype=float)
    picks = rng.choice(len(behaviors), size=n, p=weights / weights.sum())
    codes = np.asarray([int(b) for b in behaviors], dtype=np.int8)[picks]
    behavior = np.where(c == 1, codes, HONEST).astype(np.int8)

    logger.debug("Generated %d units, %d cheaters", n, int(c.sum()))
    x = pd.DataFrame(observed) if observed else None
    return LatentPopulation(x=x, y1=y1, y0=y0, c=c, behavior=behavior)
