"""
Statistical cost of privacy: relative efficiency of the privatized
difference-in-means estimator and sample sizes for a target power.
"""
import logging
import math
from typing import NamedTuple

from scipy.stats import norm

from ..errors import DesignError
from .design_spec import DesignSpec

logger = logging.getLogger(__name__)


class EfficiencyQuote(NamedTuple):
    relative_efficiency: float
    se_inflation: float
    sample_size_multiplier: float

    @classmethod
    def from_efficiency(cls, value: float) -> "EfficiencyQuote":
        if not 0.0 < value <= 1.0:
            raise DesignError(f"Relative efficiency must lie in (0, 1], got {value}")
        return cls(value, value ** -0.5, 1.0 / value)

    def to_dict(self) -> dict:
        return self._asdict()


def _check_probability(name: str, value: float, closed: bool) -> None:
    ok = 0.0 <= value <= 1.0 if closed else 0.0 < value < 1.0
    if not ok:
        interval = "[0, 1]" if closed else "(0, 1)"
        raise DesignError(f"{name} must lie in {interval}, got {value}")


def _check_inputs(epsilon: float, delta: float, tau0: float, tau1: float) -> None:
    if math.isnan(epsilon) or epsilon <= 0:
        raise DesignError(f"epsilon must lie in (0, inf], got {epsilon}")
    _check_probability("delta", delta, closed=False)
    _check_probability("tau0", tau0, closed=True)
    _check_probability("tau1", tau1, closed=True)


def _classical_variance(delta: float, tau0: float, tau1: float) -> float:
    return tau1 * (1 - tau1) / delta + tau0 * (1 - tau0) / (1 - delta)


def private_variance(epsilon: float, delta: float, tau0: float, tau1: float) -> float:
    """Asymptotic variance of sqrt(n) * tau_H,Diff with no cheaters."""
    if math.isinf(epsilon):
        return _classical_variance(delta, tau0, tau1)
    low = 1.0 / math.expm1(epsilon)
    high = 1.0 / -math.expm1(-epsilon)
    return (low + tau1) * (high - tau1) / delta + (low + tau0) * (high - tau0) / (1 - delta)


def relative_efficiency(epsilon: float, delta: float, tau0: float, tau1: float) -> EfficiencyQuote:
    """Var(tau_Diff) / Var(tau_H,Diff) for a symmetric design with privacy loss epsilon."""
    _check_inputs(epsilon, delta, tau0, tau1)
    if math.isinf(epsilon):
        return EfficiencyQuote(1.0, 1.0, 1.0)
    low = 1.0 / math.expm1(epsilon)
    high = 1.0 / -math.expm1(-epsilon)
    numerator = (1 - delta) * tau1 * (1 - tau1) + delta * tau0 * (1 - tau0)
    denominator = (1 - delta) * (low + tau1) * (high - tau1) + delta * (low + tau0) * (high - tau0)
    value = numerator / denominator
    if value <= 0:
        raise DesignError(
            "Relative efficiency is zero: tau0 and tau1 in {0, 1} make the "
            "classical estimator variance vanish"
        )
    return EfficiencyQuote.from_efficiency(value)


def relative_efficiency_for_spec(spec: DesignSpec, tau0: float, tau1: float) -> EfficiencyQuote:
    """Relative efficiency computed from the design's own channel probabilities.

    Agrees with relative_efficiency for symmetric designs and also covers
    asymmetric maps.
    """
    _check_probability("tau0", tau0, closed=True)
    _check_probability("tau1", tau1, closed=True)
    delta, m, base = spec.delta, spec.masking_factor(), spec.mean_forced_one()
    p1, p0 = base + m * tau1, base + m * tau0
    private = (p1 * (1 - p1) / delta + p0 * (1 - p0) / (1 - delta)) / m ** 2
    classical = _classical_variance(delta, tau0, tau1)
    if classical <= 0:
        raise DesignError("Classical variance vanishes for tau0, tau1 in {0, 1}")
    return EfficiencyQuote.from_efficiency(min(1.0, classical / private))


def required_n(variance: float, power_target: float, alpha: float, effect: float) -> int:
    """Smallest n with asymptotic two-sided Wald power >= power_target."""
    _check_probability("power_target", power_target, closed=False)
    _check_probability("alpha", alpha, closed=False)
    if effect == 0 or math.isnan(effect):
        raise DesignError("effect must be nonzero: no finite sample size detects a null effect")
    z = norm.ppf(1 - alpha / 2) + norm.ppf(power_target)
    return int(math.ceil(z * z * variance / (effect * effect)))


def sample_size(
    epsilon: float,
    delta: float,
    tau0: float,
    tau1: float,
    power_target: float = 0.8,
    alpha: float = 0.05,
    effect: float = None,
    lam: float = 0.0,
) -> int:
    """Sample size of an RP-RCT for a target power.

    The variance is the leading term of the privatized difference-in-means
    variance; cheaters rescale it by (1 - lam)^-2. `effect` defaults to
    tau1 - tau0.
    """
    _check_inputs(epsilon, delta, tau0, tau1)
    if not 0.0 <= lam < 1.0:
        raise DesignError(f"lam must lie in [0, 1), got {lam}")
    if effect is None:
        effect = tau1 - tau0
    variance = private_variance(epsilon, delta, tau0, tau1) / (1 - lam) ** 2
    n = required_n(variance, power_target, alpha, effect)
    logger.info(
        "Required n %d (epsilon %.4g, effect %.4g, power %.2f)", n, epsilon, effect, power_target
    )
    return n
