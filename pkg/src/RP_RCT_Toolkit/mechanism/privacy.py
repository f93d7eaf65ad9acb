"""
Exact (epsilon, 0)-differential privacy accounting for FRR channels.

A binary channel is described by p1 = Pr(out=1 | y=1) and p0 = Pr(out=1 | y=0).
Its privacy loss is the largest log-ratio of output probabilities between the
two inputs, taken over both outputs and both orderings of the inputs.
"""
import logging
import math
from typing import NamedTuple, Optional, Sequence, Tuple

from ..errors import DesignError
from ..utils.numeric import format_float, parse_float
from .frr import FrrParams

logger = logging.getLogger(__name__)

WEIGHT_TOLERANCE = 1e-12


class PrivacyLoss(NamedTuple):
    epsilon: float

    def __float__(self) -> float:
        return self.epsilon

    @property
    def is_private(self) -> bool:
        return math.isfinite(self.epsilon)

    def to_json(self) -> object:
        return format_float(self.epsilon)

    @classmethod
    def from_json(cls, value: object) -> "PrivacyLoss":
        return cls(parse_float(value))


class EpsilonVariants(NamedTuple):
    """Three readings of the privacy loss of an RP-RCT design.

    strict: exhaustive ratio maximisation over the mixture channel.
    formula: ln(2/(r + r') - 1) with each map's larger forced probability as r.
    one_sided: ln Pr(out=1 | y=1) / Pr(out=1 | y=0) of the mixture.
    """

    strict: PrivacyLoss
    formula: Optional[PrivacyLoss]
    one_sided: PrivacyLoss

    def to_dict(self) -> dict:
        return {
            "strict": self.strict.to_json(),
            "formula": None if self.formula is None else self.formula.to_json(),
            "one_sided": self.one_sided.to_json(),
        }


def _log_ratio(num: float, den: float) -> float:
    if num == 0:
        return -math.inf
    if den == 0:
        return math.inf
    return math.log(num / den)


def channel_epsilon(p1: float, p0: float) -> float:
    """Privacy loss of a binary channel with Pr(1|y=1)=p1, Pr(1|y=0)=p0."""
    q1, q0 = 1.0 - p1, 1.0 - p0
    ratios = (
        _log_ratio(p1, p0),
        _log_ratio(p0, p1),
        _log_ratio(q0, q1),
        _log_ratio(q1, q0),
    )
    return max(0.0, max(ratios))


def mixture_channel(
    maps: Sequence[FrrParams], weights: Sequence[float]
) -> Tuple[float, float]:
    """Return (Pr(out=1 | y=1), Pr(out=1 | y=0)) of a weighted FRR mixture."""
    if len(maps) == 0 or len(maps) != len(weights):
        raise DesignError("Need one weight per FRR map and at least one map")
    if any(w < 0 for w in weights) or abs(math.fsum(weights) - 1.0) > WEIGHT_TOLERANCE:
        raise DesignError(f"Mixture weights must be nonnegative and sum to 1: {weights}")
    p1 = math.fsum(w * (1.0 - m.r0) for m, w in zip(maps, weights))
    p0 = math.fsum(w * m.r1 for m, w in zip(maps, weights))
    return p1, p0


def epsilon_general(
    maps: Sequence[FrrParams], weights: Optional[Sequence[float]] = None
) -> PrivacyLoss:
    """Privacy loss of the marginal mechanism mixing `maps` with `weights`.

    Weights default to equal shares (the RP-RCT split is 1/2, 1/2).
    """
    maps = [m if isinstance(m, FrrParams) else FrrParams(*m) for m in maps]
    if weights is None:
        weights = [1.0 / len(maps)] * len(maps) if maps else []
    p1, p0 = mixture_channel(maps, weights)
    return PrivacyLoss(channel_epsilon(p1, p0))


def _check_symmetric_r(name: str, value: float) -> None:
    if not 0.0 <= value < 0.5:
        raise DesignError(f"{name} must lie in [0, 0.5), got {value}")


def epsilon_symmetric(r: float, r_prime: float) -> PrivacyLoss:
    """ln(2/(r + r') - 1) for the 1/2-1/2 mixture of symmetric maps r and r'.

    Returns infinity when r + r' = 0 (both maps report the truth).
    """
    _check_symmetric_r("r", r)
    _check_symmetric_r("r_prime", r_prime)
    return epsilon_general([FrrParams.symmetric(r), FrrParams.symmetric(r_prime)], [0.5, 0.5])


def epsilon_from_sum(total: float) -> float:
    """Closed form ln(2/total - 1) used when inverting the symmetric design."""
    if total <= 0:
        return math.inf
    return math.log(2.0 / total - 1.0)


def one_sided_epsilon(
    maps: Sequence[FrrParams], weights: Optional[Sequence[float]] = None
) -> PrivacyLoss:
    maps = list(maps)
    if weights is None:
        weights = [1.0 / len(maps)] * len(maps)
    p1, p0 = mixture_channel(maps, weights)
    return PrivacyLoss(max(0.0, _log_ratio(p1, p0)))


def epsilon_variants(frr1: FrrParams, frr2: FrrParams) -> EpsilonVariants:
    """All three privacy-loss readings of a two-map design (equal split)."""
    strict = epsilon_general([frr1, frr2], [0.5, 0.5])
    r, r_prime = max(frr1.r0, frr1.r1), max(frr2.r0, frr2.r1)
    formula = None
    if r < 0.5 and r_prime < 0.5:
        formula = PrivacyLoss(epsilon_from_sum(r + r_prime))
    one_sided = one_sided_epsilon([frr1, frr2], [0.5, 0.5])
    if frr1.is_symmetric and frr2.is_symmetric:
        logger.debug("Symmetric design: strict epsilon %.6g", strict.epsilon)
    elif not strict.is_private:
        logger.info(
            "Design is not differentially private for any finite epsilon "
            "(formula %.4g, one-sided %.4g)",
            formula.epsilon if formula else math.nan,
            one_sided.epsilon,
        )
    return EpsilonVariants(strict, formula, one_sided)
