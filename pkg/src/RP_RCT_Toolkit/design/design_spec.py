"""
Experimental design of an RP-RCT: treatment probability and the two FRR maps
used in the two random halves of the sample.
"""
import logging
import math
from typing import NamedTuple, Tuple

from ..errors import DesignError
from ..mechanism import EpsilonVariants, FrrParams, PrivacyLoss, epsilon_general, epsilon_variants

logger = logging.getLogger(__name__)

DEFAULT_GAP = 0.06


class LambdaCoefficients(NamedTuple):
    """Split-wise channel terms: E[Y~ | S=s, honest] = a_s + b_s * mu."""

    a1: float
    b1: float
    a2: float
    b2: float

    @property
    def determinant(self) -> float:
        return self.a1 * self.b2 - self.a2 * self.b1


def solve_frr_for_epsilon(epsilon: float, gap: float = DEFAULT_GAP) -> Tuple[float, float]:
    """Symmetric maps (r, r') with r - r' = gap reaching privacy loss `epsilon`.

    r + r' = 2 / (exp(epsilon) + 1).
    """
    if not epsilon > 0 or math.isnan(epsilon):
        raise DesignError(f"epsilon must be positive, got {epsilon}")
    if not gap > 0:
        raise DesignError(f"gap |r - r'| must be positive (maps must differ), got {gap}")
    total = 0.0 if math.isinf(epsilon) else 2.0 / (math.exp(epsilon) + 1.0)
    r, r_prime = (total + gap) / 2.0, (total - gap) / 2.0
    if r_prime <= 0:
        raise DesignError(
            f"Infeasible: gap {gap} >= r + r' = {total:.6g} for epsilon {epsilon}; "
            "use a smaller gap or a smaller epsilon"
        )
    if r >= 0.5:
        raise DesignError(f"Infeasible: r = {r:.6g} >= 0.5 for epsilon {epsilon}, gap {gap}")
    logger.debug("epsilon %.6g, gap %.6g -> r %.6g, r' %.6g", epsilon, gap, r, r_prime)
    return r, r_prime


class DesignSpec:
    """
    Full RP-RCT design.

    Args:
        delta: Treatment probability, 0 < delta < 1
        frr1: FRR map used in subsample S=1
        frr2: FRR map used in subsample S=2
    """

    __slots__ = ("_delta", "_frr1", "_frr2")

    def __init__(self, delta: float, frr1: FrrParams, frr2: FrrParams):
        self._init(delta, frr1, frr2)
        if self._frr1 == self._frr2:
            raise DesignError(f"The two FRR maps must differ, both are {tuple(self._frr1)}")
        for name, frr in (("frr1", self._frr1), ("frr2", self._frr2)):
            if max(frr) >= 0.5:
                raise DesignError(f"{name} forced probabilities must lie in [0, 0.5): {tuple(frr)}")

    def _init(self, delta, frr1, frr2):
        delta = float(delta)
        if not 0.0 < delta < 1.0:
            raise DesignError(f"Treatment probability must lie in (0, 1), got {delta}")
        self._delta = delta
        self._frr1 = frr1 if isinstance(frr1, FrrParams) else FrrParams(*frr1)
        self._frr2 = frr2 if isinstance(frr2, FrrParams) else FrrParams(*frr2)

    @classmethod
    def degenerate(cls, delta: float, frr1: FrrParams, frr2: FrrParams) -> "DesignSpec":
        """Design that skips the distinct-maps check.

        Only meaningful for reductions to the classical estimator with a fixed
        lambda; estimating lambda from it raises IdentificationError.
        """
        spec = cls.__new__(cls)
        spec._init(delta, frr1, frr2)
        return spec

    @classmethod
    def symmetric(cls, delta: float, r: float, r_prime: float) -> "DesignSpec":
        return cls(delta, FrrParams.symmetric(r), FrrParams.symmetric(r_prime))

    @classmethod
    def from_epsilon(
        cls, epsilon: float, gap: float = DEFAULT_GAP, delta: float = 0.5
    ) -> "DesignSpec":
        r, r_prime = solve_frr_for_epsilon(epsilon, gap)
        return cls.symmetric(delta, r, r_prime)

    @classmethod
    def case_study(cls) -> "DesignSpec":
        """Asymmetric design of the online-lecture study (forced-0 never used)."""
        return cls(0.5, FrrParams(0.0, 0.1040), FrrParams(0.0, 0.1667))

    @property
    def delta(self) -> float:
        return self._delta

    @property
    def frr1(self) -> FrrParams:
        return self._frr1

    @property
    def frr2(self) -> FrrParams:
        return self._frr2

    def frr(self, s: int) -> FrrParams:
        if s == 1:
            return self._frr1
        if s == 2:
            return self._frr2
        raise ValueError(f"Subsample label must be 1 or 2, got {s}")

    @property
    def is_symmetric(self) -> bool:
        return self._frr1.is_symmetric and self._frr2.is_symmetric

    @property
    def epsilon(self) -> PrivacyLoss:
        """Strict privacy loss of the 1/2-1/2 mixture, recomputed on access."""
        return epsilon_general([self._frr1, self._frr2], [0.5, 0.5])

    def epsilon_variants(self) -> EpsilonVariants:
        return epsilon_variants(self._frr1, self._frr2)

    def masking_factor(self) -> float:
        """1 - mean forced-0 - mean forced-1; equals 1 - r - r' for symmetric maps."""
        forced = (self._frr1.r0 + self._frr2.r0) + (self._frr1.r1 + self._frr2.r1)
        return 1.0 - forced / 2.0

    def mean_forced_one(self) -> float:
        return (self._frr1.r1 + self._frr2.r1) / 2.0

    def lambda_coefficients(self) -> LambdaCoefficients:
        return LambdaCoefficients(
            self._frr1.r1,
            self._frr1.truth_probability,
            self._frr2.r1,
            self._frr2.truth_probability,
        )

    def swapped(self) -> "DesignSpec":
        """Same design with the subsample labels exchanged."""
        spec = type(self).__new__(type(self))
        spec._init(self._delta, self._frr2, self._frr1)
        return spec

    def with_delta(self, delta: float) -> "DesignSpec":
        return type(self)(delta, self._frr1, self._frr2)

    def to_dict(self) -> dict:
        return {
            "delta": self._delta,
            "frr1": self._frr1.to_dict(),
            "frr2": self._frr2.to_dict(),
            "epsilon": self.epsilon.to_json(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DesignSpec":
        """Build from a design document; a stored epsilon is ignored and recomputed."""
        if "frr1" in data and "frr2" in data:
            return cls(
                data["delta"],
                FrrParams.from_dict(data["frr1"]),
                FrrParams.from_dict(data["frr2"]),
            )
        if "epsilon" in data:
            return cls.from_epsilon(
                float(data["epsilon"]), float(data.get("gap", DEFAULT_GAP)), data["delta"]
            )
        raise DesignError("Design needs either frr1/frr2 or epsilon")

    def __eq__(self, other) -> bool:
        if not isinstance(other, DesignSpec):
            return NotImplemented
        return (self._delta, self._frr1, self._frr2) == (other._delta, other._frr1, other._frr2)

    def __hash__(self) -> int:
        return hash((self._delta, self._frr1, self._frr2))

    def __repr__(self) -> str:
        return (
            f"DesignSpec(delta={self._delta}, frr1={tuple(self._frr1)}, "
            f"frr2={tuple(self._frr2)}, epsilon={self.epsilon.epsilon:.6g})"
        )
