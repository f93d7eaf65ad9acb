"""
Design summary: privacy readings, cost of privacy, identifiability warnings.
"""
import logging
from typing import List, NamedTuple

from ..errors import DesignError
from ..mechanism import EpsilonVariants
from .design_spec import DesignSpec
from .efficiency import EfficiencyQuote, relative_efficiency_for_spec

logger = logging.getLogger(__name__)

DETERMINANT_WARNING = 0.1
MASKING_WARNING = 0.5


class DesignReport(NamedTuple):
    spec: DesignSpec
    epsilon: EpsilonVariants
    efficiency: EfficiencyQuote
    masking_factor: float
    lambda_determinant: float
    tau0: float
    tau1: float
    warnings: List[str]

    def to_dict(self) -> dict:
        return {
            "design": self.spec.to_dict(),
            "epsilon": self.epsilon.to_dict(),
            "efficiency": self.efficiency.to_dict(),
            "masking_factor": self.masking_factor,
            "lambda_determinant": self.lambda_determinant,
            "tau0": self.tau0,
            "tau1": self.tau1,
            "warnings": list(self.warnings),
        }


def design_report(spec: DesignSpec, tau0: float = 0.5, tau1: float = 0.5) -> DesignReport:
    """Summarise a design for planning."""
    warnings = []
    variants = spec.epsilon_variants()
    if not variants.strict.is_private:
        warnings.append(
            "A forced probability of zero leaves one output that only truthful "
            "answers produce: the design is not differentially private for any "
            "finite epsilon in the strict sense; see the formula and one-sided readings"
        )
    determinant = spec.lambda_coefficients().determinant
    if determinant == 0:
        warnings.append("The two maps do not identify the proportion of cheaters")
    elif abs(determinant) < DETERMINANT_WARNING:
        warnings.append(
            f"Maps are close (determinant {determinant:.4g}): the variance of the "
            f"cheater estimate is inflated by {1 / determinant ** 2:.1f}x"
        )
    masking = spec.masking_factor()
    if masking < MASKING_WARNING:
        warnings.append(f"Masking factor {masking:.3g} strongly attenuates the effect")
    try:
        efficiency = relative_efficiency_for_spec(spec, tau0, tau1)
    except DesignError as e:
        logger.warning("Efficiency unavailable: %s", e)
        raise
    for message in warnings:
        logger.warning(message)
    return DesignReport(
        spec=spec,
        epsilon=variants,
        efficiency=efficiency,
        masking_factor=masking,
        lambda_determinant=determinant,
        tau0=tau0,
        tau1=tau1,
        warnings=warnings,
    )
