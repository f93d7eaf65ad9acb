"""
Power and coverage over a grid of effects or privacy levels.
"""
import logging
from typing import List, NamedTuple, Optional, Sequence

from ..design import DEFAULT_GAP, DesignSpec
from ..errors import DesignError
from ..estimate import Method
from .population import PopulationConfig
from .replicate import ReplicateOptions, replicate

logger = logging.getLogger(__name__)

GRID_KINDS = ("effect", "epsilon")


class PowerPoint(NamedTuple):
    value: float
    method: str
    rejection_rate: float
    coverage: float
    mean_se: float
    mean_tau_h: float
    failures: int

    def to_dict(self) -> dict:
        return self._asdict()


def _with_shift(config: PopulationConfig, shift: float) -> PopulationConfig:
    first, *rest = config.outcomes
    return config._replace(outcomes=(first._replace(treatment_shift=shift), *rest))


def power_study(
    config: PopulationConfig,
    spec: DesignSpec,
    kind: str,
    grid: Sequence[float],
    reps: int,
    seed: int,
    options: ReplicateOptions = ReplicateOptions(),
    gap: float = DEFAULT_GAP,
    n_jobs: Optional[int] = None,
) -> List[PowerPoint]:
    """
    Rejection rate and coverage of the Wald tests at every grid point.

    Args:
        config: Population generator
        spec: Design; for an epsilon grid only its delta is kept
        kind: "effect" varies the log-odds treatment shift of the first
            outcome, "epsilon" rebuilds symmetric FRR maps at each privacy level
        grid: Values to evaluate
        reps: Replicates per grid point
        seed: Shared by every grid point, so neighbouring points reuse draws
        gap: r - r' of the maps built for an epsilon grid

    Returns:
        One row per grid value and method
    """
    if kind not in GRID_KINDS:
        raise DesignError(f"Grid kind must be one of {GRID_KINDS}, got {kind!r}")
    if not grid:
        raise DesignError("Power grid is empty")
    if reps < 1:
        raise DesignError(f"reps must be at least 1, got {reps}")

    rows = []
    for value in grid:
        if kind == "effect":
            point_config, point_spec = _with_shift(config, float(value)), spec
        else:
            point_config = config
            point_spec = DesignSpec.from_epsilon(float(value), gap, spec.delta)
        summary = replicate(point_config, point_spec, reps, seed, options, n_jobs)
        for method in options.methods:
            est = summary.estimators[Method(method).value]
            rows.append(
                PowerPoint(
                    value=float(value),
                    method=est.method,
                    rejection_rate=est.rejection_rate,
                    coverage=est.coverage,
                    mean_se=est.mean_se,
                    mean_tau_h=est.truth,
                    failures=summary.failures,
                )
            )
        logger.info("Power grid %s=%g done", kind, value)
    return rows
