"""
The RP-RCT protocol: random split, FRR prompt per subsample, randomized
treatment, privatized reports.
"""
import logging
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from ..design import DesignSpec
from ..errors import DegenerateDataError
from ..estimate.dataset import MultiOutcomeDataset, PrivateDataset
from ..mechanism import privatize_many, sample_prompts
from .behaviors import HONEST, CheaterBehavior
from .population import LatentPopulation

logger = logging.getLogger(__name__)


class TruthSidecar(NamedTuple):
    """Latent per-unit truth, row-aligned with the observed dataset."""

    y1: np.ndarray
    y0: np.ndarray
    c: np.ndarray
    behavior: np.ndarray
    prompt: np.ndarray
    s: np.ndarray
    a: np.ndarray

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def y(self) -> np.ndarray:
        """Realized true responses Y(A)."""
        return np.where(self.a == 1, self.y1, self.y0).astype(np.int8)


def true_tau_h(sidecar: TruthSidecar) -> float:
    """Average effect among non-cheaters, computed from the latent truth."""
    honest = np.asarray(sidecar.c) == 0
    if not honest.any():
        raise DegenerateDataError("Every unit is a cheater: the honest effect is undefined")
    diff = np.asarray(sidecar.y1, dtype=float) - np.asarray(sidecar.y0, dtype=float)
    return float(diff[honest].mean())


def true_ate(sidecar: TruthSidecar) -> float:
    """Average effect over all units."""
    diff = np.asarray(sidecar.y1, dtype=float) - np.asarray(sidecar.y0, dtype=float)
    return float(diff.mean())


def _assign(
    n: int, spec: DesignSpec, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    s = (rng.random(n) < 0.5).astype(np.int8) + 1
    a = (rng.random(n) < spec.delta).astype(np.int8)
    return s, a


def _respond(
    population: LatentPopulation,
    outcome: str,
    spec: DesignSpec,
    s: np.ndarray,
    a: np.ndarray,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, TruthSidecar]:
    n = population.n
    prompts = np.empty(n, dtype=np.int8)
    for label in (1, 2):
        rows = s == label
        prompts[rows] = sample_prompts(spec.frr(label), int(rows.sum()), rng)
    coins = rng.random(n)

    y1, y0 = population.y1[outcome], population.y0[outcome]
    y = np.where(a == 1, y1, y0).astype(np.int8)
    reports = privatize_many(y, prompts)
    for code in np.unique(population.behavior):
        if code == HONEST:
            continue
        rows = population.behavior == code
        behavior = CheaterBehavior(int(code))
        reports[rows] = behavior.respond(y[rows], prompts[rows], a[rows], coins[rows])

    sidecar = TruthSidecar(
        y1=y1, y0=y0, c=population.c, behavior=population.behavior, prompt=prompts, s=s, a=a
    )
    return reports, sidecar


def run_protocol(
    population: LatentPopulation,
    spec: DesignSpec,
    rng: np.random.Generator,
    outcome: Optional[str] = None,
) -> Tuple[PrivateDataset, TruthSidecar]:
    """
    Run the experiment on a population for one outcome.

    Args:
        population: Latent population
        spec: Design providing delta and the two FRR maps
        rng: Random stream for split, treatment, prompts and cheater coins
        outcome: Outcome to observe (default: the first)

    Returns:
        Observed dataset and its truth sidecar
    """
    outcome = outcome or population.outcome_names[0]
    s, a = _assign(population.n, spec, rng)
    reports, sidecar = _respond(population, outcome, spec, s, a, rng)
    data = PrivateDataset(reports, a, s, population.x, outcome=outcome)
    logger.debug(
        "Protocol run: n=%d, treated=%d, split 1=%d", data.n, int(a.sum()), int((s == 1).sum())
    )
    return data, sidecar


def run_protocol_outcomes(
    population: LatentPopulation, spec: DesignSpec, rng: np.random.Generator
) -> Tuple[MultiOutcomeDataset, Dict[str, TruthSidecar]]:
    """Run the experiment once and ask every outcome question.

    Split and treatment are shared; each question gets its own prompt.
    The first outcome consumes the stream exactly like run_protocol.
    """
    s, a = _assign(population.n, spec, rng)
    reports, sidecars = {}, {}
    for outcome in population.outcome_names:
        reports[outcome], sidecars[outcome] = _respond(population, outcome, spec, s, a, rng)
    return MultiOutcomeDataset(reports, a, s, population.x), sidecars
