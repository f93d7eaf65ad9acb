"""
Forced randomized response (FRR).

A participant draws a private prompt: with probability r0 they are forced to
answer 0, with probability r1 forced to answer 1, otherwise they report the
truth.
"""
import enum
import logging
from typing import NamedTuple, Union

import numpy as np

from ..errors import DesignError

logger = logging.getLogger(__name__)


class Prompt(enum.IntEnum):
    FORCE0 = 0
    FORCE1 = 1
    REPORT_TRUTH = 2


class _FrrFields(NamedTuple):
    r0: float
    r1: float


class FrrParams(_FrrFields):
    """Forced-response probabilities of one FRR map.

    Invariants: r0 >= 0, r1 >= 0 and r0 + r1 < 1.
    """

    __slots__ = ()

    def __new__(cls, r0: float = 0.0, r1: float = 0.0):
        r0, r1 = float(r0), float(r1)
        if not (np.isfinite(r0) and np.isfinite(r1)):
            raise DesignError(f"FRR probabilities must be finite, got ({r0}, {r1})")
        if r0 < 0 or r1 < 0:
            raise DesignError(f"FRR probabilities must be nonnegative, got ({r0}, {r1})")
        if r0 + r1 >= 1:
            raise DesignError(
                f"FRR needs a positive report-truth probability: r0 + r1 = {r0 + r1} >= 1"
            )
        return super().__new__(cls, r0, r1)

    @classmethod
    def symmetric(cls, r: float) -> "FrrParams":
        return cls(r, r)

    @property
    def is_symmetric(self) -> bool:
        return self.r0 == self.r1

    @property
    def truth_probability(self) -> float:
        return 1.0 - self.r0 - self.r1

    def to_dict(self) -> dict:
        return {"r0": self.r0, "r1": self.r1}

    @classmethod
    def from_dict(cls, data: dict) -> "FrrParams":
        return cls(data["r0"], data["r1"])


def sample_prompts(params: FrrParams, size: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorised prompt draws, coded as Prompt values."""
    u = rng.random(size)
    prompts = np.full(size, int(Prompt.REPORT_TRUTH), dtype=np.int8)
    prompts[u < params.r0 + params.r1] = int(Prompt.FORCE1)
    prompts[u < params.r0] = int(Prompt.FORCE0)
    return prompts


def sample_prompt(params: FrrParams, rng: np.random.Generator) -> Prompt:
    """Draw one prompt: Force0 w.p. r0, Force1 w.p. r1, ReportTruth otherwise."""
    return Prompt(int(sample_prompts(params, 1, rng)[0]))


def privatize(y: int, prompt: Union[Prompt, int]) -> int:
    """Response given by an honest participant with true answer `y`."""
    if y not in (0, 1):
        raise ValueError(f"Response must be binary, got {y!r}")
    prompt = Prompt(prompt)
    if prompt is Prompt.FORCE0:
        return 0
    if prompt is Prompt.FORCE1:
        return 1
    return int(y)


def privatize_many(y: np.ndarray, prompts: np.ndarray) -> np.ndarray:
    """Vectorised privatize."""
    y = np.asarray(y, dtype=np.int8)
    prompts = np.asarray(prompts)
    return np.where(
        prompts == Prompt.FORCE0,
        0,
        np.where(prompts == Prompt.FORCE1, 1, y),
    ).astype(np.int8)


def response_distribution(params: FrrParams, y: int) -> float:
    """Pr(privatized response = 1 | true response y)."""
    return params.r1 + (1.0 - params.r0 - params.r1) * y
