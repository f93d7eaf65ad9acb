"""
Catalog of cheater response rules.

A cheater ignores the FRR protocol. All rules except TREATMENT_DEPENDENT
produce responses independent of treatment given the subsample and prompt.
"""
import enum
import logging

import numpy as np

from ..mechanism import FrrParams, PrivacyLoss, Prompt, channel_epsilon

logger = logging.getLogger(__name__)

HONEST = -1


class CheaterBehavior(enum.IntEnum):
    ALWAYS_ZERO = 0
    ALWAYS_ONE = 1
    FLIP_TRUTH = 2
    UNIFORM_RANDOM = 3
    PROMPT_COMPLIANT_FORCED_ONLY = 4
    TREATMENT_DEPENDENT = 5

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> "CheaterBehavior":
        key = str(label).strip()
        for behavior, name in _LABELS.items():
            if key in (name, behavior.name):
                return behavior
        raise ValueError(f"Unknown cheater behavior: {label!r}")

    @property
    def treatment_independent(self) -> bool:
        return self is not CheaterBehavior.TREATMENT_DEPENDENT

    def respond(
        self,
        y: np.ndarray,
        prompts: np.ndarray,
        a: np.ndarray,
        coins: np.ndarray,
    ) -> np.ndarray:
        """
        Responses of cheaters following this rule.

        Args:
            y: True responses Y(A)
            prompts: Prompt codes drawn for the units
            a: Treatment indicators
            coins: Uniform draws in [0, 1), consumed by UNIFORM_RANDOM only

        Returns:
            Binary responses as int8
        """
        y = np.asarray(y, dtype=np.int8)
        if self is CheaterBehavior.ALWAYS_ZERO:
            out = np.zeros_like(y)
        elif self is CheaterBehavior.ALWAYS_ONE:
            out = np.ones_like(y)
        elif self is CheaterBehavior.FLIP_TRUTH:
            out = 1 - y
        elif self is CheaterBehavior.UNIFORM_RANDOM:
            out = np.asarray(coins) < 0.5
        elif self is CheaterBehavior.PROMPT_COMPLIANT_FORCED_ONLY:
            prompts = np.asarray(prompts)
            out = np.where(
                prompts == Prompt.FORCE0,
                0,
                np.where(prompts == Prompt.FORCE1, 1, 1 - y),
            )
        else:
            out = np.asarray(a)
        return np.asarray(out, dtype=np.int8)

    def channel(self, frr: FrrParams):
        """(Pr(out=1 | y=1), Pr(out=1 | y=0)) of this rule under map `frr`.

        TREATMENT_DEPENDENT does not read y, so its channel is flat in y.
        """
        if self in (CheaterBehavior.ALWAYS_ZERO, CheaterBehavior.TREATMENT_DEPENDENT):
            return (0.0, 0.0)
        if self is CheaterBehavior.ALWAYS_ONE:
            return (1.0, 1.0)
        if self is CheaterBehavior.FLIP_TRUTH:
            return (0.0, 1.0)
        if self is CheaterBehavior.UNIFORM_RANDOM:
            return (0.5, 0.5)
        return (frr.r1, frr.r1 + frr.truth_probability)

    def privacy_loss(self, frr: FrrParams) -> PrivacyLoss:
        """Privacy loss a cheater following this rule incurs on their own answer."""
        p1, p0 = self.channel(frr)
        return PrivacyLoss(channel_epsilon(p1, p0))


_LABELS = {
    CheaterBehavior.ALWAYS_ZERO: "AlwaysZero",
    CheaterBehavior.ALWAYS_ONE: "AlwaysOne",
    CheaterBehavior.FLIP_TRUTH: "FlipTruth",
    CheaterBehavior.UNIFORM_RANDOM: "UniformRandom",
    CheaterBehavior.PROMPT_COMPLIANT_FORCED_ONLY: "PromptCompliantForcedOnly",
    CheaterBehavior.TREATMENT_DEPENDENT: "TreatmentDependent",
}


def behavior_label(code: int) -> str:
    return "honest" if code == HONEST else CheaterBehavior(code).label


def behavior_code(label: str) -> int:
    return HONEST if label == "honest" else int(CheaterBehavior.from_label(label))
