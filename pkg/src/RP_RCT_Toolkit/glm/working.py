"""
Per-arm working models of the privatized outcome.
"""
import logging
from typing import TYPE_CHECKING, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..errors import DegenerateDataError, ModelFitError
from .encoder import DesignEncoder
from .irls import FitOptions, LogisticModel, fit_frame
from .selection import select_aic

if TYPE_CHECKING:
    from ..estimate.dataset import PrivateDataset

logger = logging.getLogger(__name__)

SELECTIONS = ("aic", "full", "intercept")


class WorkingModels(NamedTuple):
    treated: LogisticModel
    control: LogisticModel

    def predict(self, data: "PrivateDataset") -> Tuple[np.ndarray, np.ndarray]:
        """(f1, f0) predictions for every row of `data`."""
        x = data.x
        f1 = self.treated.predict_proba(x, n=data.n)
        f0 = self.control.predict_proba(x, n=data.n)
        for name, values in (("treated", f1), ("control", f0)):
            if not np.all((values >= 0) & (values <= 1)):
                raise ModelFitError(f"{name} working model predicted outside [0, 1]")
        return f1, f0

    def to_dict(self) -> dict:
        return {"treated": self.treated.to_dict(), "control": self.control.to_dict()}


def fit_working_models(
    data: "PrivateDataset",
    covariates: Optional[Sequence[str]] = None,
    selection: str = "aic",
    direction: str = "backward",
    missing_indicators: bool = False,
    kinds=None,
) -> WorkingModels:
    """
    Fit f1 on the treated rows and f0 on the control rows, each on y_tilde.

    Args:
        data: Observed dataset
        covariates: Candidate covariates (default: every covariate column)
        selection: "aic" for stepwise selection, "full" for all candidates,
            "intercept" for constant models
        direction: Stepwise direction for "aic"
        missing_indicators: Add missingness indicator columns
        kinds: Declared covariate kinds for the encoder
    """
    if selection not in SELECTIONS:
        raise ModelFitError(f"Unknown working-model selection {selection!r}")
    if covariates is None:
        covariates = data.covariate_names
    covariates = list(covariates)
    if selection == "intercept":
        covariates = []
    frame = data.x
    options = FitOptions(drop_rank_deficient=True)
    models = []
    for arm in (1, 0):
        rows = data.a == arm
        if not rows.any():
            raise DegenerateDataError(
                f"Treatment arm A={arm} is empty; cannot fit its working model"
            )
        arm_frame = None if frame is None else frame[rows].reset_index(drop=True)
        y = data.y_tilde[rows]
        encoder = DesignEncoder(kinds, missing_indicators).fit(arm_frame, covariates)
        if selection == "aic" and encoder.covariates:
            model = select_aic(arm_frame, y, encoder.covariates, direction, encoder, options)
        else:
            model = fit_frame(arm_frame, y, encoder.covariates, encoder, options)
        if model.separated:
            logger.info("Working model for arm %d is separated; predictions clamped", arm)
        models.append(model)
    return WorkingModels(treated=models[0], control=models[1])
