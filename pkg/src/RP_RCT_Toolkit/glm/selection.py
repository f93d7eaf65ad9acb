"""
Stepwise AIC selection of logistic working models.
"""
import logging
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from ..errors import ModelFitError
from .encoder import DesignEncoder
from .irls import FitOptions, LogisticModel, fit_frame

logger = logging.getLogger(__name__)

DIRECTIONS = ("backward", "forward")


def _path_entry(model: LogisticModel, action: str, term: Optional[str]) -> dict:
    return {"action": action, "term": term, "covariates": list(model.covariates), "aic": model.aic}


def select_aic(
    frame: Optional[pd.DataFrame],
    y: np.ndarray,
    candidates: Sequence[str],
    direction: str = "backward",
    encoder: Optional[DesignEncoder] = None,
    options: FitOptions = FitOptions(drop_rank_deficient=True),
) -> LogisticModel:
    """
    Main-effects logistic model minimising AIC by stepwise search.

    Backward search starts from all candidates and removes, one at a time,
    the term whose removal lowers AIC the most; forward search starts from
    the intercept and adds terms. Ties go to the lower candidate index. The
    returned model carries the visited models in `aic_path`.

    Raises:
        ModelFitError: Empty candidate set, unknown direction, or fit errors
    """
    candidates = list(dict.fromkeys(candidates))
    if not candidates:
        raise ModelFitError("AIC selection needs at least one candidate covariate")
    if direction not in DIRECTIONS:
        raise ModelFitError(f"Unknown selection direction {direction!r}")
    if encoder is None:
        encoder = DesignEncoder().fit(frame, candidates)
    usable = [c for c in candidates if c in encoder.covariates]

    def fit_terms(terms: Sequence[str]) -> LogisticModel:
        return fit_frame(frame, y, list(terms), encoder, options)

    current: List[str] = list(usable) if direction == "backward" else []
    best = fit_terms(current)
    path = [_path_entry(best, "start", None)]
    while True:
        if direction == "backward":
            moves = [(t, [c for c in current if c != t]) for t in current]
        else:
            moves = [
                (t, [c for c in usable if c in current or c == t])
                for t in usable
                if t not in current
            ]
        step_best, step_term = None, None
        for term, terms in moves:
            model = fit_terms(terms)
            if step_best is None or model.aic < step_best.aic:
                step_best, step_term = model, term
        if step_best is None or not step_best.aic < best.aic:
            break
        current = list(step_best.covariates)
        best = step_best
        action = "remove" if direction == "backward" else "add"
        path.append(_path_entry(best, action, step_term))
        logger.debug("AIC %s %s -> %.4f", action, step_term, best.aic)
    best.aic_path = path
    logger.info("Selected covariates %s (AIC %.4f)", best.covariates, best.aic)
    return best
