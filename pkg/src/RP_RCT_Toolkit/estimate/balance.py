"""
Covariate balance between treatment arms.
"""
import logging
from typing import List, NamedTuple, Optional

import numpy as np
import pandas as pd

from .dataset import PrivateDataset

logger = logging.getLogger(__name__)

SMD_THRESHOLD = 0.1


class BalanceRow(NamedTuple):
    covariate: str
    mean_treated: Optional[float]
    mean_control: Optional[float]
    smd: Optional[float]
    missing_treated: float
    missing_control: float
    flagged: bool
    note: str = ""

    def to_dict(self) -> dict:
        return self._asdict()


def _mean(values: np.ndarray) -> Optional[float]:
    values = values[~np.isnan(values)]
    return float(values.mean()) if len(values) else None


def _variance(values: np.ndarray) -> float:
    values = values[~np.isnan(values)]
    return float(values.var(ddof=1)) if len(values) > 1 else 0.0


def _numeric_columns(name: str, series: pd.Series):
    if pd.api.types.is_numeric_dtype(series) or pd.api.types.is_bool_dtype(series):
        yield name, series.to_numpy(dtype=float)
        return
    missing = series.isna().to_numpy()
    levels = sorted(str(v) for v in series[~missing].unique())
    text = series.astype(str).to_numpy()
    for level in levels:
        indicator = (text == level).astype(float)
        indicator[missing] = np.nan
        yield f"{name}[{level}]", indicator


def covariate_balance(data: PrivateDataset, threshold: float = SMD_THRESHOLD) -> List[BalanceRow]:
    """
    Standardized mean differences (treated - control) / pooled SD per covariate.

    Categorical covariates get one row per level. A constant or all-missing
    covariate has no SMD (None).
    """
    rows: List[BalanceRow] = []
    x = data.x
    if x is None:
        return rows
    treated = data.a == 1
    for name in x.columns:
        series = x[name]
        missing = series.isna().to_numpy()
        missing_t = float(missing[treated].mean()) if treated.any() else 0.0
        missing_c = float(missing[~treated].mean()) if (~treated).any() else 0.0
        if missing.all():
            rows.append(
                BalanceRow(str(name), None, None, None, missing_t, missing_c, False, "all missing")
            )
            continue
        for label, values in _numeric_columns(str(name), series):
            mean_t, mean_c = _mean(values[treated]), _mean(values[~treated])
            pooled = np.sqrt((_variance(values[treated]) + _variance(values[~treated])) / 2.0)
            if mean_t is None or mean_c is None:
                smd, note = None, "missing in one arm"
            elif not pooled > 0:
                smd, note = None, "constant"
            else:
                smd, note = float((mean_t - mean_c) / pooled), ""
            flagged = smd is not None and abs(smd) > threshold
            rows.append(BalanceRow(label, mean_t, mean_c, smd, missing_t, missing_c, flagged, note))
    flagged = [r.covariate for r in rows if r.flagged]
    if flagged:
        logger.info("Covariates with |SMD| > %g: %s", threshold, flagged)
    return rows
