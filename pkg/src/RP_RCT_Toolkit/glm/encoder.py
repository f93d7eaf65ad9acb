"""
Covariate table -> design matrix.

Categorical covariates become treatment-coded dummies (first level dropped),
numeric covariates pass through. Missing entries are imputed with the
training-sample mean of the encoded column, optionally with a missingness
indicator per covariate.
"""
import logging
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd

from ..errors import ModelFitError

logger = logging.getLogger(__name__)

INTERCEPT = "(Intercept)"
NUMERIC_KINDS = ("numeric", "binary")


class EncodedTerm(NamedTuple):
    """One covariate and the design columns it owns."""

    name: str
    kind: str
    columns: List[str]
    levels: List[str]
    means: List[float]
    indicator: bool


def _is_categorical(series: pd.Series, declared: Optional[str]) -> bool:
    if declared is not None:
        return declared == "categorical"
    return not (pd.api.types.is_numeric_dtype(series) or pd.api.types.is_bool_dtype(series))


class DesignEncoder:
    """
    Learns the encoding of a covariate table on training data.

    Args:
        kinds: Declared kind per covariate (binary/categorical/numeric);
            undeclared columns are categorical when non-numeric
        missing_indicators: Add a 0/1 column flagging missing entries
    """

    def __init__(self, kinds: Optional[Mapping[str, str]] = None, missing_indicators: bool = False):
        self.kinds = dict(kinds or {})
        self.missing_indicators = missing_indicators
        self.terms: Dict[str, EncodedTerm] = {}

    def fit(self, frame: Optional[pd.DataFrame], covariates: Sequence[str]) -> "DesignEncoder":
        self.terms = {}
        for name in covariates:
            if frame is None or name not in frame.columns:
                raise ModelFitError(f"Covariate {name!r} not in the data")
            series = frame[name]
            missing = series.isna()
            if missing.all():
                logger.warning("Covariate %s is missing in every training row, skipped", name)
                continue
            if _is_categorical(series, self.kinds.get(name)):
                levels = sorted(str(v) for v in series[~missing].unique())
                dummies = levels[1:]
                encoded = self._dummies(series, dummies)
                columns = [f"{name}[{level}]" for level in dummies]
                kind = "categorical"
            else:
                values = pd.to_numeric(series, errors="coerce").to_numpy(dtype=float)
                if np.isnan(values[~missing.to_numpy()]).any():
                    raise ModelFitError(f"Covariate {name!r} has non-numeric entries")
                levels, encoded, columns = [], values[:, None], [name]
                kind = self.kinds.get(name, "numeric")
            means = [float(np.nanmean(col)) for col in encoded.T]
            indicator = self.missing_indicators and bool(missing.any())
            if indicator:
                columns = columns + [f"{name}[missing]"]
            self.terms[name] = EncodedTerm(name, kind, columns, levels, means, indicator)
        return self

    @staticmethod
    def _dummies(series: pd.Series, dummies: Sequence[str]) -> np.ndarray:
        text = series.astype(object).where(series.notna(), None)
        out = np.empty((len(series), len(dummies)))
        for j, level in enumerate(dummies):
            col = np.array([np.nan if v is None else float(str(v) == level) for v in text])
            out[:, j] = col
        return out

    @property
    def covariates(self) -> List[str]:
        return list(self.terms)

    def column_names(self, covariates: Optional[Sequence[str]] = None) -> List[str]:
        names = [INTERCEPT]
        for name in self._selected(covariates):
            names.extend(self.terms[name].columns)
        return names

    def _selected(self, covariates: Optional[Sequence[str]]) -> List[str]:
        if covariates is None:
            return self.covariates
        unknown = [c for c in covariates if c not in self.terms]
        if unknown:
            raise ModelFitError(f"Covariates {unknown} were not fitted by the encoder")
        return [c for c in self.covariates if c in covariates]

    def transform(
        self,
        frame: Optional[pd.DataFrame],
        covariates: Optional[Sequence[str]] = None,
        n: int = None,
    ) -> np.ndarray:
        """Design matrix with a leading intercept column."""
        selected = self._selected(covariates)
        if frame is None:
            if selected:
                raise ModelFitError("Covariates requested but the data has none")
            return np.ones((n or 0, 1))
        blocks = [np.ones((len(frame), 1))]
        for name in selected:
            term = self.terms[name]
            if name in frame.columns:
                series = frame[name]
            else:
                series = pd.Series([np.nan] * len(frame), dtype=float)
            missing = series.isna().to_numpy()
            if term.kind == "categorical":
                encoded = self._dummies(series, term.levels[1:])
            else:
                encoded = np.array(pd.to_numeric(series, errors="coerce"), dtype=float)[:, None]
            for j, mean in enumerate(term.means):
                col = encoded[:, j]
                col[np.isnan(col)] = mean
            blocks.append(encoded)
            if term.indicator:
                blocks.append(missing.astype(float)[:, None])
        return np.hstack(blocks)

    def to_dict(self) -> dict:
        return {
            "missing_indicators": self.missing_indicators,
            "terms": [
                {
                    "name": t.name,
                    "kind": t.kind,
                    "columns": t.columns,
                    "levels": t.levels,
                    "imputation_means": t.means,
                }
                for t in self.terms.values()
            ],
        }
