"""
Observed data of an RP-RCT: privatized responses, treatment and subsample
labels, and optional pre-treatment covariates.

Nothing latent (potential outcomes, cheater status, prompts) can be stored
here; the simulator keeps those in a separate truth sidecar.
"""
import logging
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from ..errors import SchemaError

logger = logging.getLogger(__name__)

DEFAULT_OUTCOME = "y_tilde"
RESERVED_COLUMNS = ("id", "s", "a")


def _frozen(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values


def _coded(values, column: str, allowed: Sequence[int]) -> np.ndarray:
    array = np.asarray(values)
    if array.ndim != 1:
        raise SchemaError("Expected a one-dimensional column", column=column)
    if array.dtype.kind == "f":
        bad = ~np.isfinite(array) | (array != np.round(array))
        if bad.any():
            raise SchemaError(
                f"Value {array[bad][0]!r} is not an integer code",
                row=int(np.flatnonzero(bad)[0]),
                column=column,
            )
    elif array.dtype.kind not in "iub":
        raise SchemaError(f"Non-numeric column of type {array.dtype}", column=column)
    array = array.astype(np.int8)
    bad = ~np.isin(array, allowed)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise SchemaError(
            f"Value {array[row]} not in {sorted(allowed)}", row=row, column=column
        )
    return _frozen(array)


def _covariate_frame(x, n: int) -> Optional[pd.DataFrame]:
    if x is None:
        return None
    frame = pd.DataFrame(x).reset_index(drop=True).copy()
    if len(frame) != n:
        raise SchemaError(f"Covariate table has {len(frame)} rows, expected {n}")
    clash = [c for c in frame.columns if c in RESERVED_COLUMNS]
    if clash:
        raise SchemaError("Covariate name collides with a reserved column", column=clash[0])
    if frame.shape[1] == 0:
        return None
    return frame


class _ObservedBase:
    __slots__ = ("_a", "_s", "_x", "_ids")

    def _init_common(self, a, s, x, ids) -> int:
        self._a = _coded(a, "a", (0, 1))
        self._s = _coded(s, "s", (1, 2))
        n = len(self._a)
        if len(self._s) != n:
            raise SchemaError(f"Column lengths differ: a has {n} rows, s has {len(self._s)}")
        self._x = _covariate_frame(x, n)
        if ids is not None:
            ids = np.asarray(ids)
            if len(ids) != n:
                raise SchemaError(f"id column has {len(ids)} rows, expected {n}", column="id")
            ids = _frozen(ids.copy())
        self._ids = ids
        return n

    @property
    def a(self) -> np.ndarray:
        return self._a

    @property
    def s(self) -> np.ndarray:
        return self._s

    @property
    def x(self) -> Optional[pd.DataFrame]:
        """Copy of the covariate table (None when there are no covariates)."""
        return None if self._x is None else self._x.copy()

    @property
    def ids(self) -> Optional[np.ndarray]:
        return self._ids

    @property
    def n(self) -> int:
        return len(self._a)

    def __len__(self) -> int:
        return self.n

    @property
    def covariate_names(self) -> List[str]:
        return [] if self._x is None else [str(c) for c in self._x.columns]

    @property
    def has_covariates(self) -> bool:
        return self._x is not None


class PrivateDataset(_ObservedBase):
    """
    Observed tuple (y_tilde, a, s, x) for one outcome.

    Args:
        y_tilde: Privatized binary responses
        a: Treatment indicators
        s: Subsample labels in {1, 2}
        x: Optional covariate table, missing entries as NaN
        ids: Optional unit identifiers
        outcome: Name of the outcome column
    """

    __slots__ = ("_y", "outcome")

    def __init__(self, y_tilde, a, s, x=None, ids=None, outcome: str = DEFAULT_OUTCOME):
        n = self._init_common(a, s, x, ids)
        self._y = _coded(y_tilde, outcome, (0, 1))
        if len(self._y) != n:
            raise SchemaError(
                f"Column lengths differ: {outcome} has {len(self._y)} rows, a has {n}"
            )
        self.outcome = outcome

    @property
    def y_tilde(self) -> np.ndarray:
        return self._y

    def take(self, rows: np.ndarray) -> "PrivateDataset":
        """New dataset made of the given row indices (repeats allowed)."""
        rows = np.asarray(rows)
        x = None if self._x is None else self._x.iloc[rows].reset_index(drop=True)
        ids = None if self._ids is None else self._ids[rows]
        return PrivateDataset(self._y[rows], self._a[rows], self._s[rows], x, ids, self.outcome)

    def relabeled(self) -> "PrivateDataset":
        """Dataset with subsample labels 1 and 2 exchanged."""
        return PrivateDataset(self._y, self._a, 3 - self._s, self._x, self._ids, self.outcome)

    def to_frame(self) -> pd.DataFrame:
        columns = {}
        if self._ids is not None:
            columns["id"] = self._ids
        columns["s"] = self._s
        columns["a"] = self._a
        columns[self.outcome] = self._y
        frame = pd.DataFrame(columns)
        if self._x is not None:
            frame = pd.concat([frame, self._x], axis=1)
        return frame

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrivateDataset):
            return NotImplemented
        return self.outcome == other.outcome and self.to_frame().equals(other.to_frame())

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"PrivateDataset(outcome={self.outcome!r}, n={self.n}, "
            f"covariates={self.covariate_names})"
        )


class MultiOutcomeDataset(_ObservedBase):
    """
    Several privatized outcomes observed on the same units (shared s, a, x).

    Args:
        outcomes: Mapping from outcome column name to privatized responses
    """

    __slots__ = ("_outcomes",)

    def __init__(self, outcomes: Mapping[str, Iterable[int]], a, s, x=None, ids=None):
        n = self._init_common(a, s, x, ids)
        if not outcomes:
            raise SchemaError("At least one outcome column is required")
        self._outcomes = {}
        for name, values in outcomes.items():
            if name in RESERVED_COLUMNS or name in self.covariate_names:
                raise SchemaError("Outcome name collides with another column", column=name)
            values = _coded(values, name, (0, 1))
            if len(values) != n:
                raise SchemaError(f"Outcome has {len(values)} rows, expected {n}", column=name)
            self._outcomes[name] = values

    @property
    def outcome_names(self) -> List[str]:
        return list(self._outcomes)

    def dataset(self, outcome: str) -> PrivateDataset:
        if outcome not in self._outcomes:
            raise KeyError(f"Unknown outcome {outcome!r}; available: {self.outcome_names}")
        values = self._outcomes[outcome]
        return PrivateDataset(values, self._a, self._s, self._x, self._ids, outcome)

    def datasets(self) -> Dict[str, PrivateDataset]:
        return {name: self.dataset(name) for name in self._outcomes}

    def to_frame(self) -> pd.DataFrame:
        columns = {}
        if self._ids is not None:
            columns["id"] = self._ids
        columns["s"] = self._s
        columns["a"] = self._a
        columns.update(self._outcomes)
        frame = pd.DataFrame(columns)
        if self._x is not None:
            frame = pd.concat([frame, self._x], axis=1)
        return frame

    def __repr__(self) -> str:
        return f"MultiOutcomeDataset(outcomes={self.outcome_names}, n={self.n})"
