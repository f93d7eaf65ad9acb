"""
CSV reading and writing of observed datasets and truth sidecars.

Observed files and sidecars are always separate files: `<prefix>.csv` holds
what an investigator sees, `<prefix>.truth.csv` the simulator's latent truth.
Row numbers in schema errors are file line numbers (the header is line 1).
"""
import logging
import os
from typing import Dict, Mapping, NamedTuple, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..errors import SchemaError
from ..estimate.dataset import MultiOutcomeDataset, PrivateDataset
from ..simulate.behaviors import behavior_code, behavior_label
from ..simulate.protocol import TruthSidecar
from .schema import DatasetSchema, is_sidecar_column

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
SIDECAR_SUFFIX = ".truth.csv"
FIRST_DATA_LINE = 2


def dataset_path(prefix: str) -> str:
    return f"{prefix}.csv"


def sidecar_path(prefix: str) -> str:
    return f"{prefix}{SIDECAR_SUFFIX}"


class _Columns(NamedTuple):
    s: np.ndarray
    a: np.ndarray
    outcomes: Dict[str, np.ndarray]
    x: Optional[pd.DataFrame]
    ids: Optional[np.ndarray]


def _read_text(path: str) -> pd.DataFrame:
    if not os.path.exists(path):
        raise FileNotFoundError(f"No such file: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, na_filter=False)
    except pd.errors.EmptyDataError:
        raise SchemaError(f"{path} is empty: expected a header line")
    return frame.apply(lambda column: column.str.strip())


def _integer_column(frame: pd.DataFrame, column: str, allowed: Sequence[int]) -> np.ndarray:
    text = frame[column]
    values = pd.to_numeric(text, errors="coerce")
    bad = values.isna() | ~values.isin(allowed)
    if bad.any():
        i = int(np.flatnonzero(bad.to_numpy())[0])
        raise SchemaError(
            f"Value {text.iloc[i]!r} not in {sorted(allowed)}",
            row=i + FIRST_DATA_LINE,
            column=column,
        )
    return values.to_numpy().astype(np.int8)


def _parse_float(cell: str) -> float:
    try:
        return float(cell)
    except ValueError:
        return np.nan


def _numbers(text: pd.Series, missing: pd.Series) -> pd.Series:
    return pd.Series(
        [np.nan if skip else _parse_float(cell) for cell, skip in zip(text, missing)],
        index=text.index,
        dtype=float,
    )


def _covariate(text: pd.Series, name: str, kind: Optional[str], token: str) -> pd.Series:
    missing = text == token
    values = _numbers(text, missing)
    unparsed = values.isna() & ~missing
    if kind is None:
        kind = "categorical" if unparsed.any() else "numeric"
    if kind == "categorical":
        return text.where(~missing, None).astype(object)
    if unparsed.any():
        i = int(np.flatnonzero(unparsed.to_numpy())[0])
        raise SchemaError(
            f"Value {text.iloc[i]!r} is not a number", row=i + FIRST_DATA_LINE, column=name
        )
    if kind == "binary":
        bad = ~missing & ~values.isin((0, 1))
        if bad.any():
            i = int(np.flatnonzero(bad.to_numpy())[0])
            raise SchemaError(
                f"Binary covariate value {text.iloc[i]!r} not in [0, 1]",
                row=i + FIRST_DATA_LINE,
                column=name,
            )
    return values.astype(float)


def _ids(text: pd.Series) -> np.ndarray:
    values = pd.to_numeric(text, errors="coerce")
    if not values.isna().any() and (values == values.round()).all():
        return values.to_numpy().astype(np.int64)
    return text.to_numpy(dtype=object)


def _read_columns(path: str, schema: DatasetSchema) -> _Columns:
    schema.validate()
    frame = _read_text(path)
    header = [str(c) for c in frame.columns]
    for column in schema.required:
        if column not in header:
            raise SchemaError("Required column is missing", column=column)
    for name in schema.covariates:
        if name not in header:
            raise SchemaError("Declared covariate is missing", column=name)

    known = set(schema.required) | set(schema.covariates) | {schema.id_column}
    covariates = {name: kind for name, kind in schema.covariates.items()}
    for column in header:
        if column in known:
            continue
        if is_sidecar_column(column):
            raise SchemaError(
                "Truth-sidecar column found in observed data; latent columns are "
                f"only read from {SIDECAR_SUFFIX} files",
                column=column,
            )
        if not schema.infer_covariates:
            raise SchemaError("Undeclared column", column=column)
        covariates[column] = None

    s = _integer_column(frame, "s", (1, 2))
    a = _integer_column(frame, "a", (0, 1))
    outcomes = {name: _integer_column(frame, name, (0, 1)) for name in schema.outcomes}
    x = None
    ordered = [c for c in header if c in covariates]
    if ordered:
        x = pd.DataFrame(
            {
                name: _covariate(frame[name], name, covariates[name], schema.missing_token)
                for name in ordered
            }
        )
        for name in ordered:
            missing = int(x[name].isna().sum())
            if missing:
                logger.info("%s: column %s has %d missing values", path, name, missing)
    ids = _ids(frame[schema.id_column]) if schema.id_column in header else None
    logger.info("Read %d rows and %d covariates from %s", len(frame), len(ordered), path)
    return _Columns(s, a, outcomes, x, ids)


def read_dataset(path: str, schema: DatasetSchema = DatasetSchema()) -> PrivateDataset:
    """
    Read a single-outcome observed dataset.

    Raises:
        FileNotFoundError: path does not exist
        SchemaError: Empty file or a value/column violating the schema
    """
    if len(schema.outcomes) != 1:
        raise SchemaError(
            f"read_dataset reads one outcome, schema declares {list(schema.outcomes)}; "
            "use read_outcomes"
        )
    cols = _read_columns(path, schema)
    outcome = schema.outcomes[0]
    return PrivateDataset(cols.outcomes[outcome], cols.a, cols.s, cols.x, cols.ids, outcome)


def read_outcomes(path: str, schema: DatasetSchema = DatasetSchema()) -> MultiOutcomeDataset:
    """Read a dataset with one or more privatized outcome columns."""
    cols = _read_columns(path, schema)
    return MultiOutcomeDataset(cols.outcomes, cols.a, cols.s, cols.x, cols.ids)


def write_dataset(
    data: Union[PrivateDataset, MultiOutcomeDataset], path: str, missing_token: str = ""
) -> str:
    """Write observed data with columns id, s, a, outcomes, covariates."""
    frame = data.to_frame()
    frame.to_csv(
        path, index=False, float_format=FLOAT_FORMAT, na_rep=missing_token, lineterminator="\n"
    )
    logger.info("Wrote %d rows to %s", len(frame), path)
    return path


def _sidecar_columns(outcome: Optional[str]) -> Dict[str, str]:
    if outcome is None:
        return {"y1": "y1", "y0": "y0", "p": "p"}
    return {key: f"{outcome}:{key}" for key in ("y1", "y0", "p")}


def write_sidecar(
    sidecars: Union[TruthSidecar, Mapping[str, TruthSidecar]],
    path: str,
    ids: Optional[np.ndarray] = None,
) -> str:
    """
    Write the latent truth of a simulated run.

    A single sidecar uses columns y1, y0, p; several outcomes get
    `<outcome>:y1`, `<outcome>:y0`, `<outcome>:p`. Split, treatment, cheater
    status and behavior are shared by all outcomes.
    """
    if isinstance(sidecars, TruthSidecar):
        named = {None: sidecars}
    else:
        named = dict(sidecars) if len(sidecars) > 1 else {None: next(iter(sidecars.values()))}
    first = next(iter(named.values()))
    columns = {}
    if ids is not None:
        columns["id"] = ids
    columns["s"] = first.s
    columns["a"] = first.a
    columns["c"] = first.c
    columns["behavior"] = [behavior_label(int(code)) for code in first.behavior]
    for outcome, sidecar in named.items():
        names = _sidecar_columns(outcome)
        columns[names["y1"]] = sidecar.y1
        columns[names["y0"]] = sidecar.y0
        columns[names["p"]] = sidecar.prompt
    frame = pd.DataFrame(columns)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.info("Wrote truth sidecar for %d rows to %s", len(frame), path)
    return path


def read_sidecar(path: str, outcome: str = "y_tilde") -> Dict[str, TruthSidecar]:
    """
    Read a truth sidecar; a single-outcome file is keyed by `outcome`.
    """
    frame = _read_text(path)
    header = list(frame.columns)
    shared = {
        "s": _integer_column(frame, "s", (1, 2)),
        "a": _integer_column(frame, "a", (0, 1)),
        "c": _integer_column(frame, "c", (0, 1)),
        "behavior": np.asarray(
            [behavior_code(label) for label in frame["behavior"]], dtype=np.int8
        ),
    }
    if "y1" in header:
        outcomes = {outcome: _sidecar_columns(None)}
    else:
        names = [c[: -len(":y1")] for c in header if c.endswith(":y1")]
        outcomes = {name: _sidecar_columns(name) for name in names}
    if not outcomes:
        raise SchemaError(f"{path} has no potential-outcome columns")
    out = {}
    for name, cols in outcomes.items():
        out[name] = TruthSidecar(
            y1=_integer_column(frame, cols["y1"], (0, 1)),
            y0=_integer_column(frame, cols["y0"], (0, 1)),
            prompt=_integer_column(frame, cols["p"], (0, 1, 2)),
            **shared,
        )
    return out
