"""
Declared layout of an observed RP-RCT CSV file.
"""
from typing import List, Mapping, NamedTuple, Optional, Tuple

from ..errors import SchemaError

COVARIATE_KINDS = ("binary", "categorical", "numeric")

# Latent columns that only ever appear in a .truth.csv sidecar
SIDECAR_COLUMNS = ("y1", "y0", "c", "behavior", "p")
SIDECAR_SUFFIXES = (":y1", ":y0", ":p")


def is_sidecar_column(name: str) -> bool:
    return name in SIDECAR_COLUMNS or name.endswith(SIDECAR_SUFFIXES)


class DatasetSchema(NamedTuple):
    """
    Columns of an observed dataset.

    Attributes:
        outcomes: Privatized outcome columns
        id_column: Optional identifier column, used when present
        covariates: Declared covariate kinds (binary, categorical, numeric)
        missing_token: Cell text meaning "missing" in covariate columns
        infer_covariates: Accept undeclared columns as covariates, numeric
            when every present cell parses as a number, categorical otherwise
    """

    outcomes: Tuple[str, ...] = ("y_tilde",)
    id_column: Optional[str] = "id"
    covariates: Mapping[str, str] = {}
    missing_token: str = ""
    infer_covariates: bool = False

    def validate(self) -> "DatasetSchema":
        if not self.outcomes:
            raise SchemaError("Schema declares no outcome column")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise SchemaError(f"Duplicate outcome columns: {list(self.outcomes)}")
        for name, kind in self.covariates.items():
            if kind not in COVARIATE_KINDS:
                raise SchemaError(f"Unknown covariate kind {kind!r}", column=name)
        reserved = {"s", "a", self.id_column, *self.outcomes}
        for name in list(self.outcomes) + list(self.covariates):
            if is_sidecar_column(name):
                raise SchemaError("Truth-sidecar column cannot be observed data", column=name)
        clash = reserved.intersection(self.covariates)
        if clash:
            raise SchemaError(
                "Covariate collides with a required column", column=sorted(clash)[0]
            )
        return self

    @property
    def required(self) -> List[str]:
        return ["s", "a", *self.outcomes]

    def to_dict(self) -> dict:
        return {
            "outcomes": list(self.outcomes),
            "id_column": self.id_column,
            "covariates": dict(self.covariates),
            "missing_token": self.missing_token,
            "infer_covariates": self.infer_covariates,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "DatasetSchema":
        return cls(
            outcomes=tuple(data.get("outcomes", ("y_tilde",))),
            id_column=data.get("id_column", "id"),
            covariates=dict(data.get("covariates", {})),
            missing_token=data.get("missing_token", ""),
            infer_covariates=bool(data.get("infer_covariates", False)),
        ).validate()
