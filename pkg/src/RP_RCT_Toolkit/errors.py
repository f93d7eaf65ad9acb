"""
Exception hierarchy for RP_RCT_Toolkit.

The CLI maps these onto exit codes: estimation failures exit with 1,
validation and usage problems exit with 2.
"""
from typing import Optional


class RpRctError(Exception):
    """Base class for every error raised by the toolkit."""


class DesignError(RpRctError, ValueError):
    """Invalid FRR or design parameters, or an infeasible design request."""


class IdentificationError(RpRctError):
    """The proportion of cheaters (and hence tau_H) is not identified."""


class DegenerateDataError(RpRctError):
    """Data cannot support the requested estimate (empty arms, zero divisors)."""


class ModelFitError(RpRctError):
    """Working-model fitting or prediction failed."""


class SchemaError(RpRctError, ValueError):
    """A dataset does not conform to its declared schema."""

    def __init__(
        self, message: str, row: Optional[int] = None, column: Optional[str] = None
    ):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class ConfigError(RpRctError, ValueError):
    """A configuration document is invalid; `pointer` is a JSON pointer."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
