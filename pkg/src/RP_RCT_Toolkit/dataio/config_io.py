"""
JSON documents: simulation configs (population + design) and design specs.

Every validation failure is reported as a ConfigError whose pointer names
the offending field, e.g. "/population/covariates/1/params".
"""
import json
import logging
import os
from typing import Any, Callable, Mapping, NamedTuple, Optional

import numpy as np

from ..design import DesignSpec
from ..errors import ConfigError, DesignError
from ..mechanism import FrrParams
from ..simulate.behaviors import CheaterBehavior
from ..simulate.population import (
    CovariateSpec,
    OutcomeModel,
    PopulationConfig,
    case_study_population,
)
from ..utils.numeric import format_float
from ..utils.settings import get_settings

logger = logging.getLogger(__name__)

PRESETS = ("case-study",)


class SimulationConfig(NamedTuple):
    population: PopulationConfig
    design: DesignSpec

    def to_dict(self) -> dict:
        return {"population": self.population.to_dict(), "design": self.design.to_dict()}


def load_json(path: str) -> Any:
    if not os.path.exists(path):
        raise FileNotFoundError(f"No such file: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON at line {e.lineno}: {e.msg}") from e


def _field(data: Mapping, key: str, pointer: str, convert: Callable = float, default=...):
    if not isinstance(data, Mapping):
        raise ConfigError("Expected an object", pointer)
    if key not in data:
        if default is ...:
            raise ConfigError("Required field is missing", f"{pointer}/{key}")
        return default
    try:
        return convert(data[key])
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value {data[key]!r}: {e}", f"{pointer}/{key}") from e


def _items(data: Mapping, key: str, pointer: str) -> list:
    value = data.get(key, [])
    if not isinstance(value, list):
        raise ConfigError("Expected a list", f"{pointer}/{key}")
    return value


def _covariate(data: Mapping, pointer: str) -> CovariateSpec:
    spec = CovariateSpec(
        name=_field(data, "name", pointer, str),
        kind=_field(data, "kind", pointer, str),
        params=_field(data, "params", pointer, lambda v: tuple(float(p) for p in v)),
        missing_rate=_field(data, "missing_rate", pointer, float, 0.0),
    )
    try:
        spec.validate()
    except DesignError as e:
        raise ConfigError(str(e), pointer) from e
    return spec


def _coefficient(value):
    if isinstance(value, list):
        return tuple(float(v) for v in value)
    return float(value)


def _outcome(data: Mapping, pointer: str) -> OutcomeModel:
    coefficients = _field(data, "coefficients", pointer, dict, {})
    for name, value in coefficients.items():
        try:
            coefficients[name] = _coefficient(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid coefficient: {e}", f"{pointer}/coefficients/{name}")
    return OutcomeModel(
        name=_field(data, "name", pointer, str, "y_tilde"),
        intercept=_field(data, "intercept", pointer, float, 0.0),
        coefficients=coefficients,
        treatment_shift=_field(data, "treatment_shift", pointer, float, 0.0),
    )


def _behavior_mix(data: Mapping, pointer: str) -> dict:
    raw = data.get("behavior_mix", {"AlwaysZero": 1.0})
    if not isinstance(raw, Mapping):
        raise ConfigError("Expected an object", f"{pointer}/behavior_mix")
    mix = {}
    for label, weight in raw.items():
        try:
            mix[CheaterBehavior.from_label(label)] = float(weight)
        except ValueError as e:
            raise ConfigError(str(e), f"{pointer}/behavior_mix/{label}") from e
    return mix


def population_from_dict(data: Mapping, pointer: str = "/population") -> PopulationConfig:
    """Build and validate a PopulationConfig from its JSON form."""
    if not isinstance(data, Mapping):
        raise ConfigError("Expected an object", pointer)
    if data.get("preset") is not None:
        preset = data["preset"]
        if preset not in PRESETS:
            raise ConfigError(f"Unknown preset {preset!r}", f"{pointer}/preset")
        return case_study_population(
            n=_field(data, "n", pointer, int, 72),
            lam=_field(data, "lambda", pointer, float, 0.1),
        )
    if "delta" in data:
        raise ConfigError(
            "The treatment probability is a design field; set /design/delta", f"{pointer}/delta"
        )
    covariates = tuple(
        _covariate(item, f"{pointer}/covariates/{i}")
        for i, item in enumerate(_items(data, "covariates", pointer))
    )
    outcomes = tuple(
        _outcome(item, f"{pointer}/outcomes/{i}")
        for i, item in enumerate(_items(data, "outcomes", pointer))
    ) or (OutcomeModel(),)
    config = PopulationConfig(
        n=_field(data, "n", pointer, int),
        lam=_field(data, "lambda", pointer, float, 0.0),
        covariates=covariates,
        outcomes=outcomes,
        behavior_mix=_behavior_mix(data, pointer),
        cheater_dependence=_field(data, "cheater_dependence", pointer, float, 0.0),
    )
    try:
        return config.validate()
    except DesignError as e:
        raise ConfigError(str(e), pointer) from e


def design_from_dict(data: Mapping, pointer: str = "/design") -> DesignSpec:
    """Build a DesignSpec from {delta, frr1, frr2}, {delta, epsilon, gap} or a preset."""
    if not isinstance(data, Mapping):
        raise ConfigError("Expected an object", pointer)
    if data.get("preset") is not None:
        if data["preset"] not in PRESETS:
            raise ConfigError(f"Unknown preset {data['preset']!r}", f"{pointer}/preset")
        return DesignSpec.case_study()
    delta = _field(data, "delta", pointer, float, 0.5)
    try:
        if "frr1" in data or "frr2" in data:
            frr = [
                _field(data, key, pointer, lambda v: FrrParams(v["r0"], v["r1"]))
                for key in ("frr1", "frr2")
            ]
            return DesignSpec(delta, frr[0], frr[1])
        if "epsilon" in data:
            epsilon = _field(data, "epsilon", pointer, float)
            gap = _field(data, "gap", pointer, float, get_settings().gap)
            return DesignSpec.from_epsilon(epsilon, gap, delta)
    except DesignError as e:
        raise ConfigError(str(e), pointer) from e
    raise ConfigError("Design needs frr1 and frr2, epsilon, or a preset", pointer)


def load_simulation_config(path: str) -> SimulationConfig:
    """
    Read a simulation config: {"population": {...}, "design": {...}}.

    Raises:
        FileNotFoundError: path does not exist
        ConfigError: Invalid JSON or an invalid field (with its JSON pointer)
    """
    data = load_json(path)
    if not isinstance(data, Mapping):
        raise ConfigError("Expected an object at the top level")
    for key in ("population", "design"):
        if key not in data:
            raise ConfigError("Required field is missing", f"/{key}")
    population = population_from_dict(data["population"])
    design = design_from_dict(data["design"])
    logger.info("Loaded simulation config %s: n=%d, %s", path, population.n, design)
    return SimulationConfig(population, design)


def load_design(path: str) -> DesignSpec:
    """Read a design document (the `design` object of a config, or a bare design)."""
    data = load_json(path)
    if isinstance(data, Mapping) and "design" in data:
        return design_from_dict(data["design"])
    return design_from_dict(data, "")


def jsonable(value: Any) -> Any:
    """Plain JSON types: numpy scalars unwrapped, NaN as null, infinities as "inf"."""
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        return format_float(value)
    return value


def save_json(document: Any, path: Optional[str] = None) -> str:
    """Serialize a document deterministically; write it when a path is given."""
    text = json.dumps(jsonable(document), indent=2, sort_keys=False, allow_nan=False) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    return text


def overrides(config: SimulationConfig, **flags) -> SimulationConfig:
    """Apply CLI flags over config values; None flags leave the config untouched."""
    population, design = config
    if flags.get("n") is not None:
        population = population._replace(n=int(flags["n"]))
    if flags.get("lam") is not None:
        population = population._replace(lam=float(flags["lam"]))
    if flags.get("delta") is not None:
        design = design.with_delta(float(flags["delta"]))
    try:
        population.validate()
    except DesignError as e:
        raise ConfigError(str(e), "/population") from e
    return SimulationConfig(population, design)
