"""
Package-wide defaults read from config/settings.ini.
"""
import configparser
import functools
import logging
import os
from typing import NamedTuple, Optional

logger = logging.getLogger(__name__)

SETTINGS_PATH = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "config", "settings.ini"
)
WORKERS_ENV = "RP_RCT_WORKERS"


class Settings(NamedTuple):
    log_level: str = "WARNING"
    alpha: float = 0.05
    bootstrap: int = 5000
    se_floor: float = 1e-8
    denominator_tolerance: float = 1e-3
    lambda_tolerance: float = 1e-6
    reps: int = 1000
    replicate_bootstrap: int = 0
    gap: float = 0.06
    n_jobs: int = 1


def _read(path: str) -> Settings:
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding="utf-8"):
        logger.warning("Settings file %s not found, using built-in defaults", path)
        return Settings()
    defaults = Settings()
    return Settings(
        log_level=parser.get("Logging", "level", fallback=defaults.log_level),
        alpha=parser.getfloat("Estimation", "alpha", fallback=defaults.alpha),
        bootstrap=parser.getint("Estimation", "bootstrap", fallback=defaults.bootstrap),
        se_floor=parser.getfloat("Estimation", "se_floor", fallback=defaults.se_floor),
        denominator_tolerance=parser.getfloat(
            "Estimation", "denominator_tolerance", fallback=defaults.denominator_tolerance
        ),
        lambda_tolerance=parser.getfloat(
            "Estimation", "lambda_tolerance", fallback=defaults.lambda_tolerance
        ),
        reps=parser.getint("Simulation", "reps", fallback=defaults.reps),
        replicate_bootstrap=parser.getint(
            "Simulation", "bootstrap", fallback=defaults.replicate_bootstrap
        ),
        gap=parser.getfloat("Design", "gap", fallback=defaults.gap),
        n_jobs=parser.getint("Workers", "n_jobs", fallback=defaults.n_jobs),
    )


@functools.lru_cache(maxsize=None)
def get_settings(path: Optional[str] = None) -> Settings:
    """Load settings once per path."""
    return _read(path or SETTINGS_PATH)


def worker_count(requested: Optional[int] = None) -> int:
    """Number of parallel workers: explicit value, then environment, then settings."""
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning("Ignoring non-integer %s=%s", WORKERS_ENV, env)
    return max(1, get_settings().n_jobs)
