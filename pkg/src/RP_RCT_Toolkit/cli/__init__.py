"""
Command line: design, simulate, estimate and power subcommands.

Exit codes: 0 success, 1 estimation failure on the given data or an
unexpected error, 2 usage, schema, configuration or design errors.
"""
import logging
from typing import Optional, Sequence

from ..errors import (
    ConfigError,
    DegenerateDataError,
    DesignError,
    IdentificationError,
    ModelFitError,
    SchemaError,
)
from ..utils.log_setup import configure_logging
from ..utils.settings import get_settings
from .commands import COMMANDS, cmd_design, cmd_estimate, cmd_power, cmd_simulate
from .parser import build_parser, parse_args

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parse_args(parser, argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    configure_logging(args.log_level or get_settings().log_level)

    try:
        return COMMANDS[args.command](args)
    except (IdentificationError, DegenerateDataError, ModelFitError) as e:
        logger.error("%s", e)
        return EXIT_FAILURE
    except (SchemaError, ConfigError, DesignError, FileNotFoundError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except Exception:
        logger.exception("%s failed", args.command)
        return EXIT_FAILURE


__all__ = [
    'main',
    'build_parser',
    'parse_args',
    'cmd_design',
    'cmd_simulate',
    'cmd_estimate',
    'cmd_power',
    'EXIT_OK',
    'EXIT_FAILURE',
    'EXIT_USAGE',
]
