"""
Logging configuration shared by the CLI and main.py.
"""
import logging
import sys

PACKAGE_PREFIX = "RP_RCT_Toolkit."


class ShortNameFormatter(logging.Formatter):
    def format(self, record):
        # Shorten the logger name by removing the package prefix
        if record.name.startswith(PACKAGE_PREFIX):
            record.name = record.name[len(PACKAGE_PREFIX):]
        return super().format(record)


def configure_logging(level: str = "WARNING") -> None:
    """Install a single stderr handler on the root logger."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_rp_rct", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        ShortNameFormatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    )
    handler._rp_rct = True
    root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.WARNING))

    # joblib chatter is not useful at INFO
    logging.getLogger("joblib").setLevel(logging.WARNING)
