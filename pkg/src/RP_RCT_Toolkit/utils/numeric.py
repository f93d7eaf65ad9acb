import math


def format_float(value: float) -> object:
    """JSON-friendly float: infinities become the string "inf"."""
    if value is None:
        return None
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return None
    return float(value)


def parse_float(value: object) -> float:
    """Inverse of format_float."""
    if value is None:
        return math.nan
    if isinstance(value, str):
        return float(value.strip().lower().replace("infinity", "inf"))
    return float(value)
