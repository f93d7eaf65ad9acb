from .numeric import format_float, parse_float
from .rng import StreamManager, substream
from .settings import Settings, get_settings, worker_count

__all__ = [
    'format_float',
    'parse_float',
    'StreamManager',
    'substream',
    'Settings',
    'get_settings',
    'worker_count',
]
