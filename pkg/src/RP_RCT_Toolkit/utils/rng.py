"""
Named random streams.

Every replicate gets its own family of generators derived from
(seed, replicate, stream), so results do not depend on how replicates are
scheduled across workers.
"""
from typing import Dict

import numpy as np

STREAMS = {
    "population": 1,
    "protocol": 2,
    "estimation": 3,
    "bootstrap": 4,
}


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for an arbitrary spawn key under `seed`."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(key)))


class StreamManager:
    """
    Hands out the named random streams of one replicate.

    Args:
        seed: Base seed of the experiment
        replicate: Replicate index (default: 0)
    """

    def __init__(self, seed: int, replicate: int = 0):
        self.seed = int(seed)
        self.replicate = int(replicate)
        self._streams: Dict[str, np.random.Generator] = {}

    def get_stream(self, name: str) -> np.random.Generator:
        """
        Get the random stream for a named process.

        Raises:
            ValueError: If the stream name is unknown
        """
        if name not in STREAMS:
            raise ValueError(f"Unknown stream: {name}")
        if name not in self._streams:
            self._streams[name] = substream(self.seed, self.replicate, STREAMS[name])
        return self._streams[name]
