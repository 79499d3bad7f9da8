"""
Counter-based random substreams.

Every random draw of an experiment comes from a Philox generator keyed by the root
seed and a tuple of integers, so any block of work can be regenerated on its own,
on any thread.
"""

import numpy as np

from ..common.errors import InvalidArgumentError

# Purpose keys
STREAM_LAYOUT = 0
STREAM_CHANNELS = 1


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Generator for the substream (seed, *keys)."""
    if seed < 0 or any(k < 0 for k in keys):
        raise InvalidArgumentError(f"seed and keys must be non-negative, got {seed}, {keys}")
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(sequence))
