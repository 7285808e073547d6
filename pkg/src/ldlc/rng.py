"""Counter-based randomness: every transcript gets its own reproducible stream."""
import numpy as np

MASK64 = (1 << 64) - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return seed


def stream(seed: int, index: int, lane: int = 0) -> np.random.Generator:
    """Generator for draw ``index`` of ``lane`` under ``seed``.

    Philox is keyed by the seed; the index and lane occupy the high counter
    words, so streams never overlap and any transcript can be replayed alone.
    """
    counter = np.array([0, 0, int(index) & MASK64, int(lane) & MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=check_seed(seed), counter=counter))
