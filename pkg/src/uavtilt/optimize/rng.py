"""Counter-based random streams.

Every random draw is tied to ``(master seed, purpose, step, index)`` so the
sequence a candidate sees does not depend on evaluation order or threading.
"""
import numpy as np

INIT = 0
BREED = 1
MOVE = 2
RANDOM_BASELINE = 3


def stream(seed: int, purpose: int, step: int = 0, index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(purpose, step, index))
    return np.random.default_rng(ss)
