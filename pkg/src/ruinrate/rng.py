"""Counter-based random streams keyed by (seed, purpose, block index).

Every stream is a Philox generator whose key is derived from a
``SeedSequence`` with an explicit spawn key, so the stream used for a given
block of paths does not depend on how many workers run or in which order.
"""

import numpy as np

# Purpose tags keep the surplus, dual and stationary simulations on disjoint
# streams even when they share a master seed.
SURPLUS = 1
DUAL = 2
STATIONARY = 3
COUPLED = 4
SAMPLER = 5


def stream(seed, *key):
    """Return an independent ``numpy.random.Generator`` for ``(seed, *key)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
