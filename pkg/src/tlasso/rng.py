"""Counter-based splittable random streams.

Every stochastic routine in the package derives its generator through
``substream``, which maps ``(seed, *path)`` to an independent Philox stream.
Philox is counter-based, so substreams indexed by (trial, step, ...) are
statistically independent and reproducible regardless of evaluation order;
trials can run concurrently without sharing generator state.
"""

import numpy as np


def substream(seed, *path):
    """Return a ``numpy.random.Generator`` for the given seed and stream path.

    The same (seed, path) always yields the same stream; distinct paths give
    independent streams.  ``path`` elements must be non-negative integers.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in path))
    return np.random.Generator(np.random.Philox(ss))
