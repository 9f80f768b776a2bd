"""
Seeded random streams.

Every stochastic quantity is drawn from a stream addressed by the master seed
and a tuple of integer counters (experiment point, chunk, field family). The
same address always yields the same numbers, so results do not depend on the
order or process in which independent pieces are evaluated.
"""

from typing import Tuple

import numpy as np

# Monte Carlo work is cut into chunks of this many trials; the chunk index is
# part of the stream address.
CHUNK_SIZE = 4096


def stream(seed: int, *counters: int) -> np.random.Generator:
    """Counter-based generator (Philox) for ``seed`` at address ``counters``."""
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(int(c) for c in counters))
    return np.random.Generator(np.random.Philox(sequence))


def chunk_bounds(total: int, chunk_size: int = CHUNK_SIZE) -> Tuple[Tuple[int, int], ...]:
    """Split ``total`` trials into fixed ``(start, stop)`` chunks."""
    return tuple(
        (start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)
    )
