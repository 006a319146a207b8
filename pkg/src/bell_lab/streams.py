"""Counter-based random substreams for reproducible, partition-invariant sampling.

Streams are built on the Philox counter-based bit generator.  A stream is
identified by (seed, domain, index); within a stream, every trial owns one
128-bit counter block, which yields four float64 draws.  Skipping to trial t
is therefore an exact ``advance(t)``, so a block of trials produces the same
numbers no matter how work is partitioned across workers.
"""

from __future__ import annotations

import numpy as np

#: Number of float64 draws available to one trial (one Philox counter block).
DRAWS_PER_BLOCK = 4

# Domain tags keep unrelated consumers of the same user seed on disjoint streams.
DOMAIN_SETTING = 0  # per-setting trial streams (montecarlo)
DOMAIN_DAY = 1  # per-day trial streams (signaling)
DOMAIN_BITS = 2  # random payload bits (signaling experiments)
DOMAIN_RESTART = 3  # random restart draws (fitting)

_MASK64 = (1 << 64) - 1


def substream(seed: int, domain: int, index: int) -> np.random.Generator:
    """Generator for the (seed, domain, index) stream, positioned at trial 0."""
    key = [int(seed) & _MASK64, ((int(domain) & 0xFFFFFFFF) << 32) | (int(index) & 0xFFFFFFFF)]
    return np.random.Generator(np.random.Philox(key=key))


def trial_uniforms(gen: np.random.Generator, start: int, n: int) -> np.ndarray:
    """Uniforms for trials [start, start+n) of a fresh stream, shape (n, 4).

    Row t holds the four draws owned by trial start+t.  ``gen`` must be a
    freshly constructed substream (trial position 0).
    """
    if start:
        gen.bit_generator.advance(start)
    return gen.random((n, DRAWS_PER_BLOCK))


def partition(n: int, workers: int) -> list[tuple[int, int]]:
    """Split [0, n) into at most ``workers`` contiguous blocks."""
    if n <= 0:
        return []
    workers = max(1, min(int(workers), n))
    step = -(-n // workers)
    return [(lo, min(lo + step, n)) for lo in range(0, n, step)]
