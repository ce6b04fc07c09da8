"""
Counter-Based Random Streams
Sample i of a seeded run is drawn from a generator keyed by
(seed, stream, i // chunk_size), so results do not depend on how chunks are
distributed over threads.
"""

from dataclasses import dataclass

import numpy as np

from core.config import MC_CHUNK_SIZE
from core.errors import ParameterError


class Stream:
    """Independent stream tags under one seed."""
    TWIRL = 0
    KEY = 1
    PLAINTEXT = 2
    MEASUREMENT = 3
    WRONG_KEY = 4
    GENERIC = 5


@dataclass(frozen=True)
class Chunk:
    """Half-open sample range [start, stop) with its chunk index."""

    index: int
    start: int
    stop: int

    @property
    def size(self):
        return self.stop - self.start


def require_seed(seed):
    """
    Validates a seed (non-negative integer).

    Raises:
        ParameterError: Negative or non-integer seed
    """
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ParameterError(f"Seed must be a non-negative integer, got {seed!r}")
    return int(seed)


def chunk_generator(seed, chunk_index, stream=Stream.GENERIC):
    """
    Generator for one chunk: Philox keyed by a SeedSequence whose spawn key
    is (stream, chunk_index).

    Returns:
        np.random.Generator
    """
    seq = np.random.SeedSequence(require_seed(seed), spawn_key=(int(stream), int(chunk_index)))
    return np.random.Generator(np.random.Philox(seq))


def split_chunks(n_samples, chunk_size=MC_CHUNK_SIZE):
    """
    Split n_samples into consecutive fixed-size chunks (the last may be shorter).

    Raises:
        ParameterError: n_samples < 1 or chunk_size < 1
    """
    if n_samples < 1:
        raise ParameterError(f"Number of samples must be at least 1, got {n_samples}")
    if chunk_size < 1:
        raise ParameterError(f"Chunk size must be at least 1, got {chunk_size}")
    return [
        Chunk(index=k, start=start, stop=min(start + chunk_size, n_samples))
        for k, start in enumerate(range(0, n_samples, chunk_size))
    ]


def uniform_block(seed, chunk, width, high, stream=Stream.GENERIC):
    """
    Uniform reals in [0, high), shape (chunk.size, width), for one chunk.
    """
    rng = chunk_generator(seed, chunk.index, stream)
    return high * rng.random((chunk.size, width))


def integer_block(seed, chunk, width, low, high, stream=Stream.GENERIC):
    """Uniform integers in [low, high), shape (chunk.size, width)."""
    rng = chunk_generator(seed, chunk.index, stream)
    return rng.integers(low, high, size=(chunk.size, width))


def uniform_draws(seed, n_samples, width, high, stream=Stream.GENERIC, chunk_size=MC_CHUNK_SIZE):
    """All draws of a run, chunk by chunk (serial convenience)."""
    blocks = [uniform_block(seed, c, width, high, stream) for c in split_chunks(n_samples, chunk_size)]
    return np.concatenate(blocks, axis=0)
