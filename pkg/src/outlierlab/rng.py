"""Deterministic, splittable random streams.

Every stream is a Philox counter-based generator keyed by the pair
``(seed, stream_id)``.  The variates produced by a stream depend on nothing
else, so per-replicate streams give identical results however the work is
scheduled across threads.
"""

import numpy as np

_U64 = 2**64


def _check_u64(value, name):
    value = int(value)
    if not 0 <= value < _U64:
        raise ValueError(f"{name} must be an unsigned 64-bit integer, got {value}")
    return value


class RngStream:
    """A single-owner random stream identified by ``(seed, stream_id)``.

    Streams are cheap to create; parallel code should create one per task
    rather than share one between threads.
    """

    __slots__ = ("seed", "stream_id", "_gen")

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = _check_u64(seed, "seed")
        self.stream_id = _check_u64(stream_id, "stream_id")
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def open_uniform(self, n: int) -> np.ndarray:
        """Uniform variates on the open interval (0, 1)."""
        return (self._gen.integers(0, 2**53, size=n, dtype=np.int64) + 0.5) / 2.0**53

    def standard_exponential(self, n: int) -> np.ndarray:
        return self._gen.standard_exponential(n)

    def standard_normal(self, n: int) -> np.ndarray:
        return self._gen.standard_normal(n)
