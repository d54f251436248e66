"""Deterministic, splittable random streams.

Every simulation in this package draws randomness through an `RngStream`,
which is fully determined by a pair of unsigned 64-bit integers
``(master_seed, stream_id)``.  Two streams derived from the same pair
produce identical draw sequences; streams derived from different pairs are
statistically independent.  This is what makes replicate-level parallelism
safe: worker processes re-derive their streams from the pair instead of
sharing generator state.

The backing generator is NumPy's PCG64 keyed through
``SeedSequence([master_seed, stream_id])``, whose seeding mix is stable
across platforms and processes for a fixed NumPy build.
"""

from __future__ import annotations

import numpy as np

_U64_MAX = 2**64 - 1


def _check_u64(value: int, name: str) -> int:
    if not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if not 0 <= value <= _U64_MAX:
        raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {value}")
    return int(value)


class RngStream:
    """A named random stream keyed by (master_seed, stream_id).

    The stream is stateful: every sampling call advances it.  Re-deriving a
    stream from the same key restarts the identical sequence, which the
    experiment drivers exploit to pair regimes on shared draws (same market,
    same arm means) without caching arrays.
    """

    __slots__ = ("master_seed", "stream_id", "gen")

    def __init__(self, master_seed: int, stream_id: int):
        self.master_seed = _check_u64(master_seed, "master_seed")
        self.stream_id = _check_u64(stream_id, "stream_id")
        self.gen = np.random.default_rng(
            np.random.SeedSequence([self.master_seed, self.stream_id])
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"

    # -- scalar draws ------------------------------------------------------

    def gaussian(self, mean: float, sd: float) -> float:
        if sd < 0:
            raise ValueError(f"standard deviation must be >= 0, got {sd}")
        return float(self.gen.normal(mean, sd))

    def beta(self, a: float, b: float) -> float:
        if a <= 0 or b <= 0:
            raise ValueError(f"beta shape parameters must be > 0, got a={a}, b={b}")
        return float(self.gen.beta(a, b))

    def bernoulli(self, p: float) -> int:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"bernoulli probability must lie in [0, 1], got {p}")
        # random() is in [0, 1), so p = 1 always succeeds and p = 0 never does.
        return int(self.gen.random() < p)

    def binomial(self, n: int, p: float) -> int:
        if n < 0:
            raise ValueError(f"binomial count must be >= 0, got {n}")
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"binomial probability must lie in [0, 1], got {p}")
        return int(self.gen.binomial(n, p))

    def permutation(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError(f"permutation length must be >= 0, got {n}")
        return self.gen.permutation(n)

    # -- array draws (same contracts, one call per block) ------------------

    def gaussians(self, shape, mean: float = 0.0, sd: float = 1.0) -> np.ndarray:
        if sd < 0:
            raise ValueError(f"standard deviation must be >= 0, got {sd}")
        return self.gen.normal(mean, sd, size=shape)

    def betas(self, shape, a: float, b: float) -> np.ndarray:
        if a <= 0 or b <= 0:
            raise ValueError(f"beta shape parameters must be > 0, got a={a}, b={b}")
        return self.gen.beta(a, b, size=shape)

    def bernoullis(self, shape, p: float) -> np.ndarray:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"bernoulli probability must lie in [0, 1], got {p}")
        return (self.gen.random(shape) < p).astype(np.int64)

    def binomials(self, n: int, p_array: np.ndarray) -> np.ndarray:
        if n < 0:
            raise ValueError(f"binomial count must be >= 0, got {n}")
        return self.gen.binomial(n, p_array)

    def uniforms(self, shape) -> np.ndarray:
        return self.gen.random(shape)


def derive_stream(master_seed: int, stream_id: int) -> RngStream:
    """Derive the stream keyed by (master_seed, stream_id)."""
    return RngStream(master_seed, stream_id)


def sample_gaussian(stream: RngStream, mean: float, sd: float) -> float:
    return stream.gaussian(mean, sd)


def sample_beta(stream: RngStream, a: float, b: float) -> float:
    return stream.beta(a, b)


def sample_bernoulli(stream: RngStream, p: float) -> int:
    return stream.bernoulli(p)


def random_permutation(stream: RngStream, n: int) -> np.ndarray:
    """Uniform random permutation of 0..n-1."""
    return stream.permutation(n)
