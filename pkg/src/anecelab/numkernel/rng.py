import zlib

import numpy as np


def purpose_key(purpose: str) -> int:
    """Stable integer tag for a named randomness purpose."""
    return zlib.crc32(purpose.encode("utf-8"))


def substream(seed: int, purpose: str, *index: int) -> np.random.Generator:
    """
    An independent generator for (seed, purpose, index...).

    Streams for different purposes or indices never overlap, so adding a
    consumer of randomness does not perturb existing ones, and a Monte Carlo
    sample drawn from index k is the same whichever worker computes it.
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    seq = np.random.SeedSequence(
        entropy=seed, spawn_key=(purpose_key(purpose), *(int(k) for k in index))
    )
    return np.random.default_rng(seq)


def crandn(rng: np.random.Generator, shape) -> np.ndarray:
    """i.i.d. CN(0,1) entries: variance 1/2 on each real component."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
