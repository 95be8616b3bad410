"""Seed derivation and counter-based uniforms.

Every random quantity in the package is a pure function of a 64-bit master
seed. Sub-streams are derived by folding tags and indices into the master
through the SplitMix64 finalizer, so any trial or sweep row can be recomputed
in isolation and results do not depend on execution order or worker count.
"""

from __future__ import annotations

import zlib

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def check_seed(seed) -> int:
    """Return ``seed`` as an int, rejecting values outside the unsigned 64-bit range."""
    from .errors import InvalidArgumentError

    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)):
        raise InvalidArgumentError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise InvalidArgumentError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a Python int."""
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def _tag_value(tag) -> int:
    if isinstance(tag, str):
        return zlib.crc32(tag.encode("utf-8"))
    return int(tag) & MASK64


def derive_seed(master: int, *tags) -> int:
    """Derive a sub-stream seed from ``master`` and a sequence of str/int tags."""
    h = mix64(check_seed(master))
    for tag in tags:
        h = mix64(h ^ _tag_value(tag))
    return h


def generator(seed: int) -> np.random.Generator:
    """A numpy Generator (PCG64) seeded deterministically from a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(check_seed(seed)))


def uniform_field(seed: int, counters: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) values indexed by ``counters``.

    Each output is SplitMix64 applied to ``seed + (c + 1) * golden`` so the
    value for a given counter never depends on which other counters are
    requested alongside it.
    """
    c = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(check_seed(seed)) + (c + np.uint64(1)) * np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
