"""Deterministic counter-based random streams.

The benchmark grid and the long-range edge subsampling both need draws
that depend only on declared integer coordinates (seed, channel, voxel,
grid indices), so that results are stable under re-runs and independent
of evaluation order.  The mixer is the SplitMix64 finalizer.
"""

from __future__ import annotations

import numpy as np

__all__ = ["mix64", "uniform_stream"]

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _finalize(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def mix64(*parts: int) -> int:
    """Fold integers into one well-mixed 64-bit value (order-sensitive)."""
    acc = _GAMMA
    for p in parts:
        acc = _finalize((acc + (int(p) & _MASK)) * 0x9E3779B97F4A7C15 & _MASK)
    return acc


def uniform_stream(base: int, index: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) draws for integer counters under a fixed base seed."""
    z = (np.uint64(base & _MASK)
         + np.asarray(index, dtype=np.uint64) * np.uint64(_GAMMA))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
