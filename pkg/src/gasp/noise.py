"""Spatially correlated noise and one-sided prediction biasing.

The noise generator layers several octaves of seeded value noise (random
lattice values, smoothstep interpolation) and renormalizes the sum to
[0, 1] by min-max.  ``bias_predictions`` pushes affinities toward merging
or splitting in logit space, scaled by the positive (or negative) part of
the noise logit, so the perturbation is one-sided by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.special import expit, logit

from .volume import AffinityVolume

__all__ = ["NoiseSpec", "correlated_noise", "bias_predictions"]


@dataclass(frozen=True)
class NoiseSpec:
    """Shape of the correlated noise.

    ``scales`` gives the lattice spacing per axis (channel, z, y, x);
    larger spacing means smoother variation along that axis.  Octave k is
    sampled at twice the previous frequency and weighted by
    persistence**k.
    """

    scales: tuple[float, float, float, float]
    octaves: int = 3
    persistence: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if len(self.scales) != 4:
            raise ValueError("scales must cover 4 axes (channel, z, y, x)")
        if any(s <= 0 for s in self.scales):
            raise ValueError("scales must be positive")
        if self.octaves < 1:
            raise ValueError("octaves must be >= 1")
        if not (0.0 < self.persistence <= 1.0):
            raise ValueError("persistence must lie in (0, 1]")


def _value_octave(shape, scales, seed) -> np.ndarray:
    coords = [np.arange(s, dtype=np.float64) / sc
              for s, sc in zip(shape, scales)]
    base = [np.floor(c).astype(np.int64) for c in coords]
    frac = [c - b for c, b in zip(coords, base)]
    smooth = [f * f * (3.0 - 2.0 * f) for f in frac]
    rng = np.random.default_rng(seed)
    lattice = rng.random([int(b[-1]) + 2 for b in base])
    acc = np.zeros(shape, dtype=np.float64)
    for corner in product((0, 1), repeat=4):
        idx = np.ix_(*[b + c for b, c in zip(base, corner)])
        weight = 1.0
        for axis, c in enumerate(corner):
            s = smooth[axis] if c else 1.0 - smooth[axis]
            wshape = [1, 1, 1, 1]
            wshape[axis] = s.shape[0]
            weight = weight * s.reshape(wshape)
        acc += lattice[idx] * weight
    return acc


def correlated_noise(shape, spec: NoiseSpec) -> np.ndarray:
    """Multi-octave value noise over a 4-D field, min-max scaled to [0, 1].

    Deterministic for a fixed spec.  A constant field (possible only in
    degenerate cases) maps to 0.5 everywhere.
    """
    if len(shape) != 4:
        raise ValueError("shape must be 4-D (C, Z, Y, X)")
    total = np.zeros(shape, dtype=np.float64)
    amplitude = 1.0
    for k in range(spec.octaves):
        scales = [s / (1 << k) for s in spec.scales]
        total += amplitude * _value_octave(shape, scales, [spec.seed, k])
        amplitude *= spec.persistence
    lo = total.min()
    hi = total.max()
    if hi == lo:
        return np.full(shape, 0.5)
    return (total - lo) / (hi - lo)


def bias_predictions(vol: AffinityVolume, noise: np.ndarray, amount: float,
                     direction: str, clamp_eps: float = 1e-6
                     ) -> AffinityVolume:
    """One-sided noisy version of an affinity volume.

    ``direction='under'`` only ever raises affinities (merge bias), using
    the positive part of the noise logit; ``'over'`` only lowers them.
    ``amount`` scales the perturbation; 0 returns the clamped input.
    """
    if direction not in ("under", "over"):
        raise ValueError("direction must be 'under' or 'over'")
    if amount < 0:
        raise ValueError("amount must be non-negative")
    noise = np.asarray(noise, dtype=np.float64)
    if noise.shape != vol.data.shape:
        raise ValueError(
            f"noise shape {noise.shape} does not match volume {vol.data.shape}")
    n_logit = logit(np.clip(noise, clamp_eps, 1.0 - clamp_eps))
    f = logit(np.clip(vol.data, clamp_eps, 1.0 - clamp_eps))
    if direction == "under":
        f = f + np.abs(amount * np.maximum(n_logit, 0.0))
    else:
        f = f - np.abs(amount * np.maximum(-n_logit, 0.0))
    return AffinityVolume(expit(f), vol.offsets)
