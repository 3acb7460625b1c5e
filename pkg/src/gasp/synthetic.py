"""Synthetic inputs for verification and benchmarks: random signed graphs
and planted grid segmentations with ideal affinities."""

from __future__ import annotations

import numpy as np

from .graph import SignedGraph, build_signed_graph
from .volume import AffinityVolume

__all__ = ["random_signed_graph", "planted_labels", "ideal_affinities"]


def random_signed_graph(seed: int, max_nodes: int = 40,
                        tie_heavy: bool = False, all_positive: bool = False,
                        connected: bool = False,
                        density: float = 1.8) -> SignedGraph:
    """Random simple graph with signed weights.

    ``tie_heavy`` draws weights from the small integer set -3..3 so that
    magnitude ties are frequent; otherwise weights are continuous.
    ``connected`` first lays down a random spanning tree.  ``density``
    scales the expected edge count relative to the node count.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, max_nodes + 1))
    pairs: list[tuple[int, int]] = []
    seen = set()
    if connected:
        order = rng.permutation(n)
        for i in range(1, n):
            a = int(order[i])
            b = int(order[rng.integers(0, i)])
            key = (a, b) if a < b else (b, a)
            seen.add(key)
            pairs.append(key)
    target = min(n * (n - 1) // 2, max(1, int(rng.poisson(density * n))))
    attempts = 0
    while len(pairs) < target and attempts < 20 * target:
        attempts += 1
        a = int(rng.integers(0, n))
        b = int(rng.integers(0, n))
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        if key in seen:
            continue
        seen.add(key)
        pairs.append(key)
    triples = []
    for i, (a, b) in enumerate(pairs):
        if all_positive:
            w = float(rng.uniform(0.05, 1.0))
        elif tie_heavy:
            w = float(rng.integers(-3, 4))
        else:
            w = float(rng.uniform(-1.0, 1.0))
        triples.append((a, b, max(w, 0.0), max(-w, 0.0), True))
    return build_signed_graph(n, triples)


def planted_labels(shape: tuple[int, int, int],
                   block: tuple[int, int, int]) -> np.ndarray:
    """Ground-truth segmentation: a lattice of axis-aligned blocks.

    Labels start at 1 so the conventional background exclusion leaves
    every segment in play.
    """
    z, y, x = shape
    bz, by, bx = block
    zz, yy, xx = np.meshgrid(np.arange(z) // bz, np.arange(y) // by,
                             np.arange(x) // bx, indexing="ij")
    ny = (y + by - 1) // by
    nx = (x + bx - 1) // bx
    return ((zz * ny + yy) * nx + xx + 1).astype(np.uint32)


def ideal_affinities(gt: np.ndarray, offsets, inside: float = 0.95,
                     outside: float = 0.05) -> AffinityVolume:
    """Affinities consistent with a ground-truth labeling.

    Channel c at voxel x is ``inside`` when x and x+offset share a label,
    ``outside`` otherwise (and for out-of-bounds neighbors, which never
    become edges anyway).
    """
    gt = np.asarray(gt)
    zdim, ydim, xdim = gt.shape
    data = np.full((len(offsets),) + gt.shape, outside, dtype=np.float64)
    for c, (dz, dy, dx) in enumerate(offsets):
        sz = slice(max(0, -dz), min(zdim, zdim - dz))
        sy = slice(max(0, -dy), min(ydim, ydim - dy))
        sx = slice(max(0, -dx), min(xdim, xdim - dx))
        tz = slice(sz.start + dz, sz.stop + dz)
        ty = slice(sy.start + dy, sy.stop + dy)
        tx = slice(sx.start + dx, sx.stop + dx)
        same = gt[sz, sy, sx] == gt[tz, ty, tx]
        data[c, sz, sy, sx] = np.where(same, inside, outside)
    return AffinityVolume(data, offsets)
