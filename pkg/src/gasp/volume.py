"""Affinity volumes: weight mapping, grid-graph construction, pre-merge
components, and small-segment cleanup.

An affinity volume is a multi-channel scalar field over a voxel grid;
each channel is tied to a spatial offset, and the value at (c, z, y, x)
is the pseudo-probability that the voxel and its offset neighbor belong
to the same instance (0 = boundary evidence).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .graph import Partition, SignedGraph
from .seeding import mix64, uniform_stream

__all__ = [
    "AffinityVolume",
    "OffsetSpec",
    "MappingSpec",
    "map_weight",
    "build_grid_graph",
    "GridEdgeIndex",
    "premerge_components",
    "filter_small_segments",
]


@dataclass(frozen=True)
class OffsetSpec:
    """One channel's spatial offset; local means an axis-adjacent step."""

    vector: tuple[int, int, int]
    is_local: bool

    @classmethod
    def from_vector(cls, vector) -> "OffsetSpec":
        vec = tuple(int(c) for c in vector)
        if len(vec) != 3:
            raise ValueError("offset must be a 3-vector")
        if vec == (0, 0, 0):
            raise ValueError("offset must be nonzero")
        return cls(vec, sum(abs(c) for c in vec) == 1)


class AffinityVolume:
    """Multi-channel affinity field with per-channel offsets.

    ``data`` has shape (C, Z, Y, X) with values in [0, 1]; offsets must be
    distinct nonzero integer 3-vectors.
    """

    __slots__ = ("data", "offsets")

    def __init__(self, data: np.ndarray, offsets):
        data = np.asarray(data, dtype=np.float64)
        if data.ndim != 4:
            raise ValueError("affinity data must be 4-D (C, Z, Y, X)")
        offs = [OffsetSpec.from_vector(o).vector for o in offsets]
        if len(offs) != data.shape[0]:
            raise ValueError("offset count must match channel count")
        if len(set(offs)) != len(offs):
            raise ValueError("offsets must be distinct")
        if data.size and (data.min() < 0.0 or data.max() > 1.0):
            raise ValueError("affinities must lie in [0, 1]")
        self.data = data
        self.offsets = offs

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape[1:]

    @property
    def channel_count(self) -> int:
        return self.data.shape[0]

    @property
    def offset_specs(self) -> list[OffsetSpec]:
        return [OffsetSpec.from_vector(o) for o in self.offsets]

    @property
    def voxel_count(self) -> int:
        z, y, x = self.shape
        return z * y * x


@dataclass(frozen=True)
class MappingSpec:
    """Affinity-to-signed-weight mapping with a bias toward splitting.

    ``additive`` maps p to p - beta; ``logarithmic`` maps to
    logit(p) - logit(beta) after clamping p into [eps, 1 - eps].
    """

    mode: str = "additive"
    beta: float = 0.5
    clamp_eps: float = 1e-6

    def __post_init__(self):
        if self.mode not in ("additive", "logarithmic"):
            raise ValueError("mode must be 'additive' or 'logarithmic'")
        if not (0.0 < self.clamp_eps < 0.5):
            raise ValueError("clamp_eps must lie in (0, 0.5)")
        if self.mode == "additive":
            if not (0.0 <= self.beta <= 1.0):
                raise ValueError("additive beta must lie in [0, 1]")
        else:
            if not (0.0 < self.beta < 1.0):
                raise ValueError("logarithmic beta must lie in (0, 1)")


def map_weight(p, spec: MappingSpec):
    """Signed weight of affinity value(s) p under a mapping spec."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError("affinities must lie in [0, 1]")
    if spec.mode == "additive":
        out = arr - spec.beta
    else:
        clamped = np.clip(arr, spec.clamp_eps, 1.0 - spec.clamp_eps)
        out = (np.log(clamped / (1.0 - clamped))
               - np.log(spec.beta / (1.0 - spec.beta)))
    return float(out) if np.isscalar(p) else out


class GridEdgeIndex:
    """Maps each grid-graph edge back to its (source voxel, channel)."""

    __slots__ = ("voxel", "channel")

    def __init__(self, voxel: np.ndarray, channel: np.ndarray):
        self.voxel = voxel
        self.channel = channel


def build_grid_graph(vol: AffinityVolume, spec: MappingSpec,
                     p_long: float = 1.0, seed: int = 0
                     ) -> tuple[SignedGraph, GridEdgeIndex]:
    """Grid graph over the voxel lattice with one node per voxel.

    For every voxel and channel an edge joins the voxel to its offset
    neighbor when both ends are in bounds; long-range channels are kept
    with probability ``p_long``, decided by a counter-based stream keyed
    on (seed, channel, voxel) so subsets are reproducible.  Edges are
    ordered by (channel, voxel index); weights go through ``map_weight``.
    """
    if not (0.0 <= p_long <= 1.0):
        raise ValueError("p_long must lie in [0, 1]")
    zdim, ydim, xdim = vol.shape
    n = vol.voxel_count
    us, vs, ps, locs, voxels, channels = [], [], [], [], [], []
    flat_index = np.arange(n, dtype=np.int64).reshape(vol.shape)
    for c, off in enumerate(vol.offsets):
        dz, dy, dx = off
        sz = slice(max(0, -dz), min(zdim, zdim - dz))
        sy = slice(max(0, -dy), min(ydim, ydim - dy))
        sx = slice(max(0, -dx), min(xdim, xdim - dx))
        src = flat_index[sz, sy, sx].ravel()
        if src.size == 0:
            continue
        tz = slice(sz.start + dz, sz.stop + dz)
        ty = slice(sy.start + dy, sy.stop + dy)
        tx = slice(sx.start + dx, sx.stop + dx)
        dst = flat_index[tz, ty, tx].ravel()
        local = sum(abs(d) for d in off) == 1
        if not local:
            draws = uniform_stream(mix64(seed, c), src)
            keep = draws < p_long
            src = src[keep]
            dst = dst[keep]
            if src.size == 0:
                continue
        pvals = vol.data[c].ravel()[src]
        us.append(src)
        vs.append(dst)
        ps.append(pvals)
        locs.append(np.full(src.shape[0], local, dtype=bool))
        voxels.append(src)
        channels.append(np.full(src.shape[0], c, dtype=np.int32))
    if us:
        u = np.concatenate(us)
        v = np.concatenate(vs)
        p = np.concatenate(ps)
        loc = np.concatenate(locs)
        voxel = np.concatenate(voxels)
        channel = np.concatenate(channels)
    else:
        u = v = voxel = np.empty(0, dtype=np.int64)
        p = np.empty(0, dtype=np.float64)
        loc = np.empty(0, dtype=bool)
        channel = np.empty(0, dtype=np.int32)
    w = map_weight(p, spec)
    graph = SignedGraph.from_arrays(n, u, v, np.maximum(w, 0.0),
                                    np.maximum(-w, 0.0), loc)
    return graph, GridEdgeIndex(voxel, channel)


def premerge_components(vol: AffinityVolume, threshold: float) -> Partition:
    """Connected components of voxels whose mean affinity clears a threshold.

    Per-voxel means run over all channels (short- and long-range alike);
    two axis-adjacent voxels join one component iff both means exceed the
    threshold.  Voxels at or below it stay singletons.
    """
    if not (0.0 <= threshold <= 1.0):
        raise ValueError("threshold must lie in [0, 1]")
    mean = vol.data.mean(axis=0)
    mask = mean > threshold
    comp, _ = ndimage.label(mask)
    flat = comp.ravel()
    # background voxels become unique singleton groups
    labels = np.where(flat > 0, flat.astype(np.int64),
                      -(np.arange(flat.size, dtype=np.int64) + 1))
    return Partition.from_labels(labels)


def filter_small_segments(labels: np.ndarray, graph: SignedGraph,
                          min_size: int = 200) -> np.ndarray:
    """Dissolve clusters smaller than ``min_size`` into their neighbors.

    Nodes of dissolved clusters are re-assigned by priority region
    growing: repeatedly attach the unassigned node reachable through the
    highest-signed-weight frontier edge (ties by edge id) to the segment
    on the other side.  Dissolved nodes that cannot reach any surviving
    segment keep their original grouping under a fresh label.  Output
    labels are dense, renumbered by first appearance.
    """
    flat = np.asarray(labels).ravel()
    if flat.shape[0] != graph.node_count:
        raise ValueError("label array length must equal node count")
    sizes = np.bincount(flat)
    small = sizes[flat] < min_size
    if not small.any():
        return flat.copy()
    assigned = np.where(small, -1, flat.astype(np.int64))
    w = graph.signed_weights().tolist()
    eu, ev = graph.endpoints
    eu = eu.tolist()
    ev = ev.tolist()
    frontier: list[tuple[float, int, int, int]] = []
    for e in range(graph.edge_count):
        a, b = eu[e], ev[e]
        la, lb = assigned[a], assigned[b]
        if la >= 0 and lb < 0:
            frontier.append((-w[e], e, b, la))
        elif lb >= 0 and la < 0:
            frontier.append((-w[e], e, a, lb))
    heapq.heapify(frontier)
    incident = graph.incident_edges
    while frontier:
        _, _, node, label = heapq.heappop(frontier)
        if assigned[node] >= 0:
            continue
        assigned[node] = label
        for e in incident(node).tolist():
            other = ev[e] if eu[e] == node else eu[e]
            if assigned[other] < 0:
                heapq.heappush(frontier, (-w[e], e, other, label))
    # unreachable nodes: keep their original clusters, as fresh groups
    lost = assigned < 0
    if lost.any():
        assigned[lost] = flat[lost].astype(np.int64) + int(sizes.shape[0])
    _, first, inverse = np.unique(assigned, return_index=True,
                                  return_inverse=True)
    order = np.argsort(np.argsort(first, kind="stable"), kind="stable")
    return order[inverse].reshape(np.asarray(labels).shape)
