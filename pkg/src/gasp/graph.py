"""Signed graphs and union-find partitions.

A signed graph stores, per edge, a non-negative attraction ``w_plus`` and a
non-negative repulsion ``w_minus``; the effective signed weight is their
difference.  Edges carry a locality flag distinguishing grid-adjacent edges
from long-range ones.  Graphs are immutable once built and safe to share
across threads; a Partition is single-writer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SignedEdge",
    "SignedGraph",
    "Partition",
    "build_signed_graph",
    "signed_weight",
]


@dataclass(frozen=True)
class SignedEdge:
    """One undirected edge with split attraction/repulsion weights."""

    id: int
    u: int
    v: int
    w_plus: float
    w_minus: float
    is_local: bool = True


def signed_weight(edge: SignedEdge) -> float:
    """Effective signed weight of an edge: attraction minus repulsion."""
    return edge.w_plus - edge.w_minus


class SignedGraph:
    """Immutable node/edge store with a lazily built incidence index.

    Edge data is held in parallel numpy arrays; ``edge(i)`` materializes a
    :class:`SignedEdge` view on demand.  Edge ids are dense and follow the
    construction order, which downstream tie-breaking relies on.
    """

    __slots__ = ("node_count", "_u", "_v", "_wp", "_wm", "_local",
                 "_adj_offsets", "_adj_edges")

    def __init__(self, node_count: int, u: np.ndarray, v: np.ndarray,
                 w_plus: np.ndarray, w_minus: np.ndarray,
                 is_local: np.ndarray):
        self.node_count = int(node_count)
        self._u = u
        self._v = v
        self._wp = w_plus
        self._wm = w_minus
        self._local = is_local
        self._adj_offsets = None
        self._adj_edges = None

    @classmethod
    def from_arrays(cls, node_count: int, u, v, w_plus, w_minus,
                    is_local=None) -> "SignedGraph":
        """Build and validate a graph from parallel edge arrays."""
        u = np.ascontiguousarray(u, dtype=np.int64)
        v = np.ascontiguousarray(v, dtype=np.int64)
        wp = np.ascontiguousarray(w_plus, dtype=np.float64)
        wm = np.ascontiguousarray(w_minus, dtype=np.float64)
        m = u.shape[0]
        if not (v.shape[0] == wp.shape[0] == wm.shape[0] == m):
            raise ValueError("edge arrays must have equal length")
        if is_local is None:
            loc = np.ones(m, dtype=bool)
        else:
            loc = np.ascontiguousarray(is_local, dtype=bool)
            if loc.shape[0] != m:
                raise ValueError("edge arrays must have equal length")
        n = int(node_count)
        if n < 0:
            raise ValueError("node_count must be non-negative")
        if m:
            if u.min(initial=0) < 0 or v.min(initial=0) < 0 \
                    or u.max(initial=-1) >= n or v.max(initial=-1) >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(u == v):
                bad = int(np.flatnonzero(u == v)[0])
                raise ValueError(f"self-loop at edge {bad}")
            lo = np.minimum(u, v)
            hi = np.maximum(u, v)
            key = lo * n + hi
            if np.unique(key).shape[0] != m:
                raise ValueError("duplicate edge between a node pair")
            if not (np.all(wp >= 0) and np.all(wm >= 0)):
                raise ValueError("edge weights must be non-negative")
        return cls(n, u, v, wp, wm, loc)

    @property
    def edge_count(self) -> int:
        return self._u.shape[0]

    @property
    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        return self._u, self._v

    @property
    def w_plus(self) -> np.ndarray:
        return self._wp

    @property
    def w_minus(self) -> np.ndarray:
        return self._wm

    @property
    def is_local(self) -> np.ndarray:
        return self._local

    def signed_weights(self) -> np.ndarray:
        """Vector of per-edge signed weights (w_plus - w_minus)."""
        return self._wp - self._wm

    def edge(self, i: int) -> SignedEdge:
        return SignedEdge(int(i), int(self._u[i]), int(self._v[i]),
                          float(self._wp[i]), float(self._wm[i]),
                          bool(self._local[i]))

    @property
    def edges(self) -> list[SignedEdge]:
        return [self.edge(i) for i in range(self.edge_count)]

    def _build_incidence(self) -> None:
        m = self.edge_count
        ends = np.concatenate([self._u, self._v])
        eids = np.concatenate([np.arange(m), np.arange(m)])
        order = np.argsort(ends, kind="stable")
        self._adj_edges = eids[order]
        counts = np.bincount(ends, minlength=self.node_count)
        self._adj_offsets = np.concatenate([[0], np.cumsum(counts)])

    def incident_edges(self, node: int) -> np.ndarray:
        """Ids of edges touching ``node`` (built lazily, cached)."""
        if self._adj_edges is None:
            self._build_incidence()
        return self._adj_edges[self._adj_offsets[node]:self._adj_offsets[node + 1]]

    @property
    def adjacency_entry_count(self) -> int:
        if self._adj_edges is None:
            self._build_incidence()
        return int(self._adj_edges.shape[0])


def build_signed_graph(node_count: int,
                       edge_triples: Iterable[Sequence]) -> SignedGraph:
    """Build a graph from (u, v, w_plus, w_minus[, is_local]) tuples.

    Edge ids are assigned densely in input order.  Raises ValueError on
    self-loops, duplicate unordered pairs, out-of-range endpoints or
    negative weights.
    """
    rows = list(edge_triples)
    m = len(rows)
    u = np.empty(m, dtype=np.int64)
    v = np.empty(m, dtype=np.int64)
    wp = np.empty(m, dtype=np.float64)
    wm = np.empty(m, dtype=np.float64)
    loc = np.ones(m, dtype=bool)
    for i, row in enumerate(rows):
        if len(row) == 5:
            u[i], v[i], wp[i], wm[i], loc[i] = row
        elif len(row) == 4:
            u[i], v[i], wp[i], wm[i] = row
        else:
            raise ValueError(f"edge {i}: expected 4 or 5 fields, got {len(row)}")
    return SignedGraph.from_arrays(node_count, u, v, wp, wm, loc)


class Partition:
    """Union-find over dense node ids, with union by rank and path halving.

    ``merge`` on two nodes already in the same cluster is a contract
    violation and raises.  ``labels`` relabels clusters consecutively from
    0 in order of first appearance by node id.
    """

    __slots__ = ("_parent", "_rank", "_count")

    def __init__(self, node_count: int):
        self._parent = list(range(node_count))
        self._rank = [0] * node_count
        self._count = node_count

    @property
    def node_count(self) -> int:
        return len(self._parent)

    @property
    def cluster_count(self) -> int:
        return self._count

    def find(self, u: int) -> int:
        parent = self._parent
        root = parent[u]
        while parent[root] != root:
            parent[u] = root = parent[parent[u]]
            u = root
            root = parent[u]
        return root

    def merge(self, u: int, v: int) -> int:
        """Join the clusters of u and v; returns the surviving root."""
        ru = self.find(u)
        rv = self.find(v)
        if ru == rv:
            raise ValueError(f"nodes {u} and {v} are already in one cluster")
        rank = self._rank
        if rank[ru] < rank[rv]:
            ru, rv = rv, ru
        self._parent[rv] = ru
        if rank[ru] == rank[rv]:
            rank[ru] += 1
        self._count -= 1
        return ru

    def same(self, u: int, v: int) -> bool:
        return self.find(u) == self.find(v)

    def labels(self) -> np.ndarray:
        """Dense cluster labels, numbered by first appearance."""
        roots = np.array([self.find(i) for i in range(len(self._parent))],
                         dtype=np.int64)
        _, first, inverse = np.unique(roots, return_index=True,
                                      return_inverse=True)
        order = np.argsort(np.argsort(first, kind="stable"), kind="stable")
        return order[inverse]

    def copy(self) -> "Partition":
        dup = Partition.__new__(Partition)
        dup._parent = list(self._parent)
        dup._rank = list(self._rank)
        dup._count = self._count
        return dup

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Partition whose clusters are the groups of equal label values."""
        flat = np.asarray(labels).ravel()
        _, first, inverse = np.unique(flat, return_index=True,
                                      return_inverse=True)
        parent = first[inverse]
        part = cls.__new__(cls)
        part._parent = parent.tolist()
        part._rank = [0] * flat.shape[0]
        for r in first.tolist():
            part._rank[r] = 1
        part._count = int(first.shape[0])
        return part
