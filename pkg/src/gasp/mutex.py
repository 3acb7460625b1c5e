"""Single-pass mutex watershed: Kruskal-style clustering with dynamic
mutual-exclusion constraints.

Edges are visited once in descending order of |signed weight| (ties by
ascending edge id, matching the contraction engine's tie rule).  Positive
edges merge their clusters unless the clusters exclude each other;
non-positive edges record a mutual exclusion.  Produces the same final
clustering as the contraction engine with absolute-maximum linkage.
"""

from __future__ import annotations

import numpy as np

from .graph import Partition, SignedGraph

__all__ = ["mutex_watershed"]


def mutex_watershed(graph: SignedGraph) -> Partition:
    n = graph.node_count
    w = graph.signed_weights()
    order = np.lexsort((np.arange(graph.edge_count), -np.abs(w))).tolist()
    wlist = w.tolist()
    eu, ev = graph.endpoints
    eu = eu.tolist()
    ev = ev.tolist()

    parent = list(range(n))
    # root -> set of mutually excluded roots; kept symmetric
    csets: dict[int, set[int]] = {}
    merged_pairs: list[tuple[int, int]] = []

    def find(x: int) -> int:
        root = parent[x]
        while parent[root] != root:
            parent[x] = root = parent[parent[x]]
            x = root
            root = parent[x]
        return root

    for e in order:
        ra = find(eu[e])
        rb = find(ev[e])
        if ra == rb:
            continue
        if wlist[e] > 0.0:
            sa = csets.get(ra)
            if sa is not None and rb in sa:
                continue
            merged_pairs.append((ra, rb))
            # survivor keeps the larger constraint set; the smaller moves
            lb = len(csets.get(rb, ()))
            keep, lost = (ra, rb) if len(sa or ()) >= lb else (rb, ra)
            small = csets.pop(lost, None)
            if small:
                big = csets.get(keep)
                if big is None:
                    big = csets[keep] = set()
                for x in small:
                    big.add(x)
                    cx = csets[x]
                    cx.discard(lost)
                    cx.add(keep)
            parent[lost] = keep
        else:
            csets.setdefault(ra, set()).add(rb)
            csets.setdefault(rb, set()).add(ra)

    part = Partition(n)
    for a, b in merged_pairs:
        part.merge(a, b)
    return part
