"""Slow, obviously-correct reference implementations used as ground truth.

``gasp_reference`` replays the contraction semantics with a linear scan
over all active pair statistics instead of a heap (O(N*E)); it must agree
with the engine bit for bit.  ``table1_interaction`` evaluates each
linkage's closed form directly on the multiset of original edges between
two clusters.  ``hac_reference`` is classic graph-based agglomerative
clustering for the all-positive special case.
"""

from __future__ import annotations

from typing import Optional

from .engine import GaspOptions, MergeEvent, MergeLog, NEVER_MERGED
from .graph import Partition, SignedGraph
from .linkage import EdgeStat, LinkageRule, combine, init_stat

import numpy as np

__all__ = ["gasp_reference", "table1_interaction", "hac_reference"]


def gasp_reference(graph: SignedGraph, options: GaspOptions,
                   initial: Optional[Partition] = None
                   ) -> tuple[Partition, MergeLog]:
    """Reference agglomeration; same contract as :func:`gasp.engine.gasp`."""
    from .engine import _check_initial_partition

    n = graph.node_count
    rule = options.rule
    add_clc = options.add_cannot_link_constraints
    local_only = options.enforce_local_merge
    revive = options.revive_retired
    logging = options.record_merge_log

    if initial is not None:
        _check_initial_partition(graph, initial)
        part = initial.copy()
        roots = [part.find(i) for i in range(n)]
    else:
        part = Partition(n)
        roots = list(range(n))

    stats: dict[int, EdgeStat] = {}        # slot -> statistic
    members: dict[int, list[int]] = {}     # slot -> constituent edge ids
    pair_of: dict[int, tuple[int, int]] = {}
    adj: dict[int, dict[int, int]] = {i: {} for i in range(n)}
    queued: set[int] = set()
    iters = (np.full(graph.edge_count, NEVER_MERGED, dtype=np.uint32)
             if logging else None)

    for e in range(graph.edge_count):
        edge = graph.edge(e)
        ra, rb = roots[edge.u], roots[edge.v]
        if ra == rb:
            if logging:
                iters[e] = 0
            continue
        prev = adj[ra].get(rb)
        if prev is None:
            stats[e] = init_stat(edge)
            members[e] = [e]
            pair_of[e] = (ra, rb)
            adj[ra][rb] = e
            adj[rb][ra] = e
        else:
            stats[prev] = combine(stats[prev], init_stat(edge), rule)
            members[prev].append(e)
    queued.update(stats.keys())

    sizes: dict[int, int] = {}
    for i in range(n):
        sizes[roots[i]] = sizes.get(roots[i], 0) + 1
    initial_sizes = dict(sizes) if initial is not None else None

    events: list[MergeEvent] = []
    pops = merges = repushes = 0

    while queued:
        # highest |interaction|, ties broken by the smaller tie rank
        best = None
        best_key = None
        for k in queued:
            s = stats[k]
            key = (-abs(s.value), s.tie_rank)
            if best_key is None or key < best_key:
                best_key = key
                best = k
        k = best
        queued.discard(k)
        pops += 1
        s = stats[k]
        if s.value > 0.0 and s.can_be_merged and (s.is_local or not local_only):
            a, b = pair_of[k]
            u, w = (a, b) if len(adj[a]) >= len(adj[b]) else (b, a)
            part.merge(a, b)
            merges += 1
            del adj[a][b], adj[b][a]
            if logging:
                for e0 in members[k]:
                    iters[e0] = pops
            del stats[k], members[k], pair_of[k]
            for t, ekt in list(adj[w].items()):
                del adj[t][w]
                was_live = ekt in queued
                queued.discard(ekt)
                prev = adj[u].get(t)
                if prev is None:
                    adj[u][t] = ekt
                    adj[t][u] = ekt
                    pair_of[ekt] = (u, t)
                    if was_live:
                        queued.add(ekt)
                        repushes += 1
                else:
                    other_live = prev in queued
                    queued.discard(prev)
                    knew, kold = (prev, ekt) if prev < ekt else (ekt, prev)
                    stats[knew] = combine(stats[prev], stats[ekt], rule)
                    ml = members[prev] + members[ekt]
                    members[knew] = ml
                    stats.pop(kold, None)
                    members.pop(kold, None)
                    pair_of.pop(kold, None)
                    adj[u][t] = knew
                    adj[t][u] = knew
                    pair_of[knew] = (u, t)
                    if revive or was_live or other_live:
                        queued.add(knew)
                        repushes += 1
            adj[w].clear()
            sizes[u] = sizes.get(u, 1) + sizes.pop(w, 1)
            events.append(MergeEvent(pops, u, w, s.value, sizes[u]))
        elif s.value <= 0.0 and add_clc:
            stats[k] = EdgeStat(s.value, s.count, s.is_local, False, s.tie_rank)

    log = MergeLog(events=events, edge_merge_iteration=iters, pops=pops,
                   merges=merges, repushes=repushes,
                   initial_cluster_sizes=initial_sizes)
    return part, log


def table1_interaction(graph: SignedGraph, partition: Partition,
                       cluster_a: int, cluster_b: int,
                       rule: LinkageRule) -> float:
    """Closed-form inter-cluster interaction over the original edge multiset.

    ``cluster_a``/``cluster_b`` are any member nodes of the two clusters.
    Raises ValueError if no original edge joins them.  For absolute-maximum,
    exact magnitude ties fall to the smallest edge id.
    """
    ra = partition.find(cluster_a)
    rb = partition.find(cluster_b)
    if ra == rb:
        raise ValueError("clusters are identical")
    weights = []
    eu, ev = graph.endpoints
    w = graph.signed_weights()
    for e in range(graph.edge_count):
        x = partition.find(int(eu[e]))
        y = partition.find(int(ev[e]))
        if (x == ra and y == rb) or (x == rb and y == ra):
            weights.append(float(w[e]))
    if not weights:
        raise ValueError("clusters are not adjacent")
    if rule is LinkageRule.SUM:
        return sum(weights)
    if rule is LinkageRule.AVERAGE:
        return sum(weights) / len(weights)
    if rule is LinkageRule.MAX:
        return max(weights)
    if rule is LinkageRule.MIN:
        return min(weights)
    if rule is LinkageRule.ABSMAX:
        best = weights[0]
        for x in weights[1:]:
            if abs(x) > abs(best):
                best = x
        return best
    raise ValueError(f"unknown rule {rule!r}")


def hac_reference(graph: SignedGraph, rule: LinkageRule) -> MergeLog:
    """Classic agglomerative clustering on an all-positive connected graph.

    Repeatedly merges the adjacent cluster pair with the highest
    interaction (recomputed from the original edges each round, ties by
    minimal connecting edge id) until a single cluster remains.  Returns
    the full dendrogram as a merge log.
    """
    w = graph.signed_weights()
    if not np.all(w > 0):
        raise ValueError("hac_reference requires strictly positive weights")
    n = graph.node_count
    part = Partition(n)
    eu = graph.endpoints[0].tolist()
    ev = graph.endpoints[1].tolist()
    wl = w.tolist()
    sizes = {i: 1 for i in range(n)}
    events: list[MergeEvent] = []
    for iteration in range(1, n):
        # interactions over all adjacent root pairs, from scratch
        groups: dict[tuple[int, int], list[int]] = {}
        for e in range(graph.edge_count):
            x = part.find(eu[e])
            y = part.find(ev[e])
            if x == y:
                continue
            groups.setdefault((x, y) if x < y else (y, x), []).append(e)
        if not groups:
            raise ValueError("graph is not connected")
        best = None
        best_key = None
        for pair, edges in groups.items():
            ws = [wl[e] for e in edges]
            if rule is LinkageRule.SUM:
                value = sum(ws)
            elif rule is LinkageRule.AVERAGE:
                value = sum(ws) / len(ws)
            elif rule is LinkageRule.MAX or rule is LinkageRule.ABSMAX:
                value = max(ws)
            elif rule is LinkageRule.MIN:
                value = min(ws)
            else:
                raise ValueError(f"unknown rule {rule!r}")
            key = (-value, min(edges))
            if best_key is None or key < best_key:
                best_key = key
                best = (pair, value)
        (a, b), value = best
        part.merge(a, b)
        sizes[a] = sizes[a] + sizes.pop(b)
        events.append(MergeEvent(iteration, a, b, value, sizes[a]))
    return MergeLog(events=events, pops=n - 1, merges=n - 1, repushes=0)
