"""Greedy signed-graph agglomeration by edge contraction.

The engine keeps a contracted graph (one representative per cluster, one
statistic per adjacent cluster pair) and an addressable max-heap keyed by
the magnitude of each inter-cluster interaction.  Each step pops the
largest-magnitude pair:

* positive and mergeable (and grid-adjacent, when local merges are
  enforced): contract the pair and fold parallel edges to common
  neighbors;
* non-positive with constraints enabled: mark the pair cannot-link;
* anything else: the edge is retired.

A retired edge keeps its statistic and its place in the contracted
adjacency but leaves the queue; it can re-enter only by being combined
with another edge during a later contraction.  The run ends when the
queue empties.  Results are deterministic: ties are broken by the minimal
constituent original-edge id.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .graph import Partition, SignedGraph
from .heap import AddressableMaxHeap
from .linkage import LinkageRule

__all__ = [
    "GaspOptions",
    "MergeEvent",
    "MergeLog",
    "gasp",
    "export_merge_tree",
    "write_merge_log_csv",
    "write_merge_iterations",
    "NEVER_MERGED",
]

NEVER_MERGED = 0xFFFFFFFF


@dataclass(frozen=True)
class GaspOptions:
    """Knobs of one agglomeration run.

    ``enforce_local_merge`` postpones contractions driven by long-range
    edges until the pair is connected through a grid-adjacent edge.
    ``record_merge_log`` additionally tracks, per original edge, the
    iteration at which its endpoints ended up in one cluster (costs one
    list per contracted edge).  ``revive_retired`` is experimental: when
    False, a combined edge re-enters the queue only if at least one of its
    operands was still queued.
    """

    rule: LinkageRule = LinkageRule.AVERAGE
    add_cannot_link_constraints: bool = False
    enforce_local_merge: bool = False
    record_merge_log: bool = False
    revive_retired: bool = True


class MergeEvent(NamedTuple):
    iteration: int
    root_a: int      # surviving representative
    root_b: int      # absorbed representative
    value: float     # interaction at the moment of the merge (always > 0)
    size: int        # cluster size after the merge


@dataclass
class MergeLog:
    """Ordered merge events plus run counters.

    ``edge_merge_iteration`` maps each original edge id to the 1-based pop
    iteration at which its endpoints joined one cluster; 0 means joined by
    the initial partition, NEVER_MERGED means never.  Only populated when
    the run recorded a merge log.
    """

    events: list[MergeEvent] = field(default_factory=list)
    edge_merge_iteration: Optional[np.ndarray] = None
    pops: int = 0
    merges: int = 0
    repushes: int = 0
    initial_cluster_sizes: Optional[dict[int, int]] = None

    @property
    def retired(self) -> int:
        """Pops that did not trigger a merge."""
        return self.pops - self.merges


def _check_initial_partition(graph: SignedGraph, initial: Partition) -> None:
    """Every initial cluster must induce a connected subgraph."""
    if initial.node_count != graph.node_count:
        raise ValueError("initial partition size does not match graph")
    n = graph.node_count
    roots = [initial.find(i) for i in range(n)]
    sub = Partition(n)
    eu, ev = graph.endpoints
    for a, b in zip(eu.tolist(), ev.tolist()):
        if roots[a] == roots[b] and not sub.same(a, b):
            sub.merge(a, b)
    cluster_sizes: dict[int, int] = {}
    component_of: dict[int, int] = {}
    for i in range(n):
        r = roots[i]
        cluster_sizes[r] = cluster_sizes.get(r, 0) + 1
        c = sub.find(i)
        prev = component_of.setdefault(r, c)
        if prev != c:
            raise ValueError(
                f"initial cluster of node {r} does not induce a connected subgraph")


def gasp(graph: SignedGraph, options: GaspOptions,
         initial: Optional[Partition] = None) -> tuple[Partition, MergeLog]:
    """Run the agglomeration and return the final partition and its log.

    If ``initial`` is given, agglomeration starts from that clustering;
    statistics of parallel edges between initial clusters are pre-combined
    in ascending original-edge-id order.
    """
    n = graph.node_count
    m = graph.edge_count
    rule = options.rule
    add_clc = options.add_cannot_link_constraints
    local_only = options.enforce_local_merge
    revive = options.revive_retired
    logging = options.record_merge_log

    if initial is not None:
        _check_initial_partition(graph, initial)
        part = initial.copy()
    else:
        part = Partition(n)

    # Contracted-edge state, indexed by slot = minimal constituent edge id.
    val = graph.signed_weights().tolist()
    cnt = [1] * m
    loc = graph.is_local.tolist()
    ok = [True] * m
    tie = list(range(m))
    ea = [0] * m
    eb = [0] * m
    cons: list = [None] * m
    iters = np.full(m, NEVER_MERGED, dtype=np.uint32) if logging else None

    adj: list[dict[int, int]] = [{} for _ in range(n)]
    heap = AddressableMaxHeap()
    hpush = heap.push
    hdel = heap.delete

    eu = graph.endpoints[0].tolist()
    ev = graph.endpoints[1].tolist()

    initial_sizes: Optional[dict[int, int]] = None
    if initial is None:
        for e in range(m):
            a = eu[e]
            b = ev[e]
            ea[e] = a
            eb[e] = b
            adj[a][b] = e
            adj[b][a] = e
            if logging:
                cons[e] = [e]
            hpush(e, abs(val[e]), tie[e])
        sizes = [1] * n
    else:
        roots = [part.find(i) for i in range(n)]
        slots: list[int] = []
        for e in range(m):
            ra = roots[eu[e]]
            rb = roots[ev[e]]
            if ra == rb:
                if logging:
                    iters[e] = 0
                continue
            other = adj[ra].get(rb)
            if other is None:
                ea[e] = ra
                eb[e] = rb
                adj[ra][rb] = e
                adj[rb][ra] = e
                slots.append(e)
                if logging:
                    cons[e] = [e]
            else:
                # parallel edges fold in ascending id order; the earlier
                # (lower) slot always survives
                _combine_slots(other, e, rule, val, cnt, loc, ok, tie,
                               cons, False)
                if logging:
                    cons[other].append(e)
        for k in slots:
            hpush(k, abs(val[k]), tie[k])
        sizes = [0] * n
        for i in range(n):
            sizes[roots[i]] += 1
        initial_sizes = {r: sizes[r] for r in set(roots)}

    events: list[MergeEvent] = []
    pops = 0
    merges = 0
    repushes = 0

    while heap:
        k, _pri = heap.pop_highest()
        pops += 1
        v_k = val[k]
        if v_k > 0.0 and ok[k] and (loc[k] or not local_only):
            a = ea[k]
            b = eb[k]
            # survivor = denser endpoint; absorbed adjacency is the one walked
            if len(adj[a]) >= len(adj[b]):
                u, w = a, b
            else:
                u, w = b, a
            part.merge(a, b)
            merges += 1
            del adj[a][b]
            del adj[b][a]
            if logging:
                for e0 in cons[k]:
                    iters[e0] = pops
                cons[k] = None
            uadj = adj[u]
            for t, ekt in adj[w].items():
                del adj[t][w]
                was_live = hdel(ekt) is not None
                prev = uadj.get(t)
                if prev is None:
                    uadj[t] = ekt
                    adj[t][u] = ekt
                    ea[ekt] = u
                    eb[ekt] = t
                    if was_live:
                        hpush(ekt, abs(val[ekt]), tie[ekt])
                        repushes += 1
                else:
                    other_live = hdel(prev) is not None
                    knew = _combine_slots(prev, ekt, rule, val, cnt, loc,
                                          ok, tie, cons, logging)
                    uadj[t] = knew
                    adj[t][u] = knew
                    ea[knew] = u
                    eb[knew] = t
                    if revive or was_live or other_live:
                        hpush(knew, abs(val[knew]), tie[knew])
                        repushes += 1
            adj[w].clear()
            sizes[u] += sizes[w]
            events.append(MergeEvent(pops, u, w, v_k, sizes[u]))
        elif v_k <= 0.0 and add_clc:
            ok[k] = False

    log = MergeLog(events=events, edge_merge_iteration=iters, pops=pops,
                   merges=merges, repushes=repushes,
                   initial_cluster_sizes=initial_sizes)
    return part, log


def _combine_slots(ka: int, kb: int, rule: LinkageRule, val, cnt, loc, ok,
                   tie, cons, logging: bool) -> int:
    """Fold slot kb into the pair statistic, writing the lower slot.

    Mirrors :func:`gasp.linkage.combine`: operand order never changes the
    outcome, and absolute-maximum magnitude ties fall to the operand whose
    realizing constituent has the smaller id.
    """
    va = val[ka]
    vb = val[kb]
    if rule is LinkageRule.ABSMAX:
        aa = -va if va < 0 else va
        ab = -vb if vb < 0 else vb
        if aa > ab or (aa == ab and tie[ka] < tie[kb]):
            v, t = va, tie[ka]
        else:
            v, t = vb, tie[kb]
    else:
        if rule is LinkageRule.SUM:
            v = va + vb
        elif rule is LinkageRule.AVERAGE:
            ca = cnt[ka]
            cb = cnt[kb]
            v = (va * ca + vb * cb) / (ca + cb)
        elif rule is LinkageRule.MAX:
            v = va if va >= vb else vb
        else:
            v = va if va <= vb else vb
        t = tie[ka] if tie[ka] < tie[kb] else tie[kb]
    knew = ka if ka < kb else kb
    kold = kb if knew == ka else ka
    val[knew] = v
    tie[knew] = t
    cnt[knew] = cnt[ka] + cnt[kb]
    loc[knew] = loc[ka] or loc[kb]
    ok[knew] = ok[ka] and ok[kb]
    if logging:
        la = cons[ka]
        lb = cons[kb]
        if len(la) < len(lb):
            la, lb = lb, la
        la.extend(lb)
        cons[knew] = la
        cons[kold] = None
    return knew


def export_merge_tree(log: MergeLog, node_count: int) -> np.ndarray:
    """Linkage-matrix-style table: one row (a, b, interaction, size) per merge.

    Leaves are 0..node_count-1; the k-th merge creates cluster
    node_count + k, following the usual dendrogram numbering.
    """
    rows = np.empty((len(log.events), 4), dtype=np.float64)
    dendro: dict[int, int] = {}
    for k, ev in enumerate(log.events):
        a = dendro.get(ev.root_a, ev.root_a)
        b = dendro.get(ev.root_b, ev.root_b)
        rows[k] = (a, b, ev.value, ev.size)
        dendro[ev.root_a] = node_count + k
    return rows


def write_merge_log_csv(log: MergeLog, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "root_a", "root_b", "value", "size"])
        for ev in log.events:
            writer.writerow([ev.iteration, ev.root_a, ev.root_b,
                             repr(ev.value), ev.size])


def write_merge_iterations(log: MergeLog, path) -> None:
    """Raw little-endian uint32 per original edge; 0xFFFFFFFF = never merged."""
    if log.edge_merge_iteration is None:
        raise ValueError("run did not record a merge log")
    log.edge_merge_iteration.astype("<u4").tofile(path)
