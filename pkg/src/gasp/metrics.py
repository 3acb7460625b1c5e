"""Segmentation scoring: variation of information, adapted Rand, the
combined benchmark score, and the signed cut objective.

The information-theoretic scores are computed from a sparse contingency
table between the two labelings.  By convention ground-truth label 0 is
excluded as unannotated background; pass ``ignore_label=None`` to score
every element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import SignedGraph

__all__ = [
    "ContingencyTable",
    "variation_of_information",
    "adapted_rand",
    "combined_score",
    "signed_cut_cost",
]


@dataclass(frozen=True)
class ContingencyTable:
    """Sparse joint label counts with marginals."""

    rows: np.ndarray          # segmentation label index per nonzero cell
    cols: np.ndarray          # ground-truth label index per nonzero cell
    counts: np.ndarray
    seg_marginals: np.ndarray
    gt_marginals: np.ndarray
    total: int

    @classmethod
    def from_labels(cls, seg, gt, ignore_label: Optional[int] = 0
                    ) -> "ContingencyTable":
        seg = np.asarray(seg).ravel()
        gt = np.asarray(gt).ravel()
        if seg.shape != gt.shape:
            raise ValueError("segmentation and ground truth shapes differ")
        if ignore_label is not None:
            keep = gt != ignore_label
            seg = seg[keep]
            gt = gt[keep]
        if seg.size == 0:
            raise ValueError("no elements left to score after ignore mask")
        _, seg_idx = np.unique(seg, return_inverse=True)
        gt_vals, gt_idx = np.unique(gt, return_inverse=True)
        n_gt = gt_vals.shape[0]
        codes = seg_idx.astype(np.int64) * n_gt + gt_idx
        uniq, counts = np.unique(codes, return_counts=True)
        rows = uniq // n_gt
        cols = uniq % n_gt
        seg_marginals = np.bincount(rows, weights=counts)
        gt_marginals = np.bincount(cols, weights=counts)
        return cls(rows, cols, counts.astype(np.float64), seg_marginals,
                   gt_marginals, int(seg.size))


def variation_of_information(seg, gt, ignore_label: Optional[int] = 0
                             ) -> tuple[float, float]:
    """(vi_split, vi_merge): conditional entropies H(seg|gt) and H(gt|seg).

    vi_split grows with over-segmentation, vi_merge with
    under-segmentation.  Natural logarithm.
    """
    table = ContingencyTable.from_labels(seg, gt, ignore_label)
    p = table.counts / table.total
    p_seg = table.seg_marginals[table.rows] / table.total
    p_gt = table.gt_marginals[table.cols] / table.total
    vi_split = float(-np.sum(p * np.log(p / p_gt)))
    vi_merge = float(-np.sum(p * np.log(p / p_seg)))
    return vi_split, vi_merge


def adapted_rand(seg, gt, ignore_label: Optional[int] = 0) -> float:
    """Pair-counting F-score between a segmentation and ground truth."""
    table = ContingencyTable.from_labels(seg, gt, ignore_label)
    sum_sq = float(np.sum(table.counts ** 2))
    precision = sum_sq / float(np.sum(table.seg_marginals ** 2))
    recall = sum_sq / float(np.sum(table.gt_marginals ** 2))
    return 2.0 * precision * recall / (precision + recall)


def combined_score(vi_split: float, vi_merge: float,
                   rand_score: float) -> float:
    """Single benchmark number; lower is better, 0 for a perfect match.

    Geometric mean of the summed conditional entropies and the Rand
    error.  Used only for relative ranking.
    """
    return math.sqrt((vi_split + vi_merge) * (1.0 - rand_score))


def signed_cut_cost(graph: SignedGraph, labels) -> float:
    """Sum of signed weights over edges cut by a labeling."""
    flat = np.asarray(labels).ravel()
    if flat.shape[0] != graph.node_count:
        raise ValueError("label array length must equal node count")
    eu, ev = graph.endpoints
    cut = flat[eu] != flat[ev]
    return float(np.sum(graph.signed_weights()[cut]))
