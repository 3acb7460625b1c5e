"""Signed-graph agglomerative partitioning.

One generalized edge-contraction engine parameterized by linkage
criterion and optional cannot-link constraints, a single-pass mutex
watershed equivalent to the absolute-maximum variant, affinity-volume
ingestion, structured-noise perturbation, segmentation metrics, and a
benchmark harness.
"""

from .engine import (GaspOptions, MergeEvent, MergeLog, export_merge_tree,
                     gasp)
from .graph import (Partition, SignedEdge, SignedGraph, build_signed_graph,
                    signed_weight)
from .heap import AddressableMaxHeap
from .linkage import EdgeStat, LinkageRule, combine, init_stat, interaction_value
from .metrics import (adapted_rand, combined_score, signed_cut_cost,
                      variation_of_information)
from .mutex import mutex_watershed
from .noise import NoiseSpec, bias_predictions, correlated_noise
from .oracle import gasp_reference, hac_reference, table1_interaction
from .volume import (AffinityVolume, MappingSpec, OffsetSpec,
                     build_grid_graph, filter_small_segments, map_weight,
                     premerge_components)

__version__ = "0.1.0"

__all__ = [
    "AddressableMaxHeap",
    "AffinityVolume",
    "EdgeStat",
    "GaspOptions",
    "LinkageRule",
    "MappingSpec",
    "MergeEvent",
    "MergeLog",
    "NoiseSpec",
    "OffsetSpec",
    "Partition",
    "SignedEdge",
    "SignedGraph",
    "adapted_rand",
    "bias_predictions",
    "build_grid_graph",
    "build_signed_graph",
    "combine",
    "combined_score",
    "correlated_noise",
    "export_merge_tree",
    "filter_small_segments",
    "gasp",
    "gasp_reference",
    "hac_reference",
    "init_stat",
    "interaction_value",
    "map_weight",
    "mutex_watershed",
    "premerge_components",
    "signed_cut_cost",
    "signed_weight",
    "table1_interaction",
    "variation_of_information",
]
