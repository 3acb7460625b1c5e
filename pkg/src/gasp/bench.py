"""Robustness benchmark grid: (rule, noise amount, long-range fraction,
sample) cells, each scored against ground truth.

Every cell derives its own seed from the grid coordinates through a
declared stable hash, so results do not depend on grid shape, execution
order, or worker count.  Cells run in a process pool capped by the
GASP_THREADS environment variable.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import GaspOptions, gasp
from .linkage import LinkageRule
from .metrics import adapted_rand, combined_score, variation_of_information
from .mutex import mutex_watershed
from .noise import NoiseSpec, bias_predictions, correlated_noise
from .seeding import mix64
from .volume import AffinityVolume, MappingSpec, build_grid_graph

__all__ = ["BenchSpec", "run_bench", "write_bench_csv", "CSV_FIELDS"]

CSV_FIELDS = ["rule", "K", "p_long", "sample", "vi_split", "vi_merge",
              "adapted_rand", "combined", "cluster_count", "runtime_ms"]


@dataclass(frozen=True)
class BenchSpec:
    rules: tuple[str, ...]
    k_grid: tuple[float, ...]
    p_long_grid: tuple[float, ...]
    samples: int
    direction: str = "under"
    seed: int = 0
    mapping: MappingSpec = field(default_factory=MappingSpec)
    noise_scales: tuple[float, float, float, float] = (2.0, 4.0, 8.0, 8.0)
    noise_octaves: int = 3
    noise_persistence: float = 0.5
    constraints: bool = False
    fast_absmax: bool = False
    ignore_label: int | None = 0


def _run_cell(args) -> dict:
    (data, offsets, gt, rule_name, k_value, p_long, sample, sub_seed,
     spec) = args
    vol = AffinityVolume(data, offsets)
    if k_value > 0:
        noise = correlated_noise(
            vol.data.shape,
            NoiseSpec(scales=spec.noise_scales, octaves=spec.noise_octaves,
                      persistence=spec.noise_persistence, seed=sub_seed))
        vol = bias_predictions(vol, noise, k_value, spec.direction)
    graph, _ = build_grid_graph(vol, spec.mapping, p_long=p_long,
                                seed=sub_seed)
    rule = LinkageRule.parse(rule_name)
    start = time.perf_counter()
    if spec.fast_absmax and rule is LinkageRule.ABSMAX and not spec.constraints:
        part = mutex_watershed(graph)
    else:
        part, _ = gasp(graph, GaspOptions(
            rule=rule, add_cannot_link_constraints=spec.constraints))
    runtime_ms = (time.perf_counter() - start) * 1000.0
    labels = part.labels()
    vi_split, vi_merge = variation_of_information(labels, gt,
                                                  spec.ignore_label)
    rand = adapted_rand(labels, gt, spec.ignore_label)
    return {
        "rule": rule_name,
        "K": k_value,
        "p_long": p_long,
        "sample": sample,
        "vi_split": vi_split,
        "vi_merge": vi_merge,
        "adapted_rand": rand,
        "combined": combined_score(vi_split, vi_merge, rand),
        "cluster_count": int(labels.max()) + 1,
        "runtime_ms": runtime_ms,
    }


def _worker_count() -> int:
    cap = os.environ.get("GASP_THREADS")
    if cap:
        return max(1, int(cap))
    return os.cpu_count() or 1


def run_bench(vol: AffinityVolume, gt: np.ndarray,
              spec: BenchSpec) -> list[dict]:
    """All per-sample rows plus per-cell median/p25/p75 aggregate rows."""
    gt = np.asarray(gt)
    if gt.shape != vol.shape:
        raise ValueError(
            f"ground truth shape {gt.shape} does not match volume {vol.shape}")
    tasks = []
    for ri, rule in enumerate(spec.rules):
        LinkageRule.parse(rule)
        for ki, k_value in enumerate(spec.k_grid):
            for pi, p_long in enumerate(spec.p_long_grid):
                for sample in range(spec.samples):
                    sub_seed = mix64(spec.seed, ri, ki, pi, sample)
                    tasks.append((vol.data, vol.offsets, gt, rule,
                                  float(k_value), float(p_long), sample,
                                  sub_seed, spec))
    workers = min(_worker_count(), len(tasks)) or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, tasks))
    else:
        results = [_run_cell(t) for t in tasks]

    rows: list[dict] = []
    by_cell: dict[tuple, list[dict]] = {}
    for row in results:
        by_cell.setdefault((row["rule"], row["K"], row["p_long"]),
                           []).append(row)
    metric_cols = ["vi_split", "vi_merge", "adapted_rand", "combined",
                   "cluster_count", "runtime_ms"]
    for rule in spec.rules:
        for k_value in spec.k_grid:
            for p_long in spec.p_long_grid:
                cell = by_cell[(rule, float(k_value), float(p_long))]
                cell.sort(key=lambda r: r["sample"])
                rows.extend(cell)
                for name, q in (("median", 50), ("p25", 25), ("p75", 75)):
                    agg = {"rule": rule, "K": float(k_value),
                           "p_long": float(p_long), "sample": name}
                    for col in metric_cols:
                        agg[col] = float(np.percentile(
                            [r[col] for r in cell], q))
                    rows.append(agg)
    return rows


def write_bench_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for row in rows:
            writer.writerow([
                row["rule"], repr(row["K"]), repr(row["p_long"]),
                row["sample"], repr(row["vi_split"]), repr(row["vi_merge"]),
                repr(row["adapted_rand"]), repr(row["combined"]),
                row["cluster_count"], f"{row['runtime_ms']:.3f}",
            ])
