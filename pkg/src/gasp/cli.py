"""Command-line interface.

Subcommands: build (affinities -> graph), run (partition a graph),
eval (score two label volumes), perturb (noisy affinities), bench
(robustness sweep to CSV), oracle-check (randomized engine validation).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as gio
from .engine import (GaspOptions, gasp, write_merge_iterations,
                     write_merge_log_csv)
from .bench import BenchSpec, run_bench, write_bench_csv
from .linkage import LinkageRule
from .metrics import adapted_rand, combined_score, variation_of_information
from .mutex import mutex_watershed
from .noise import NoiseSpec, bias_predictions, correlated_noise
from .oracle import gasp_reference, hac_reference
from .synthetic import random_signed_graph
from .volume import (AffinityVolume, MappingSpec, build_grid_graph,
                     filter_small_segments, premerge_components)

RULES = [r.value for r in LinkageRule]


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _mapping_from_args(args) -> MappingSpec:
    mode = "logarithmic" if args.mapping == "log" else args.mapping
    return MappingSpec(mode=mode, beta=args.beta)


def _add_mapping_args(parser) -> None:
    parser.add_argument("--mapping", choices=["additive", "log"],
                        default="additive", help="affinity-to-weight mapping")
    parser.add_argument("--beta", type=float, default=0.5,
                        help="bias toward splitting (default 0.5)")


def _ignore_label(text: str):
    return None if text.lower() == "none" else int(text)


def cmd_build(args) -> int:
    data, offsets = gio.read_aff(args.affinities)
    vol = AffinityVolume(data, offsets)
    graph, _ = build_grid_graph(vol, _mapping_from_args(args),
                                p_long=args.p_long, seed=args.seed)
    gio.write_sgr(graph, args.out)
    print(f"wrote {args.out}: {graph.node_count} nodes, "
          f"{graph.edge_count} edges")
    return 0


def cmd_run(args) -> int:
    rule = LinkageRule.parse(args.rule)
    if args.fast:
        if rule is not LinkageRule.ABSMAX:
            raise ValueError("--fast requires --rule absmax")
        if args.premerge is not None or args.local_merge or args.merge_log \
                or args.merge_iterations:
            raise ValueError("--fast supports plain runs only")

    fmt = gio.sniff_format(args.graph)
    vol = None
    if fmt == "aff":
        data, offsets = gio.read_aff(args.graph)
        vol = AffinityVolume(data, offsets)
        graph, _ = build_grid_graph(vol, _mapping_from_args(args),
                                    p_long=args.p_long, seed=args.seed)
        shape = vol.shape
    elif fmt == "sgr":
        graph = gio.read_sgr(args.graph)
        shape = (1, 1, graph.node_count)
    else:
        raise ValueError(f"{args.graph}: expected an SGR graph or AFF volume")

    initial = None
    if args.premerge is not None:
        if vol is None:
            raise ValueError("--premerge needs affinity input, not a graph file")
        initial = premerge_components(vol, args.premerge)

    if args.fast:
        part = mutex_watershed(graph)
        log = None
    else:
        options = GaspOptions(
            rule=rule,
            add_cannot_link_constraints=args.constraints,
            enforce_local_merge=args.local_merge,
            record_merge_log=args.merge_iterations is not None)
        part, log = gasp(graph, options, initial)

    labels = part.labels()
    if args.min_size is not None:
        labels = filter_small_segments(labels, graph, args.min_size)
    gio.write_labels(labels.reshape(shape).astype(np.uint32), args.out)
    if args.merge_log:
        write_merge_log_csv(log, args.merge_log)
    if args.merge_iterations:
        write_merge_iterations(log, args.merge_iterations)
    print(f"wrote {args.out}: {int(labels.max()) + 1} clusters")
    return 0


def cmd_eval(args) -> int:
    seg = gio.read_labels(args.seg)
    gt = gio.read_labels(args.gt)
    vi_split, vi_merge = variation_of_information(seg, gt, args.ignore_label)
    rand = adapted_rand(seg, gt, args.ignore_label)
    print(json.dumps({
        "vi_split": vi_split,
        "vi_merge": vi_merge,
        "adapted_rand": rand,
        "combined": combined_score(vi_split, vi_merge, rand),
    }, sort_keys=True))
    return 0


def cmd_perturb(args) -> int:
    data, offsets = gio.read_aff(args.affinities)
    vol = AffinityVolume(data, offsets)
    spec = NoiseSpec(scales=tuple(args.scales), octaves=args.octaves,
                     persistence=args.persistence, seed=args.seed)
    noise = correlated_noise(vol.data.shape, spec)
    out = bias_predictions(vol, noise, args.K, args.direction)
    gio.write_aff(out.data, out.offsets, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_bench(args) -> int:
    data, offsets = gio.read_aff(args.affinities)
    vol = AffinityVolume(data, offsets)
    gt = gio.read_labels(args.gt)
    for rule in args.rules.split(","):
        LinkageRule.parse(rule)
    spec = BenchSpec(
        rules=tuple(r.strip().lower() for r in args.rules.split(",")),
        k_grid=tuple(_float_list(args.K_grid)),
        p_long_grid=tuple(_float_list(args.p_long)),
        samples=args.samples,
        direction=args.direction,
        seed=args.seed,
        mapping=_mapping_from_args(args),
        noise_scales=tuple(args.scales),
        constraints=args.constraints,
        fast_absmax=args.fast,
        ignore_label=args.ignore_label,
    )
    rows = run_bench(vol, gt, spec)
    write_bench_csv(rows, args.out)
    print(f"wrote {args.out}: {len(rows)} rows")
    return 0


def cmd_oracle_check(args) -> int:
    variants = [GaspOptions(rule=r, add_cannot_link_constraints=clc)
                for r in LinkageRule for clc in (False, True)]
    divergences = 0
    for g in range(args.n_graphs):
        seed = args.seed + g
        graph = random_signed_graph(seed, max_nodes=args.max_nodes,
                                    tie_heavy=(g % 2 == 0),
                                    all_positive=args.all_positive,
                                    connected=args.all_positive)
        if args.all_positive:
            opts = GaspOptions(rule=LinkageRule.AVERAGE,
                               record_merge_log=True)
            _, log = gasp(graph, opts)
            ref = hac_reference(graph, LinkageRule.AVERAGE)
            mine = [(e.root_a, e.root_b) for e in log.events]
            theirs = [(e.root_a, e.root_b) for e in ref.events]
            if mine != theirs:
                divergences += 1
                print(f"divergence: graph {seed} merge order vs reference")
                print(f"  engine:    {log.events}")
                print(f"  reference: {ref.events}")
            continue
        for opts in variants:
            part_a, log_a = gasp(graph, opts)
            part_b, log_b = gasp_reference(graph, opts)
            if not np.array_equal(part_a.labels(), part_b.labels()):
                divergences += 1
                print(f"divergence: graph {seed} rule={opts.rule.value} "
                      f"constraints={opts.add_cannot_link_constraints}")
                print(f"  engine merges:    {log_a.events}")
                print(f"  reference merges: {log_b.events}")
        mws = mutex_watershed(graph)
        absmax_clc, log_c = gasp(graph, GaspOptions(
            rule=LinkageRule.ABSMAX, add_cannot_link_constraints=True))
        absmax_plain, log_p = gasp(graph, GaspOptions(rule=LinkageRule.ABSMAX))
        if not np.array_equal(mws.labels(), absmax_clc.labels()):
            divergences += 1
            print(f"divergence: graph {seed} mutex watershed vs "
                  f"constrained absmax")
            print(f"  constrained absmax merges: {log_c.events}")
        if not np.array_equal(absmax_clc.labels(), absmax_plain.labels()):
            divergences += 1
            print(f"divergence: graph {seed} absmax with vs without "
                  f"constraints")
            print(f"  constrained:   {log_c.events}")
            print(f"  unconstrained: {log_p.events}")
    checks = args.n_graphs * (1 if args.all_positive else len(variants) + 2)
    print(f"{args.n_graphs} graphs, {checks} checks, "
          f"{divergences} divergences")
    return 0 if divergences == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gasp",
        description="Signed-graph agglomerative partitioning toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a grid graph from affinities")
    p.add_argument("--affinities", required=True)
    _add_mapping_args(p)
    p.add_argument("--p-long", type=float, default=1.0,
                   help="fraction of long-range edges to keep")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("run", help="partition a graph or affinity volume")
    p.add_argument("--graph", required=True,
                   help="SGR graph, or AFF volume for an inline build")
    p.add_argument("--rule", choices=RULES, required=True)
    p.add_argument("--constraints", action="store_true",
                   help="add cannot-link constraints")
    p.add_argument("--local-merge", action="store_true",
                   help="merge only through grid-adjacent edges")
    p.add_argument("--fast", action="store_true",
                   help="single-pass solver (absmax only)")
    p.add_argument("--premerge", type=float, default=None, metavar="THETA",
                   help="pre-merge connected components above this mean affinity")
    p.add_argument("--min-size", type=int, default=None,
                   help="dissolve clusters smaller than this many nodes")
    _add_mapping_args(p)
    p.add_argument("--p-long", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="label volume output")
    p.add_argument("--merge-log", default=None, help="merge event CSV")
    p.add_argument("--merge-iterations", default=None,
                   help="per-edge merge iteration map (raw uint32)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", help="score a segmentation against ground truth")
    p.add_argument("--seg", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--ignore-label", type=_ignore_label, default=0,
                   help="ground-truth label to exclude ('none' to keep all)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("perturb", help="bias affinities with correlated noise")
    p.add_argument("--affinities", required=True)
    p.add_argument("--K", type=float, required=True, help="noise amount")
    p.add_argument("--direction", choices=["under", "over"], required=True)
    p.add_argument("--scales", type=_float_list, default=[2.0, 4.0, 8.0, 8.0],
                   help="noise lattice spacing per axis: C,Z,Y,X")
    p.add_argument("--octaves", type=int, default=3)
    p.add_argument("--persistence", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("bench", help="robustness sweep, one CSV row per run")
    p.add_argument("--affinities", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--rules", required=True, help="comma-separated rule list")
    p.add_argument("--K-grid", required=True, dest="K_grid",
                   help="comma-separated noise amounts")
    p.add_argument("--direction", choices=["under", "over"], default="under")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--p-long", required=True, dest="p_long",
                   help="comma-separated long-range fractions")
    p.add_argument("--seed", type=int, default=0)
    _add_mapping_args(p)
    p.add_argument("--scales", type=_float_list, default=[2.0, 4.0, 8.0, 8.0])
    p.add_argument("--constraints", action="store_true")
    p.add_argument("--fast", action="store_true",
                   help="use the single-pass solver for unconstrained absmax")
    p.add_argument("--ignore-label", type=_ignore_label, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle-check",
                       help="randomized engine-vs-reference validation")
    p.add_argument("--n-graphs", type=int, default=200)
    p.add_argument("--max-nodes", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--all-positive", action="store_true",
                   help="check merge order against classic agglomeration")
    p.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
