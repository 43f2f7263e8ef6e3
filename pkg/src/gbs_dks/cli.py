"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 enumeration-budget refusal,
3 file I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from itertools import islice

import numpy as np

from .errors import BudgetExceededError, InputError
from .graph import planted_instance, read_graph, write_graph, write_subset
from .harness import emit_outputs, fig1_sweep, fig3_compare, load_config
from .hafnian import hafnian_fast
from .optimize import (
    AnnealParams,
    charikar_greedy,
    exhaustive_best,
    random_search,
    simulated_annealing,
)
from .sampler import (
    MisParams,
    gbs_explore,
    gbs_explore_odd,
    get_weight_table,
    make_explorer,
    make_tweaker,
    mis_sample,
    uniform_explore,
)


def _read_matrix(path) -> np.ndarray:
    rows = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([int(tok) for tok in line.split()])
            except ValueError:
                raise InputError(f"{path}: line {lineno}: non-integer entry")
    if not rows:
        raise InputError(f"{path}: empty matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows) or len(rows) != width:
        raise InputError(f"{path}: matrix must be square")
    m = np.array(rows, dtype=np.int64)
    if not np.array_equal(m, m.T):
        raise InputError(f"{path}: matrix must be symmetric")
    if not np.isin(m, (0, 1)).all():
        raise InputError(f"{path}: entries must be 0 or 1")
    return m


def _result_record(command, subset, g, trace=None, extra=None, wall=None):
    record = {
        "command": command,
        "subset": list(subset),
        "edge_count": g.subgraph(subset).edge_count(),
        "density": g.subgraph(subset).density(),
        "trace": None if trace is None else trace.best_edges,
        "fallback_events": {} if trace is None else trace.fallback_events,
        "wall_time_s": wall,
    }
    if extra:
        record.update(extra)
    return record


def _cmd_hafnian(args) -> int:
    print(hafnian_fast(_read_matrix(args.matrix)))
    return 0


def _cmd_sample(args) -> int:
    g = read_graph(args.graph)
    rng = np.random.default_rng(args.seed)
    if args.method == "uniform":
        draws = (uniform_explore(g, args.k, rng) for _ in range(args.samples))
    elif args.method == "gbs":
        if args.k % 2:
            draws = (
                gbs_explore_odd(g, args.k, rng, cache_dir=args.cache_dir)
                for _ in range(args.samples)
            )
        else:
            table = get_weight_table(g, args.k, cache_dir=args.cache_dir)
            draws = (gbs_explore(table, rng) for _ in range(args.samples))
    else:
        params = MisParams(burn_in=args.burn_in, thinning=args.thinning)
        draws = islice(mis_sample(g, args.k, params, rng), args.samples)
    for s in draws:
        print(" ".join(map(str, s)))
    return 0


def _cmd_search(args) -> int:
    g = read_graph(args.graph)
    rng = np.random.default_rng(args.seed)
    explorer = make_explorer(args.method, g, args.k)
    start = time.perf_counter()
    trace = random_search(g, args.k, args.samples, explorer, rng)
    wall = time.perf_counter() - start
    record = _result_record(
        "search", trace.final_subset, g, trace,
        extra={"method": args.method, "seed": args.seed}, wall=wall,
    )
    print(json.dumps(record))
    return 0


def _cmd_anneal(args) -> int:
    g = read_graph(args.graph)
    rng = np.random.default_rng(args.seed)
    params = AnnealParams(t0=args.t0, steps=args.steps, min_keep=args.l, floor=args.floor)
    explorer = make_explorer(args.explore, g, args.k)
    tweaker = make_tweaker(args.tweak, g, args.k, params.min_keep)
    start = time.perf_counter()
    trace = simulated_annealing(g, args.k, params, explorer, tweaker, rng)
    wall = time.perf_counter() - start
    record = _result_record(
        "anneal", trace.final_subset, g, trace,
        extra={"explore": args.explore, "tweak": args.tweak, "seed": args.seed},
        wall=wall,
    )
    print(json.dumps(record))
    return 0


def _cmd_greedy(args) -> int:
    g = read_graph(args.graph)
    start = time.perf_counter()
    subset = charikar_greedy(g, args.k)
    wall = time.perf_counter() - start
    print(json.dumps(_result_record("greedy", subset, g, wall=wall)))
    return 0


def _cmd_exhaustive(args) -> int:
    g = read_graph(args.graph)
    start = time.perf_counter()
    subset, count = exhaustive_best(g, args.k)
    wall = time.perf_counter() - start
    record = _result_record("exhaustive", subset, g, wall=wall)
    assert record["edge_count"] == count
    print(json.dumps(record))
    return 0


def _cmd_fig1(args) -> int:
    result = fig1_sweep(k=args.k, graphs_per_prob=args.per_p, seed=args.seed)
    for fmt in ("csv", "json", "svg"):
        for path in emit_outputs(result, fmt, args.out):
            print(path)
    return 0


def _cmd_fig3(args) -> int:
    cfg = load_config(args.config)
    if args.out is not None:
        import dataclasses

        cfg = dataclasses.replace(cfg, out_dir=args.out)
    result = fig3_compare(cfg)
    for fmt in ("csv", "json", "svg"):
        for path in emit_outputs(result, fmt, cfg.out_dir):
            print(path)
    return 0


def _cmd_generate(args) -> int:
    if not args.planted:
        raise InputError("only --planted generation is available")
    g, subset = planted_instance(args.seed, shuffle=args.shuffle)
    write_graph(g, args.out)
    subset_path = str(args.out) + ".planted"
    write_subset(subset, subset_path)
    print(json.dumps({
        "graph": str(args.out),
        "subset": subset_path,
        "fingerprint": g.fingerprint(),
        "planted_edges": g.subgraph(subset).edge_count(),
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbs-dks",
        description="Matching-count-proportional subgraph sampling and densest-k-subgraph search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hafnian", help="hafnian of a symmetric 0/1 matrix file")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=_cmd_hafnian)

    p = sub.add_parser("sample", help="draw vertex subsets from a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("gbs", "uniform", "mis"), default="gbs")
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=10_000)
    p.add_argument("--thinning", type=int, default=10)
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("search", help="random search for a dense k-subgraph")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--method", choices=("gbs", "uniform"), default="gbs")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("anneal", help="simulated annealing for a dense k-subgraph")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t0", type=float, default=0.01)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--l", type=int, default=6, help="minimum untweaked vertex count")
    p.add_argument("--floor", type=float, default=1e-12)
    p.add_argument("--explore", choices=("gbs", "uniform"), default="gbs")
    p.add_argument("--tweak", choices=("gbs", "uniform"), default="gbs")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_anneal)

    p = sub.add_parser("greedy", help="minimum-degree peeling baseline")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_greedy)

    p = sub.add_parser("exhaustive", help="exact optimum by enumeration")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_exhaustive)

    p = sub.add_parser("fig1", help="edge-count vs hafnian sweep over random graphs")
    p.add_argument("--k", type=int, default=16)
    p.add_argument("--per-p", type=int, default=600)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fig1)

    p = sub.add_parser("fig3", help="optimizer comparison from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_fig3)

    p = sub.add_parser("generate", help="write a benchmark instance to disk")
    p.add_argument("--planted", action="store_true")
    p.add_argument("--shuffle", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BudgetExceededError as e:
        print(f"refused: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
