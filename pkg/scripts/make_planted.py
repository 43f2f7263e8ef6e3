#!/usr/bin/env python3
"""Generate planted benchmark instances and report their headline numbers."""

import argparse

from gbs_dks import (
    charikar_greedy,
    exhaustive_best,
    induced_edge_count,
    planted_instance,
    write_graph,
    write_subset,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=6)
    ap.add_argument("--shuffle", action="store_true")
    ap.add_argument("--out", default="planted.txt")
    args = ap.parse_args()

    g, subset = planted_instance(args.seed, shuffle=args.shuffle)
    write_graph(g, args.out)
    write_subset(subset, args.out + ".planted")

    planted_edges = induced_edge_count(g, subset)
    greedy_edges = induced_edge_count(g, charikar_greedy(g, 10))
    _, optimum = exhaustive_best(g, 10)
    print(f"graph: {args.out} (n={g.n}, edges={g.edge_count()})")
    print(f"planted subset: {subset} with {planted_edges} edges")
    print(f"peeling baseline: {greedy_edges} edges; exhaustive optimum: {optimum}")


if __name__ == "__main__":
    main()
