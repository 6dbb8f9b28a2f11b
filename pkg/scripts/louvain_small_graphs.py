"""Louvain against exhaustive modularity optimisation on small random connected graphs.

Also runs the networkx implementation on the same graphs and seeds for reference.
"""

import argparse
import random

import networkx as nx
from networkx.algorithms.community import louvain_communities

from coursenet.louvain import LouvainConfig, Partition, louvain, modularity
from coursenet.netcore import CourseGraph


def set_partitions(items):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield [[head]] + p
        for i in range(len(p)):
            yield p[:i] + [[head] + p[i]] + p[i + 1:]


def random_connected(rng, n, extra_p=0.4, wmax=5):
    nodes = [f"v{i}" for i in range(n)]
    edges = [(nodes[rng.randrange(i)], nodes[i], rng.randint(1, wmax)) for i in range(1, n)]
    have = {(a, b) for a, b, _ in edges}
    edges += [(a, b, rng.randint(1, wmax)) for i, a in enumerate(nodes) for b in nodes[i + 1:]
              if (a, b) not in have and rng.random() < extra_p]
    return CourseGraph.from_weighted_edges(edges)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graphs", type=int, default=50)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--max-nodes", type=int, default=7)
    ap.add_argument("--bound", type=float, default=0.95)
    args = ap.parse_args()

    rng = random.Random(0)
    runs = optimal = below = nx_optimal = nx_below = 0
    for _ in range(args.graphs):
        g = random_connected(rng, rng.randint(3, args.max_nodes))
        best = max(modularity(g, Partition.from_communities(p)) for p in set_partitions(sorted(g.nodes)))
        G = nx.Graph()
        G.add_weighted_edges_from((a, b, w) for (a, b), w in g.edges.items())
        for s in range(args.seeds):
            q = louvain(g, LouvainConfig(seed=s)).modularity
            q_nx = modularity(g, Partition.from_communities(louvain_communities(G, seed=s, threshold=1e-12)))
            runs += 1
            optimal += q >= best - 1e-9
            below += q < args.bound * best - 1e-12
            nx_optimal += q_nx >= best - 1e-9
            nx_below += q_nx < args.bound * best - 1e-12
    print(f"{runs} runs ({args.graphs} graphs x {args.seeds} seeds)")
    print(f"coursenet: optimum {optimal / runs:.3f}, below {args.bound} x optimum {below / runs:.3f}")
    print(f"networkx : optimum {nx_optimal / runs:.3f}, below {args.bound} x optimum {nx_below / runs:.3f}")


if __name__ == "__main__":
    main()
