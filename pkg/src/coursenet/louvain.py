"""Weighted Louvain community detection.

Phase 1 sweeps the nodes in a seeded random order, moving each into the
neighbouring community with the largest strictly positive modularity gain.
Phase 2 collapses communities into super-nodes (internal weight kept as a
self-loop) and the two phases repeat on the smaller graph.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .netcore import AggregatedGraph, CourseGraph


@dataclass(frozen=True)
class Partition:
    """Course → community id, ids dense in ``0..k-1``."""

    assignment: Mapping[str, int]

    def __post_init__(self):
        assignment = dict(self.assignment)
        ids = set(assignment.values())
        if ids != set(range(len(ids))):
            raise ValueError(f"community ids must be contiguous 0..k-1, got {sorted(ids)}")
        object.__setattr__(self, "assignment", assignment)

    @classmethod
    def from_labels(cls, labels: Mapping[str, object]) -> "Partition":
        """Renumber arbitrary labels canonically: by first appearance over sorted nodes."""
        remap: dict[object, int] = {}
        out = {}
        for v in sorted(labels):
            out[v] = remap.setdefault(labels[v], len(remap))
        return cls(out)

    @classmethod
    def from_communities(cls, communities: Iterable[Iterable[str]]) -> "Partition":
        labels = {}
        for i, members in enumerate(communities):
            for v in members:
                if v in labels:
                    raise ValueError(f"node {v!r} appears in more than one community")
                labels[v] = i
        return cls.from_labels(labels)

    @classmethod
    def singletons(cls, nodes: Iterable[str]) -> "Partition":
        return cls.from_labels({v: v for v in nodes})

    @classmethod
    def whole(cls, nodes: Iterable[str]) -> "Partition":
        return cls({v: 0 for v in nodes})

    @property
    def k(self) -> int:
        return len(set(self.assignment.values()))

    def communities(self) -> list[frozenset[str]]:
        out: list[set[str]] = [set() for _ in range(self.k)]
        for v, c in self.assignment.items():
            out[c].add(v)
        return [frozenset(s) for s in out]


@dataclass(frozen=True)
class LouvainConfig:
    seed: int = 42
    min_modularity_gain: float = 1e-7
    max_passes: int = 100  # cap on aggregation levels

    def __post_init__(self):
        if self.min_modularity_gain < 0:
            raise ValueError("min_modularity_gain must be >= 0")
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")


@dataclass
class Move:
    level: int
    node: int
    source: int
    target: int
    gain: float
    q_before: Optional[float] = None
    q_after: Optional[float] = None


@dataclass
class LouvainResult:
    partition: Partition
    modularity: Optional[float]
    history: list[float] = field(default_factory=list)  # modularity at the end of every sweep
    levels: int = 0
    moves: list[Move] = field(default_factory=list)


class _Level:
    """Integer-indexed weighted graph with self-loops (diagonal entries)."""

    def __init__(self, adj: list[dict[int, float]], loops: list[float]):
        self.adj = adj
        self.loops = loops
        self.n = len(adj)
        self.k = [loops[i] + sum(adj[i].values()) for i in range(self.n)]
        self.two_m = math.fsum(self.k)

    @classmethod
    def from_graph(cls, g: CourseGraph) -> tuple["_Level", list[str]]:
        names = sorted(g.nodes)
        index = {v: i for i, v in enumerate(names)}
        adj: list[dict[int, float]] = [{} for _ in names]
        for (a, b), w in g.edges.items():
            adj[index[a]][index[b]] = float(w)
            adj[index[b]][index[a]] = float(w)
        loops = [0.0] * len(names)
        if isinstance(g, AggregatedGraph):
            for v, w in g.self_loops.items():
                loops[index[v]] = float(w)
        return cls(adj, loops), names

    def modularity(self, comm: list[int]) -> float:
        inside: dict[int, float] = {}
        tot: dict[int, float] = {}
        for i in range(self.n):
            c = comm[i]
            tot[c] = tot.get(c, 0.0) + self.k[i]
            s = self.loops[i] + sum(w for j, w in self.adj[i].items() if comm[j] == c)
            inside[c] = inside.get(c, 0.0) + s
        m2 = self.two_m
        return math.fsum(inside[c] / m2 - (tot[c] / m2) ** 2 for c in tot)

    def aggregate(self, comm: list[int]) -> "_Level":
        kc = max(comm) + 1
        adj: list[dict[int, float]] = [{} for _ in range(kc)]
        loops = [0.0] * kc
        for i in range(self.n):
            ci = comm[i]
            loops[ci] += self.loops[i]
            for j, w in self.adj[i].items():
                cj = comm[j]
                if ci == cj:
                    loops[ci] += w  # each internal edge is seen from both ends: A_ij + A_ji
                else:
                    adj[ci][cj] = adj[ci].get(cj, 0.0) + w
        return _Level(adj, loops)


def _renumber(comm: list[int]) -> list[int]:
    remap: dict[int, int] = {}
    return [remap.setdefault(c, len(remap)) for c in comm]


def _local_moves(level: _Level, rng: random.Random, min_gain: float, depth: int,
                 history: list[float], moves: Optional[list[Move]]) -> tuple[list[int], bool]:
    n, adj, k = level.n, level.adj, level.k
    m2 = level.two_m
    m = m2 / 2
    comm = list(range(n))
    tot = list(k)
    improved = False
    order = list(range(n))
    while True:
        rng.shuffle(order)
        moved = 0
        for i in order:
            ci = comm[i]
            links: dict[int, float] = {}
            for j, w in adj[i].items():
                links[comm[j]] = links.get(comm[j], 0.0) + w
            tot[ci] -= k[i]
            # gain of inserting i into c, relative to i standing alone; scaled to modularity units
            def gain(c: int) -> float:
                return (links.get(c, 0.0) - tot[c] * k[i] / m2) / m

            stay = gain(ci)
            best, best_gain = ci, stay
            for c in sorted(links):
                if c == ci:
                    continue
                g = gain(c)
                if g > best_gain or (g == best_gain and best != ci and c < best):
                    best, best_gain = c, g
            if best != ci and best_gain - stay > min_gain:
                q_before = level.modularity(comm) if moves is not None else None
                comm[i] = best
                tot[best] += k[i]
                moved += 1
                if moves is not None:
                    moves.append(Move(depth, i, ci, best, best_gain - stay, q_before, level.modularity(comm)))
            else:
                tot[ci] += k[i]
        history.append(level.modularity(comm))
        if not moved:
            break
        improved = True
    return _renumber(comm), improved


def louvain(g: CourseGraph, cfg: LouvainConfig = LouvainConfig(), record_moves: bool = False) -> LouvainResult:
    """Run weighted Louvain and return the partition with its modularity trace."""
    if g.n == 0:
        raise ValueError("cannot partition an empty graph")
    level, names = _Level.from_graph(g)
    if level.two_m == 0:
        # no edges: every node stays a singleton and modularity is undefined
        return LouvainResult(Partition.singletons(names), None)
    rng = random.Random(cfg.seed)
    history: list[float] = [level.modularity(list(range(level.n)))]
    moves: Optional[list[Move]] = [] if record_moves else None
    membership = list(range(level.n))  # original node -> current super-node
    levels = 0
    for depth in range(cfg.max_passes):
        comm, improved = _local_moves(level, rng, cfg.min_modularity_gain, depth, history, moves)
        levels = depth + 1
        membership = [comm[c] for c in membership]
        if not improved:
            break
        level = level.aggregate(comm)
    part = Partition.from_labels({names[i]: membership[i] for i in range(len(names))})
    return LouvainResult(part, history[-1], history, levels, moves or [])


def louvain_partition(g: CourseGraph, cfg: LouvainConfig = LouvainConfig()) -> Partition:
    return louvain(g, cfg).partition


def modularity(g: CourseGraph, p: Partition) -> float:
    """Newman modularity of ``p`` on ``g`` (resolution 1), self-loops included."""
    if set(p.assignment) != set(g.nodes):
        raise ValueError("partition does not cover exactly the graph's nodes")
    level, names = _Level.from_graph(g)
    if level.two_m == 0:
        raise ValueError("modularity undefined for a graph with zero total weight")
    return level.modularity([p.assignment[v] for v in names])


def aggregate(g: CourseGraph, p: Partition) -> tuple[AggregatedGraph, dict[str, str]]:
    """Collapse each community into a super-node named ``"c<id>"``.

    Returns the aggregated graph and the original-node → super-node mapping.
    """
    if set(p.assignment) != set(g.nodes):
        raise ValueError("partition does not cover exactly the graph's nodes")
    width = len(str(max(p.k - 1, 0)))
    name = {c: f"c{c:0{width}d}" for c in range(p.k)}
    mapping = {v: name[c] for v, c in p.assignment.items()}
    edges: dict[tuple[str, str], float] = {}
    loops = {s: 0.0 for s in name.values()}
    if isinstance(g, AggregatedGraph):
        for v, w in g.self_loops.items():
            loops[mapping[v]] += w
    for (a, b), w in g.edges.items():
        sa, sb = mapping[a], mapping[b]
        if sa == sb:
            loops[sa] += 2 * w
        else:
            key = (sa, sb) if sa < sb else (sb, sa)
            edges[key] = edges.get(key, 0) + w
    return AggregatedGraph(frozenset(name.values()), edges, loops), mapping


def refine_communities(g: CourseGraph, p: Partition, guard: float,
                       cfg: LouvainConfig = LouvainConfig(), depth: int = 1) -> Partition:
    """Re-run Louvain inside each community, keeping splits that do not weaken it.

    A split is accepted only if every child's inter/intra ratio, measured in
    the full graph ``g``, is defined, at most ``guard`` and at most the
    parent's ratio (the last check is skipped when the parent's ratio is
    undefined, e.g. a community spanning all of ``g``). Accepted children are
    refined again while ``depth`` allows.
    """
    if guard < 0:
        raise ValueError(f"guard must be >= 0, got {guard}")
    if set(p.assignment) != set(g.nodes):
        raise ValueError("partition does not cover exactly the graph's nodes")
    if depth < 1 or not g.edges:
        return p
    out: list[frozenset[str]] = []
    for members in p.communities():
        out.extend(_refine_one(g, members, guard, cfg, depth))
    return Partition.from_communities(out)


def _refine_one(g: CourseGraph, members: frozenset[str], guard: float,
                cfg: LouvainConfig, depth: int) -> list[frozenset[str]]:
    from .validation import community_strength

    sub = g.subgraph(members)
    if depth < 1 or len(members) < 2 or not sub.edges:
        return [members]
    children = louvain_partition(sub, cfg).communities()
    if len(children) < 2:
        return [members]
    parent_ratio = community_strength(g, members).ratio
    for child in children:
        r = community_strength(g, child).ratio
        if r is None or r > guard or (parent_ratio is not None and r > parent_ratio):
            return [members]
    return [c for child in children for c in _refine_one(g, child, guard, cfg, depth - 1)]
