"""Bipartite student–course network, its weighted course projection, and hub removal."""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping

from .ingest import Cohort


def edge_key(a: str, b: str) -> tuple[str, str]:
    if a == b:
        raise ValueError(f"self-loop on {a!r} is not a course-graph edge")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class BipartiteGraph:
    students: frozenset[str]
    courses: frozenset[str]
    edges: frozenset[tuple[str, str]]  # (student, course)

    def __post_init__(self):
        for s, c in self.edges:
            if s not in self.students or c not in self.courses:
                raise ValueError(f"edge ({s!r}, {c!r}) has an endpoint outside its node set")

    def courses_of(self) -> dict[str, set[str]]:
        out: dict[str, set[str]] = {s: set() for s in self.students}
        for s, c in self.edges:
            out[s].add(c)
        return out


@dataclass(frozen=True)
class CourseGraph:
    """Weighted undirected graph on course ids.

    ``edges`` maps canonical pairs ``(a, b)`` with ``a < b`` to a positive
    weight. Isolated nodes are kept in ``nodes``.
    """

    nodes: frozenset[str]
    edges: Mapping[tuple[str, str], float]
    _adj: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        edges = dict(self.edges)
        adj: dict[str, dict[str, float]] = {v: {} for v in self.nodes}
        for (a, b), w in edges.items():
            if a >= b:
                raise ValueError(f"edge key ({a!r}, {b!r}) is not canonical (need a < b)")
            if a not in adj or b not in adj:
                raise ValueError(f"edge ({a!r}, {b!r}) has an endpoint outside the node set")
            if not w > 0:
                raise ValueError(f"edge ({a!r}, {b!r}) has non-positive weight {w}")
            adj[a][b] = w
            adj[b][a] = w
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adj", adj)

    @classmethod
    def from_weighted_edges(cls, edges: Iterable[tuple[str, str, float]], nodes: Iterable[str] = ()) -> "CourseGraph":
        ns = set(nodes)
        es: dict[tuple[str, str], float] = {}
        for a, b, w in edges:
            ns.update((a, b))
            k = edge_key(a, b)
            es[k] = es.get(k, 0) + w
        return cls(frozenset(ns), es)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def neighbors(self, v: str) -> Mapping[str, float]:
        return self._adj[v]

    def weight(self, a: str, b: str) -> float:
        return self._adj[a].get(b, 0)

    def total_weight(self) -> float:
        return sum(self.edges.values())

    def mean_edge_weight(self) -> float:
        """Average weight over realized edges."""
        if not self.edges:
            raise ValueError("mean edge weight undefined for a graph with no edges")
        return self.total_weight() / len(self.edges)

    def strengths(self) -> dict[str, float]:
        return {v: sum(nb.values()) for v, nb in self._adj.items()}

    def subgraph(self, keep: Iterable[str]) -> "CourseGraph":
        keep = frozenset(keep) & self.nodes
        return CourseGraph(keep, {k: w for k, w in self.edges.items() if k[0] in keep and k[1] in keep})


@dataclass(frozen=True)
class AggregatedGraph(CourseGraph):
    """Course graph of super-nodes.

    ``self_loops[v]`` stores twice the internal weight the super-node
    replaces, i.e. the diagonal adjacency entry A_vv, so that strengths
    (which include it) are conserved under aggregation.
    """

    self_loops: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        loops = {v: w for v, w in dict(self.self_loops).items()}
        for v, w in loops.items():
            if v not in self.nodes or w < 0:
                raise ValueError(f"invalid self-loop {v!r}: {w}")
        object.__setattr__(self, "self_loops", loops)

    def strengths(self) -> dict[str, float]:
        s = super().strengths()
        for v, w in self.self_loops.items():
            s[v] += w
        return s


def build_bipartite(cohort: Cohort) -> BipartiteGraph:
    edges = frozenset((r.student_id, r.course_id) for r in cohort.records)
    return BipartiteGraph(cohort.students, cohort.courses, edges)


def project_weighted(bg: BipartiteGraph) -> CourseGraph:
    """One-mode projection onto courses; weight = number of shared students."""
    counts: Counter = Counter()
    for courses in bg.courses_of().values():
        counts.update(combinations(sorted(courses), 2))
    return CourseGraph(bg.courses, dict(counts))


def strength(g: CourseGraph, v: str) -> float:
    if v not in g.nodes:
        raise KeyError(f"course {v!r} not in graph")
    return g.strengths()[v] if isinstance(g, AggregatedGraph) else sum(g.neighbors(v).values())


def dd_threshold(g: CourseGraph) -> float:
    """Mean plus one population standard deviation of node strengths."""
    if g.n < 2:
        raise ValueError(f"hub detection needs at least 2 nodes, got {g.n}")
    values = list(g.strengths().values())
    mean = math.fsum(values) / len(values)
    std = math.sqrt(math.fsum((x - mean) ** 2 for x in values) / len(values))
    return mean + std


def detect_hubs_dd(g: CourseGraph) -> frozenset[str]:
    """Courses whose strength is at least one standard deviation above the mean."""
    threshold = dd_threshold(g)
    strengths = g.strengths()
    # relative slack so a node sitting exactly on the threshold is not lost to rounding in sqrt
    eps = 1e-12 * max(1.0, abs(threshold))
    return frozenset(v for v, s in strengths.items() if s >= threshold - eps)


def remove_nodes(g: CourseGraph, hubs: Iterable[str]) -> CourseGraph:
    hubs = frozenset(hubs)
    missing = hubs - g.nodes
    if missing:
        warnings.warn(f"{len(missing)} hub id(s) not in graph, ignored: {sorted(missing)}", stacklevel=2)
    return g.subgraph(g.nodes - hubs)


def read_course_list(path: str | Path) -> list[str]:
    """Read a one-course-per-line file; ``#`` starts a comment."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out
