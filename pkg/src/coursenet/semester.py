"""Directed semester network and the typical-student path."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Mapping, TextIO

from .ingest import Cohort

NodeKey = tuple[int, frozenset[str]]  # (ordinal, course set)


@dataclass(frozen=True)
class SemesterNode:
    ordinal: int
    courses: frozenset[str]
    weight: int

    @property
    def key(self) -> NodeKey:
        return (self.ordinal, self.courses)

    @property
    def label(self) -> str:
        return "+".join(sorted(self.courses))


def _sort_key(key: NodeKey):
    return (key[0], sorted(key[1]))


@dataclass(frozen=True)
class SemesterNetwork:
    """Layered DAG: an edge always joins ordinal t to ordinal t + 1."""

    node_weights: Mapping[NodeKey, int]
    edges: Mapping[tuple[NodeKey, NodeKey], int]
    cap: int = 10
    _ordinals: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for (src, dst), w in self.edges.items():
            if dst[0] != src[0] + 1:
                raise ValueError(f"edge from ordinal {src[0]} to {dst[0]} is not between consecutive ordinals")
            if src not in self.node_weights or dst not in self.node_weights:
                raise ValueError("edge endpoint is not a node")
        by_ord: dict[int, list[NodeKey]] = {}
        for key in sorted(self.node_weights, key=_sort_key):
            by_ord.setdefault(key[0], []).append(key)
        object.__setattr__(self, "_ordinals", by_ord)

    @property
    def nodes(self) -> list[SemesterNode]:
        return [SemesterNode(o, c, self.node_weights[(o, c)]) for o in self.ordinals for _, c in self._ordinals[o]]

    @property
    def ordinals(self) -> list[int]:
        return sorted(self._ordinals)

    def at(self, ordinal: int) -> list[SemesterNode]:
        return [SemesterNode(o, c, self.node_weights[(o, c)]) for o, c in self._ordinals.get(ordinal, [])]

    def sorted_edges(self) -> list[tuple[NodeKey, NodeKey, int]]:
        return sorted(((s, d, w) for (s, d), w in self.edges.items()),
                      key=lambda e: (_sort_key(e[0]), _sort_key(e[1])))


def student_semesters(cohort: Cohort, cap: int = 10) -> dict[str, list[frozenset[str]]]:
    """Per student, course sets of their first ``cap`` semesters in (year, term) order."""
    grouped: dict[str, dict[tuple[int, int], set[str]]] = {}
    for r in cohort.records:
        grouped.setdefault(r.student_id, {}).setdefault(r.semester, set()).add(r.course_id)
    return {sid: [frozenset(sems[k]) for k in sorted(sems)][:cap] for sid, sems in grouped.items()}


def build_semester_network(cohort: Cohort, cap: int = 10) -> SemesterNetwork:
    if cap < 1:
        raise ValueError(f"semester cap must be >= 1, got {cap}")
    nodes: dict[NodeKey, int] = {}
    edges: dict[tuple[NodeKey, NodeKey], int] = {}
    for sid, sems in sorted(student_semesters(cohort, cap).items()):
        keys = [(t, courses) for t, courses in enumerate(sems, start=1)]
        for key in keys:
            nodes[key] = nodes.get(key, 0) + 1
        for src, dst in zip(keys, keys[1:]):
            edges[(src, dst)] = edges.get((src, dst), 0) + 1
    return SemesterNetwork(nodes, edges, cap)


def typical_path(net: SemesterNetwork) -> list[SemesterNode]:
    """Heaviest node per ordinal; ties go to the lexicographically smallest course list."""
    if not net.node_weights:
        raise ValueError("semester network is empty")
    out = []
    for t in net.ordinals:
        out.append(min(net.at(t), key=lambda v: (-v.weight, sorted(v.courses))))
    return out


@dataclass(frozen=True)
class ShareRow:
    ordinal: int
    max_node_weight: int
    total_students: int

    @property
    def share(self) -> float:
        return self.max_node_weight / self.total_students


def common_semester_share(net: SemesterNetwork) -> list[ShareRow]:
    if not net.node_weights:
        raise ValueError("semester network is empty")
    rows = []
    for t in net.ordinals:
        weights = [v.weight for v in net.at(t)]
        rows.append(ShareRow(t, max(weights), sum(weights)))
    return rows


def write_share_csv(rows: list[ShareRow], sink: TextIO) -> None:
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(["ordinal", "max_node_weight", "total_students", "share"])
    for r in rows:
        w.writerow([r.ordinal, r.max_node_weight, r.total_students, repr(r.share)])
