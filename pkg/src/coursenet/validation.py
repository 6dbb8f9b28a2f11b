"""Community scoring, partition comparison and student membership."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .ingest import Cohort
from .netcore import CourseGraph


@dataclass(frozen=True)
class CommunityScore:
    """Inter/intra weight densities of one community; ``None`` marks an undefined value.

    A ratio of 0 is the strongest possible: no weight leaves the community.
    """

    community_id: int
    n_c: int
    wd_inter: Optional[float]
    wd_intra: Optional[float]
    ratio: Optional[float]

    @property
    def defined(self) -> bool:
        return self.ratio is not None


def community_strength(g: CourseGraph, members: Iterable[str], community_id: int = 0) -> CommunityScore:
    members = frozenset(members)
    if not members:
        raise ValueError("community must have at least one member")
    outside = members - g.nodes
    if outside:
        raise ValueError(f"members not in graph: {sorted(outside)}")
    w_bar = g.mean_edge_weight()
    n, n_c = g.n, len(members)
    w_int = w_ext = 0.0
    for (a, b), w in g.edges.items():
        ina, inb = a in members, b in members
        if ina and inb:
            w_int += w
        elif ina or inb:
            w_ext += w
    wd_inter = w_ext / (w_bar * n_c * (n - n_c)) if n_c < n else None
    wd_intra = w_int / (w_bar * n_c * (n_c - 1) / 2) if n_c >= 2 else None
    ratio = wd_inter / wd_intra if wd_inter is not None and wd_intra else None
    return CommunityScore(community_id, n_c, wd_inter, wd_intra, ratio)


def score_partition(g: CourseGraph, communities: Sequence[Iterable[str]]) -> list[CommunityScore]:
    return [community_strength(g, c, i) for i, c in enumerate(communities)]


def weighted_average_ratio(scores: Iterable[CommunityScore]) -> float:
    """Course-count weighted mean of the defined ratios."""
    defined = [s for s in scores if s.defined]
    if not defined:
        raise ValueError("no community has a defined inter/intra ratio")
    return math.fsum(s.n_c * s.ratio for s in defined) / sum(s.n_c for s in defined)


def dice_similarity(a: Iterable, b: Iterable) -> float:
    a, b = set(a), set(b)
    if not a and not b:
        raise ValueError("dice similarity undefined for two empty sets")
    return 2 * len(a & b) / (len(a) + len(b))


@dataclass(frozen=True)
class SimilarityReport:
    # one entry per reference community: (index of best match, its dice score)
    per_community_best: tuple[tuple[int, float], ...]
    overall: float


def clustering_similarity(gt: Sequence[Iterable], dd: Sequence[Iterable]) -> SimilarityReport:
    """Mean over reference communities of their best Dice match in ``dd``.

    Not symmetric: ``gt`` is the reference side. Ties go to the lowest index.
    """
    gt = [set(c) for c in gt]
    dd = [set(c) for c in dd]
    if not gt or not dd:
        raise ValueError("both partitions must contain at least one community")
    best = []
    for g_i in gt:
        scores = [dice_similarity(g_i, c_j) for c_j in dd]
        j = max(range(len(scores)), key=lambda idx: (scores[idx], -idx))
        best.append((j, scores[j]))
    return SimilarityReport(tuple(best), math.fsum(s for _, s in best) / len(best))


def assign_students(community: Iterable[str], cohort: Cohort) -> frozenset[str]:
    """Students who took at least half of the community's courses (both, for a pair)."""
    community = frozenset(community)
    if not community:
        raise ValueError("community must be nonempty")
    size = len(community)
    members = set()
    for sid, taken in cohort.courses_by_student().items():
        hit = len(taken & community)
        if size == 2:
            ok = hit == 2
        else:
            ok = 2 * hit >= size
        if ok:
            members.add(sid)
    return frozenset(members)
