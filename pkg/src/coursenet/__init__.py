"""Fields-of-interest detection in student course networks."""

from .ingest import Cohort, EnrollmentRecord, parse_enrollments
from .louvain import LouvainConfig, Partition, louvain_partition, modularity
from .netcore import CourseGraph, build_bipartite, detect_hubs_dd, project_weighted, remove_nodes
from .semester import build_semester_network, common_semester_share, typical_path
from .validation import clustering_similarity, community_strength, weighted_average_ratio

__all__ = [
    "Cohort", "EnrollmentRecord", "parse_enrollments",
    "LouvainConfig", "Partition", "louvain_partition", "modularity",
    "CourseGraph", "build_bipartite", "detect_hubs_dd", "project_weighted", "remove_nodes",
    "build_semester_network", "common_semester_share", "typical_path",
    "clustering_similarity", "community_strength", "weighted_average_ratio",
]
