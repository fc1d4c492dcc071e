"""
Obstacle clustering over a spherical projection.
"""

from .forest import LabelForest
from .projection import SphericalGrid, project
from .resolve import ClusterResult, cluster_obstacles, dense_first_appearance, resolve_labels, write_cluster_summary
from .ring_graph import ClusterNode, circular_linkage, horizontal_update, skipped_linkage
from .vertical import find_bounds, linear_bounds, vertical_link, vertical_update

__all__ = [
    "ClusterNode",
    "ClusterResult",
    "LabelForest",
    "SphericalGrid",
    "circular_linkage",
    "cluster_obstacles",
    "dense_first_appearance",
    "find_bounds",
    "horizontal_update",
    "linear_bounds",
    "project",
    "resolve_labels",
    "skipped_linkage",
    "vertical_link",
    "vertical_update",
    "write_cluster_summary",
]
