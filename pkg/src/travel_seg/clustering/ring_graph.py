"""
Intra-ring node construction and label linkage: horizontal, circular and skipped.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .forest import LabelForest
from .projection import SphericalGrid

log = logging.getLogger(__name__)


@dataclass
class ClusterNode:
    """A maximal run of adjacent projected points on one ring, each step < t_horz."""

    ring: int
    idx_s: int
    idx_e: int
    label: int
    cols: np.ndarray
    points: np.ndarray

    @property
    def start_point(self) -> int:
        return int(self.points[0])

    @property
    def end_point(self) -> int:
        return int(self.points[-1])

    def __len__(self) -> int:
        return self.points.shape[0]


def horizontal_update(grid: SphericalGrid, ring: int, t_horz: float, forest: LabelForest) -> list[ClusterNode]:
    """
    Split one ring into nodes, left to right.

    Consecutive occupied cells whose points are closer than `t_horz` share a
    node; every node receives a fresh label from `forest`.
    """
    cols, points = grid.row(ring)
    if cols.size == 0:
        return []
    steps = np.linalg.norm(np.diff(grid.xyz[points], axis=0), axis=1)
    breaks = np.flatnonzero(steps >= t_horz) + 1
    nodes = []
    for node_cols, node_points in zip(np.split(cols, breaks), np.split(points, breaks)):
        nodes.append(
            ClusterNode(ring, int(node_cols[0]), int(node_cols[-1]), forest.make_label(), node_cols, node_points)
        )
    return nodes


def circular_linkage(nodes: list[ClusterNode], xyz: np.ndarray, t_horz: float, forest: LabelForest) -> bool:
    """Union the last and first node of a ring across the azimuth seam when their ends are close."""
    if len(nodes) < 2:
        return False
    first, last = nodes[0], nodes[-1]
    if np.linalg.norm(xyz[last.end_point] - xyz[first.start_point]) < t_horz:
        forest.union(last.label, first.label)
        return True
    return False


# --- Skipped linkage distances ---


def _boundary_close(nodes, k, j, xyz, t_horz) -> bool:
    return bool(np.linalg.norm(xyz[nodes[k].end_point] - xyz[nodes[j].start_point]) < t_horz)


def _centroid_close(nodes, k, j, xyz, t_horz) -> bool:
    a = xyz[nodes[k].points].mean(axis=0)
    b = xyz[nodes[j].points].mean(axis=0)
    return bool(np.linalg.norm(a - b) < t_horz)


SKIP_DISTANCES = {
    "boundary": _boundary_close,
    "centroid": _centroid_close,
}


def skipped_linkage(
    nodes: list[ClusterNode],
    xyz: np.ndarray,
    t_horz: float,
    t_skip: int,
    forest: LabelForest,
    metric: str = "boundary",
) -> int:
    """
    Union non-neighboring nodes (k, k+j), 2 <= j <= t_skip + 1, that pass the skip test.

    Intermediate nodes keep their own labels. Returns the number of accepted pairs.

    Args:
        metric: "boundary" compares the facing boundary points, "centroid" the
            node centroids.
    """
    try:
        close = SKIP_DISTANCES[metric]
    except KeyError:
        raise ValueError(f"unknown skip metric {metric!r}") from None
    accepted = 0
    for k in range(len(nodes)):
        for j in range(k + 2, min(k + t_skip + 2, len(nodes))):
            if close(nodes, k, j, xyz, t_horz):
                forest.union(nodes[k].label, nodes[j].label)
                accepted += 1
    if accepted:
        log.debug(f"Skipped linkage accepted {accepted} pairs on {len(nodes)} nodes")
    return accepted
