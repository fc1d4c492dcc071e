"""
Label resolution and the full ring-by-ring clustering pass.
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..config import PipelineConfig
from ..core.types import PointCloud
from .forest import LabelForest
from .projection import SphericalGrid, project
from .ring_graph import ClusterNode, circular_linkage, horizontal_update, skipped_linkage
from .vertical import vertical_update

log = logging.getLogger(__name__)


def dense_first_appearance(labels: np.ndarray) -> np.ndarray:
    """Renumber labels 1..K in order of first appearance."""
    uniq, first_index, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(uniq.shape[0], dtype=np.uint32)
    rank[np.argsort(first_index, kind="stable")] = np.arange(1, uniq.shape[0] + 1, dtype=np.uint32)
    return rank[inverse.reshape(-1)]


def resolve_labels(
    forest: LabelForest, grid: SphericalGrid, nodes: list[ClusterNode], num_points: int
) -> np.ndarray:
    """
    Per-point cluster ids: 0 for unclustered, dense 1..K otherwise.

    Node points take the canonical label of their node; collision losers take
    the label of the point that won their cell. Numbering follows the first
    appearance in point-index order.
    """
    canonical = np.full(num_points, -1, dtype=np.int64)
    for node in nodes:
        canonical[node.points] = forest.find(node.label)
    if grid.losers.size:
        canonical[grid.losers] = canonical[grid.loser_winner]
    cluster_id = np.zeros(num_points, dtype=np.uint32)
    labeled = np.flatnonzero(canonical >= 0)
    if labeled.size:
        cluster_id[labeled] = dense_first_appearance(canonical[labeled])
    return cluster_id


@dataclass
class ClusterResult:
    cluster_id: np.ndarray
    num_nodes: int
    dropped: int
    lookups: int

    @property
    def num_clusters(self) -> int:
        return int(self.cluster_id.max()) if self.cluster_id.size else 0


def cluster_obstacles(cloud: PointCloud, obstacle_mask: np.ndarray, config: PipelineConfig) -> ClusterResult:
    """
    Project the obstacle points and link them ring by ring, bottom ring first.

    Each ring runs horizontal, circular, skipped and vertical updates in turn;
    the vertical window spans the t_ring rings below.
    """
    grid = project(cloud, obstacle_mask, config.proj_width, config.proj_height, config.min_range)
    forest = LabelForest()
    rings: list[list[ClusterNode]] = []
    lookups = [0]
    t_ring = config.t_ring if config.vertical_linkage else 0
    for ring in range(grid.height):
        nodes = horizontal_update(grid, ring, config.t_horz, forest)
        if config.circular_linkage:
            circular_linkage(nodes, grid.xyz, config.t_horz, forest)
        if config.t_skip > 0:
            skipped_linkage(nodes, grid.xyz, config.t_horz, config.t_skip, forest, config.skip_metric)
        if t_ring > 0 and nodes:
            window = [rings[r] for r in range(ring - 1, max(ring - t_ring, 0) - 1, -1)]
            vertical_update(nodes, window, grid.xyz, config.t_ext, config.t_vert, forest, lookups)
        rings.append(nodes)

    all_nodes = [node for nodes in rings for node in nodes]
    cluster_id = resolve_labels(forest, grid, all_nodes, len(cloud))
    result = ClusterResult(cluster_id, len(all_nodes), grid.dropped, lookups[0])
    log.info(f"Clustering: {len(all_nodes)} nodes -> {result.num_clusters} clusters ({lookups[0]} bound lookups)")
    return result


def write_cluster_summary(cloud: PointCloud, cluster_id: np.ndarray, path) -> Path:
    """Per-cluster CSV: id, point count, centroid and bounding box."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["cluster_id", "points", "cx", "cy", "cz", "min_x", "min_y", "min_z", "max_x", "max_y", "max_z"]
        )
        for cid in range(1, int(cluster_id.max(initial=0)) + 1):
            pts = cloud.xyz[cluster_id == cid]
            if pts.shape[0] == 0:
                continue
            writer.writerow(
                [cid, pts.shape[0], *pts.mean(axis=0).round(6), *pts.min(axis=0).round(6), *pts.max(axis=0).round(6)]
            )
    return path
