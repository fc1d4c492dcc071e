"""
Per-node PCA plane fitting, traversability weight and node classification.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..config import PipelineConfig
from .tgf import NodeKind, PlaneModel, TriGridField, TriGridNode

log = logging.getLogger(__name__)

MIN_EIGVAL = 1e-9
COLLINEAR_EIGVAL = 1e-12


@dataclass(frozen=True)
class NodeFit:
    plane: PlaneModel
    eigvals: np.ndarray  # descending
    weight: float
    kind: NodeKind


def pca_plane(xyz: np.ndarray) -> tuple[PlaneModel, np.ndarray]:
    """Least-squares plane through `xyz`; returns the plane and descending eigenvalues."""
    mean = xyz.mean(axis=0)
    centered = xyz - mean
    cov = centered.T @ centered / xyz.shape[0]
    eigvals, eigvecs = np.linalg.eigh(cov)
    normal = eigvecs[:, 0]
    if normal[2] < 0:
        normal = -normal
    normal = normal / np.linalg.norm(normal)
    plane = PlaneModel(normal, float(-normal @ mean), mean)
    return plane, np.clip(eigvals[::-1], 0.0, None)


def node_weight(eigvals) -> float:
    """(cohesion + planarity) / linearity = l2 (l1 + l2) / (l1 l3), with l3 clamped."""
    l1, l2, l3 = (float(v) for v in eigvals)
    l3 = max(l3, MIN_EIGVAL)
    return l2 * (l1 + l2) / (l1 * l3)


def _degenerate(eigvals: np.ndarray) -> bool:
    return eigvals[1] < COLLINEAR_EIGVAL


def fit_node(xyz: np.ndarray, config: PipelineConfig) -> NodeFit | None:
    """
    Fit one node. Pure function of the node's points, safe to run in parallel.

    The lowest `seed_ratio` of points (at least `seed_min_points`) seed the
    fit, then `fit_iterations` rounds keep the points within eps3 of the
    current plane and refit. Returns None for sparse or degenerate nodes.
    """
    count = xyz.shape[0]
    if count < config.min_node_points or count < 3:
        return None
    seed_count = min(count, max(config.seed_min_points, int(math.ceil(config.seed_ratio * count))))
    seeds = xyz[np.argsort(xyz[:, 2], kind="stable")[:seed_count]]
    plane, eigvals = pca_plane(seeds)
    if _degenerate(eigvals):
        plane, eigvals = pca_plane(xyz)
    for _ in range(config.fit_iterations):
        inliers = np.abs(plane.signed_distance(xyz)) < config.eps3
        if inliers.sum() < 3:
            break
        candidate, candidate_eigvals = pca_plane(xyz[inliers])
        if _degenerate(candidate_eigvals):
            break
        plane, eigvals = candidate, candidate_eigvals
    if _degenerate(eigvals):
        return None
    kind = NodeKind.TERRAIN if plane.inclination_deg() <= config.incline_thresh else NodeKind.OBSTACLE
    return NodeFit(plane, eigvals, node_weight(eigvals), kind)


def apply_fit(node: TriGridNode, fit: NodeFit | None):
    if fit is None:
        node.plane, node.eigvals, node.weight, node.kind = None, None, 0.0, NodeKind.UNKNOWN
        return
    node.plane, node.eigvals, node.weight, node.kind = fit.plane, fit.eigvals, fit.weight, fit.kind


def fit_node_planes(tgf: TriGridField, config: PipelineConfig) -> TriGridField:
    """Fit and classify every occupied node of the field in place."""
    fits = [
        (node, fit_node(tgf.xyz[node.point_indices], config)) if node.num_points else (node, None)
        for node in tgf.nodes
    ]
    counts = {kind: 0 for kind in NodeKind}
    for node, fit in fits:
        apply_fit(node, fit)
        if node.num_points:
            counts[node.kind] += 1
    log.debug(
        f"Plane fits: {counts[NodeKind.TERRAIN]} terrain, {counts[NodeKind.OBSTACLE]} obstacle, "
        f"{counts[NodeKind.UNKNOWN]} unknown occupied nodes"
    )
    return tgf
