"""
Traversable terrain model fitting: weighted corner heights and per-node plane refits.
"""

import logging
import math

import numpy as np

from ..config import PipelineConfig
from .tgf import PlaneModel, TriGridField

log = logging.getLogger(__name__)

MIN_CORNER_DISTANCE = 1e-6


def corner_height(contributions) -> float | None:
    """Weighted average of (height, weight term) pairs; None when the total weight is zero."""
    total = sum(term for _, term in contributions)
    if not total > 0:
        return None
    return sum(z * term for z, term in contributions) / total


def plane_from_corners(c1, c2, c3) -> PlaneModel:
    """Plane through three refined corners, normal oriented upward."""
    c1, c2, c3 = (np.asarray(c, dtype=np.float64) for c in (c1, c2, c3))
    e1 = (c2 - c1) / np.linalg.norm(c2 - c1)
    e2 = (c3 - c1) / np.linalg.norm(c3 - c1)
    normal = np.cross(e1, e2)
    normal /= np.linalg.norm(normal)
    if normal[2] < 0:
        normal = -normal
    mean = (c1 + c2 + c3) / 3.0
    return PlaneModel(normal, float(-normal @ mean), mean)


def ttmf(tgf: TriGridField, traversable, config: PipelineConfig) -> TriGridField:
    """
    Refine the terrain model from the traversable nodes.

    Each corner touched by a traversable node gets the height average of the
    contributing planes, weighted by w / |c - m|_xy. Every node whose three
    corners are refined receives a plane through them. With TTMF disabled,
    traversable nodes keep their own plane and no other node gets one.
    """
    traversable = set(traversable)
    for corner in tgf.corners:
        corner.contributions.clear()
        corner.z_hat = None
    for node in tgf.nodes:
        node.refined_plane = None

    if not config.ttmf_enabled:
        for index in traversable:
            tgf.nodes[index].refined_plane = tgf.nodes[index].plane
        return tgf

    for index in sorted(traversable):
        node = tgf.nodes[index]
        mx, my = node.plane.mean[0], node.plane.mean[1]
        for corner_id in node.corners:
            corner = tgf.corners[corner_id]
            distance = max(math.hypot(corner.x - mx, corner.y - my), MIN_CORNER_DISTANCE)
            corner.contributions.append((index, node.plane.height_at(corner.x, corner.y), node.weight / distance))
    refined_corners = 0
    for corner in tgf.corners:
        if corner.contributions:
            corner.z_hat = corner_height([(z, term) for _, z, term in corner.contributions])
            refined_corners += corner.refined

    refined_nodes = 0
    for node in tgf.nodes:
        corners = [tgf.corners[c] for c in node.corners]
        if all(c.refined for c in corners):
            node.refined_plane = plane_from_corners(*[(c.x, c.y, c.z_hat) for c in corners])
            refined_nodes += 1
    log.debug(f"TTMF: {refined_corners} refined corners, {refined_nodes} refined nodes")
    return tgf
