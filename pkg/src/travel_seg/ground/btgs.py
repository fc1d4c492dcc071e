"""
Breadth-first traversable graph search (B-TGS) over the tri-grid field.
"""

import logging
import math
from collections import deque

import numpy as np

from ..config import PipelineConfig
from .tgf import NodeKind, TriGridField, TriGridNode

log = logging.getLogger(__name__)

WEIGHT_TIE = 1e-9


def lcc_test(s_i, m_i, s_j, m_j, eps1: float, eps2: float) -> bool:
    """
    Local convexity/concavity between two planar patches.

    True iff the normals agree within sin(|d| eps2) and each mean lies within
    angle eps1 of the other patch's plane, where d = m_j - m_i.
    """
    s_i = np.asarray(s_i, dtype=np.float64)
    s_j = np.asarray(s_j, dtype=np.float64)
    d_ij = np.asarray(m_j, dtype=np.float64) - np.asarray(m_i, dtype=np.float64)
    dist = float(np.linalg.norm(d_ij))
    if dist == 0.0:
        return True
    similar = abs(float(s_i @ s_j)) > 1.0 - math.sin(dist * eps2)
    j_flat = abs(float(s_j @ -d_ij)) < dist * math.sin(eps1)
    i_flat = abs(float(s_i @ d_ij)) < dist * math.sin(eps1)
    return similar and j_flat and i_flat


def lcc_edge(node_i: TriGridNode, node_j: TriGridNode, eps1: float, eps2: float) -> bool:
    """lcc_test on two fitted nodes; nodes without a plane never pass."""
    if node_i.plane is None or node_j.plane is None:
        return False
    return lcc_test(node_i.plane.normal, node_i.plane.mean, node_j.plane.normal, node_j.plane.mean, eps1, eps2)


def select_seed(candidates: list[TriGridNode]) -> TriGridNode | None:
    """Highest weight wins; weights within WEIGHT_TIE go to the node nearest the sensor."""
    if not candidates:
        return None
    best_weight = max(node.weight for node in candidates)
    tied = [node for node in candidates if node.weight >= best_weight - WEIGHT_TIE]
    return min(tied, key=lambda node: (math.hypot(node.plane.mean[0], node.plane.mean[1]), node.node_index))


def _expand(tgf: TriGridField, seed: TriGridNode, region: int, config: PipelineConfig) -> int:
    seed.traversable = True
    seed.region = region
    frontier = deque([seed.node_index])
    size = 1
    while frontier:
        current = tgf.nodes[frontier.popleft()]
        for neighbor_index in tgf.neighbors(current.node_index):
            neighbor = tgf.nodes[neighbor_index]
            if neighbor.traversable or neighbor.kind != NodeKind.TERRAIN:
                continue
            if lcc_edge(current, neighbor, config.eps1, config.eps2):
                neighbor.traversable = True
                neighbor.region = region
                frontier.append(neighbor_index)
                size += 1
    return size


def btgs(tgf: TriGridField, config: PipelineConfig) -> dict[int, int]:
    """
    Search traversable nodes from the best terrain seed.

    Unknown and obstacle nodes are never expanded. With `seed_multi_region`
    the search restarts from the best remaining terrain node until none is
    left, numbering regions from 1.

    Returns:
        Mapping node_index -> region id for every traversable node.
    """
    for node in tgf.nodes:
        node.traversable = False
        node.region = 0
    terrain = tgf.nodes_of_kind(NodeKind.TERRAIN)
    if not terrain:
        log.info("B-TGS: no terrain node, every point becomes an obstacle")
        return {}
    region = 0
    while True:
        remaining = [node for node in terrain if not node.traversable]
        seed = select_seed(remaining)
        if seed is None:
            break
        region += 1
        size = _expand(tgf, seed, region, config)
        log.debug(f"B-TGS region {region}: seed node {seed.node_index} (w={seed.weight:.4g}), {size} nodes")
        if not config.seed_multi_region:
            break
    return {node.node_index: node.region for node in tgf.nodes if node.traversable}
