"""
Point labeling against the refined terrain model, and the ground-stage composition.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..config import PipelineConfig
from ..core.types import PointCloud
from .btgs import btgs
from .planes import fit_node_planes
from .tgf import TriGridField, build_tgf
from .ttmf import ttmf

log = logging.getLogger(__name__)


def label_points(tgf: TriGridField, cloud: PointCloud, config: PipelineConfig) -> np.ndarray:
    """Terrain iff the signed distance to the node's refined plane is below eps3."""
    mask = np.zeros(len(cloud), dtype=bool)
    for node in tgf.nodes:
        if node.refined_plane is None or node.num_points == 0:
            continue
        idx = node.point_indices
        mask[idx] = node.refined_plane.signed_distance(cloud.xyz[idx]) < config.eps3
    return mask


@dataclass
class GroundResult:
    terrain_mask: np.ndarray
    field: TriGridField
    regions: dict[int, int]

    @property
    def overflow(self) -> np.ndarray:
        return self.field.overflow


def segment_ground(cloud: PointCloud, config: PipelineConfig) -> GroundResult:
    """build_tgf -> fit_node_planes -> btgs -> ttmf -> label_points."""
    tgf = build_tgf(cloud, config)
    fit_node_planes(tgf, config)
    regions = btgs(tgf, config)
    ttmf(tgf, regions.keys(), config)
    mask = label_points(tgf, cloud, config)
    log.info(f"Ground: {int(mask.sum())}/{len(cloud)} terrain points, {len(regions)} traversable nodes")
    return GroundResult(mask, tgf, regions)
