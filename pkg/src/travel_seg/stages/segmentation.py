"""
The three pipeline stages: attitude alignment, ground segmentation, obstacle clustering.
"""

import logging

from ..clustering import cluster_obstacles
from ..core.attitude import align_attitude
from ..ground import segment_ground
from .base import BaseStage, Frame

log = logging.getLogger(__name__)


class AlignStage(BaseStage):
    name = "align"
    description = "Rotate the scan upright using the sensor roll and pitch."

    def execute(self, frame: Frame) -> Frame:
        frame.aligned = align_attitude(frame.cloud, frame.pose) if frame.pose is not None else frame.cloud
        return frame


class GroundStage(BaseStage):
    name = "ground"
    description = "Tri-grid field ground segmentation (B-TGS and TTMF)."

    def execute(self, frame: Frame) -> Frame:
        frame.ground = segment_ground(frame.working_cloud, self.config)
        return frame


class ClusterStage(BaseStage):
    name = "cluster"
    description = "Spherical-projection clustering of the obstacle points."

    def execute(self, frame: Frame) -> Frame:
        frame.clusters = cluster_obstacles(frame.working_cloud, ~frame.terrain_mask, self.config)
        return frame
