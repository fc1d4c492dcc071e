"""
Two-step segmentation: ground first, then clustering of what is left.
"""

import logging

import numpy as np

from .config import PipelineConfig
from .core.types import PointCloud, Pose, SegmentationResult
from .stages import PIPELINE_ORDER, Frame, get_stage
from .utils import stage_timer

log = logging.getLogger(__name__)


class TravelSegmenter:
    """
    Runs the registered stages over one cloud at a time.

    Holds no state between frames, so one instance may segment any number of
    scans (or one instance per worker process).
    """

    def __init__(self, config: PipelineConfig | None = None):
        self.config = (config or PipelineConfig()).validate()
        self.stages = [get_stage(name, self.config) for name in PIPELINE_ORDER]

    def run(self, cloud: PointCloud, pose: Pose | None = None) -> Frame:
        """Run every stage and return the populated frame (timings in ms, plus `total`)."""
        frame = Frame(cloud=cloud, pose=pose)
        with stage_timer(frame.timings, "total"):
            for stage in self.stages:
                with stage_timer(frame.timings, stage.name):
                    stage.execute(frame)
        log.info(
            f"Segmented {cloud.frame_id or 'cloud'}: {len(cloud)} points in {frame.timings['total']:.1f} ms"
        )
        return frame

    def segment(self, cloud: PointCloud, pose: Pose | None = None) -> SegmentationResult:
        frame = self.run(cloud, pose)
        cluster_id = frame.clusters.cluster_id if frame.clusters is not None else np.zeros(len(cloud), np.uint32)
        # Terrain points are never projected, so they keep cluster id 0.
        return SegmentationResult(frame.terrain_mask, cluster_id, dict(frame.timings))
