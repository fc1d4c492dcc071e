"""
Base stage implementation and the per-frame state the stages share.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from ..clustering.resolve import ClusterResult
from ..config import PipelineConfig
from ..core.types import PointCloud, Pose
from ..ground.labeling import GroundResult

log = logging.getLogger(__name__)


@dataclass
class Frame:
    """One scan moving through the pipeline; stages fill in their outputs."""

    cloud: PointCloud
    pose: Pose | None = None
    aligned: PointCloud | None = None
    ground: GroundResult | None = None
    clusters: ClusterResult | None = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def working_cloud(self) -> PointCloud:
        return self.aligned if self.aligned is not None else self.cloud

    @property
    def terrain_mask(self) -> np.ndarray:
        if self.ground is None:
            return np.zeros(len(self.cloud), dtype=bool)
        return self.ground.terrain_mask


class BaseStage(ABC):
    """Base class for all pipeline stages."""

    name = None
    description = "Base stage"

    def __init__(self, config: PipelineConfig):
        self.config = config

    @abstractmethod
    def execute(self, frame: Frame) -> Frame:
        """Run the stage on `frame`, storing results on it."""

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r})"
