"""
travel-seg - traversable ground segmentation and object clustering for 3D LiDAR scans.
"""

__version__ = "0.1.0"

from .config import PipelineConfig  # noqa: E402
from .core.types import Point, PointCloud, Pose, SegmentationResult  # noqa: E402
from .pipeline import TravelSegmenter  # noqa: E402

__all__ = ["Point", "PointCloud", "PipelineConfig", "Pose", "SegmentationResult", "TravelSegmenter", "__version__"]
