"""
Core types, configuration re-exports, scan I/O and attitude alignment.
"""

from ..config import PipelineConfig
from .attitude import align_attitude, restore_attitude
from .io import (
    SCAN_FORMATS,
    LabelArray,
    detect_format,
    load_labels,
    load_scan,
    save_labels,
    save_scan,
)
from .types import Point, PointCloud, Pose, SegmentationResult

__all__ = [
    "SCAN_FORMATS",
    "LabelArray",
    "PipelineConfig",
    "Point",
    "PointCloud",
    "Pose",
    "SegmentationResult",
    "align_attitude",
    "detect_format",
    "load_labels",
    "load_scan",
    "restore_attitude",
    "save_labels",
    "save_scan",
]
