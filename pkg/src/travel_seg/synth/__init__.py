"""
Synthetic spinning-LiDAR scenes with exact ground truth.
"""

from .primitives import Box, GroundPlane, Pole, Primitive, Ramp, Wall
from .render import LabeledScan, SceneSpec, SensorSpec, render, write_labeled_scan
from .scenes import SuiteScene, get_scene, scenario_suite

__all__ = [
    "Box",
    "GroundPlane",
    "LabeledScan",
    "Pole",
    "Primitive",
    "Ramp",
    "SceneSpec",
    "SensorSpec",
    "SuiteScene",
    "Wall",
    "get_scene",
    "render",
    "scenario_suite",
    "write_labeled_scan",
]
