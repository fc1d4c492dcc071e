"""
Stage registry. Stages run in PIPELINE_ORDER.
"""

import logging

from ..config import PipelineConfig
from .base import BaseStage, Frame
from .segmentation import AlignStage, ClusterStage, GroundStage

log = logging.getLogger(__name__)

# AVAILABLE_STAGES maps stage names to the stage classes.
AVAILABLE_STAGES = {
    "align": AlignStage,
    "ground": GroundStage,
    "cluster": ClusterStage,
}

PIPELINE_ORDER = ("align", "ground", "cluster")


def get_stage(name: str, config: PipelineConfig) -> BaseStage:
    """Instantiate the stage registered under `name`."""
    stage_class = AVAILABLE_STAGES.get(name)
    if stage_class is None:
        raise KeyError(f"Stage '{name}' not found; available: {', '.join(AVAILABLE_STAGES)}")
    return stage_class(config)


__all__ = ["AVAILABLE_STAGES", "PIPELINE_ORDER", "BaseStage", "Frame", "get_stage"]
