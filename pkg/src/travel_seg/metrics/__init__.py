"""
Segmentation quality metrics: terrain confusion scores and segmentation entropies.
"""

from .entropy import ClusterEval, cluster_metrics, contingency, ose, ose_breakdown, use
from .ground import GroundEval, ground_metrics
from .oracle import MAX_ORACLE_POINTS, euclidean_oracle
from .report import (
    GROUND_CLASSES,
    FrameMetrics,
    summarize_frames,
    truth_from_semantic_labels,
    write_metrics_csv,
    write_metrics_json,
)

__all__ = [
    "GROUND_CLASSES",
    "MAX_ORACLE_POINTS",
    "ClusterEval",
    "FrameMetrics",
    "GroundEval",
    "cluster_metrics",
    "contingency",
    "euclidean_oracle",
    "ground_metrics",
    "ose",
    "ose_breakdown",
    "summarize_frames",
    "truth_from_semantic_labels",
    "use",
    "write_metrics_csv",
    "write_metrics_json",
]
