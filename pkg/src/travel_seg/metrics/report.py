"""
Per-frame metric rows, multi-frame aggregation and report writers.
"""

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..core.io import LabelArray
from .entropy import ClusterEval
from .ground import GroundEval

log = logging.getLogger(__name__)

# Semantic-KITTI classes counted as terrain: road, parking, sidewalk, other-ground, lane-marking, terrain.
GROUND_CLASSES = (40, 44, 48, 49, 60, 72)
METRIC_COLUMNS = ("precision", "recall", "f1", "accuracy", "ose", "use")


def truth_from_semantic_labels(labels) -> tuple[np.ndarray, np.ndarray]:
    """
    Split Semantic-KITTI-style label words into (terrain mask, object ids).

    Objects are keyed by the full label word; terrain and unlabeled (class 0)
    points get object id 0.
    """
    labels = labels if isinstance(labels, LabelArray) else LabelArray(np.asarray(labels, dtype=np.uint32))
    semantic = labels.semantic
    terrain = np.isin(semantic, GROUND_CLASSES)
    objects = np.where(terrain | (semantic == 0), 0, labels.raw).astype(np.uint32)
    return terrain, objects


@dataclass
class FrameMetrics:
    frame_id: str
    ground: GroundEval | None = None
    clusters: ClusterEval | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def row(self) -> dict:
        row = {"frame_id": self.frame_id}
        for name in ("precision", "recall", "f1", "accuracy"):
            row[name] = getattr(self.ground, name) if self.ground is not None else None
        row["ose"] = self.clusters.ose if self.clusters is not None else None
        row["use"] = self.clusters.use if self.clusters is not None else None
        for stage, ms in self.timings.items():
            row[f"t_{stage}_ms"] = ms
        return row


def _columns(frames: list[FrameMetrics]) -> list[str]:
    columns = ["frame_id", *METRIC_COLUMNS]
    for frame in frames:
        for stage in frame.timings:
            name = f"t_{stage}_ms"
            if name not in columns:
                columns.append(name)
    return columns


def summarize_frames(frames: list[FrameMetrics]) -> dict[str, dict[str, float | int | None]]:
    """Mean and population standard deviation per column; absent values are skipped."""
    summary = {}
    rows = [frame.row() for frame in frames]
    for column in _columns(frames)[1:]:
        values = [row[column] for row in rows if row.get(column) is not None]
        if values:
            summary[column] = {"mean": float(np.mean(values)), "std": float(np.std(values)), "count": len(values)}
        else:
            summary[column] = {"mean": None, "std": None, "count": 0}
    return summary


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return "nan" if math.isnan(value) else f"{value:.6f}"
    return value


def write_metrics_csv(frames: list[FrameMetrics], path) -> Path:
    """One row per frame, then `mean` and `std` rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = _columns(frames)
    summary = summarize_frames(frames)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(columns)
        for frame in frames:
            row = frame.row()
            writer.writerow([_cell(row.get(c)) for c in columns])
        for stat in ("mean", "std"):
            writer.writerow([stat, *(_cell(summary[c][stat]) for c in columns[1:])])
    log.info(f"Wrote metrics for {len(frames)} frames to {path}")
    return path


def write_metrics_json(frames: list[FrameMetrics], path, extra: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {
        "frames": [frame.row() for frame in frames],
        "summary": summarize_frames(frames),
        **(extra or {}),
    }
    path.write_text(json.dumps(document, indent=2))
    return path
