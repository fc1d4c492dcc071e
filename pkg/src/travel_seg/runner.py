"""
Batch operations behind the CLI: segment, evaluate, sweep and benchmark.
"""

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

import numpy as np

from . import __version__
from .clustering import write_cluster_summary
from .config import PipelineConfig
from .core.io import load_labels, load_scan, save_labels
from .core.types import Pose
from .errors import ConfigError, InputError, TravelError
from .ground import write_node_dump
from .metrics import (
    FrameMetrics,
    cluster_metrics,
    euclidean_oracle,
    ground_metrics,
    truth_from_semantic_labels,
)
from .pipeline import TravelSegmenter
from .synth import LabeledScan, SuiteScene, render

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


# --- Manifest ---


@dataclass
class RunManifest:
    """Everything needed to replay a segment run: inputs, resolved config, tool version."""

    inputs: list[str]
    config: dict
    frames: list[dict] = field(default_factory=list)
    version: str = __version__
    created: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @property
    def failures(self) -> list[dict]:
        return [frame for frame in self.frames if frame.get("error")]

    def pipeline_config(self) -> PipelineConfig:
        return PipelineConfig.from_mapping(self.config)

    def poses(self) -> dict[str, Pose]:
        """Attitude used per scan stem, for frames that had one."""
        return {
            Path(frame["input"]).stem: Pose(*frame["pose"])
            for frame in self.frames
            if frame.get("pose") is not None
        }

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(asdict(self), indent=2))
        return path

    @classmethod
    def load(cls, path) -> "RunManifest":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"Cannot read manifest '{path}': {e}") from e
        known = {k: data[k] for k in ("inputs", "config", "frames", "version", "created") if k in data}
        if "inputs" not in known or "config" not in known:
            raise InputError(f"Manifest '{path}' lacks inputs or config")
        return cls(**known)


# --- Segment ---


def parse_pose(text: str) -> Pose:
    """`ROLL,PITCH` or `ROLL,PITCH,YAW` in radians."""
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) not in (2, 3):
            raise ValueError("expected ROLL,PITCH[,YAW]")
        return Pose(*(float(p) for p in parts))
    except ValueError as e:
        raise ConfigError("pose", f"cannot interpret {text!r}: {e}") from None


def load_pose_table(path) -> dict[str, Pose]:
    """
    Read a per-frame attitude table: CSV with columns frame, roll, pitch and optionally yaw.

    `frame` is the scan file stem.
    """
    path = Path(path)
    try:
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
    except OSError as e:
        raise InputError(f"Cannot read pose table '{path}': {e}") from e
    poses = {}
    for n, row in enumerate(rows, start=2):
        try:
            poses[row["frame"].strip()] = Pose(
                float(row["roll"]), float(row["pitch"]), float(row.get("yaw") or 0.0)
            )
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise InputError(f"{path}:{n}: bad pose row ({e}); expected columns frame,roll,pitch[,yaw]") from None
    log.info(f"Loaded {len(poses)} pose(s) from {path}")
    return poses


def _segment_task(task: tuple) -> dict:
    """Worker body: one scan in, one label file out. Errors are returned, not raised."""
    scan_path, config_dict, out_dir, fmt, dump_nodes, cluster_summary, angles = task
    scan_path, out_dir = Path(scan_path), Path(out_dir)
    record = {"input": str(scan_path), "pose": list(angles) if angles else None}
    try:
        config = PipelineConfig.from_mapping(config_dict)
        cloud = load_scan(scan_path, fmt)
        frame = TravelSegmenter(config).run(cloud, Pose(*angles) if angles else None)
        cluster_id = frame.clusters.cluster_id
        label_path = out_dir / f"{scan_path.stem}.label"
        save_labels(label_path, cluster_id)
        if dump_nodes:
            write_node_dump(frame.ground.field, out_dir / "nodes" / f"{scan_path.stem}.csv")
        if cluster_summary:
            write_cluster_summary(frame.working_cloud, cluster_id, out_dir / "clusters" / f"{scan_path.stem}.csv")
        record.update(
            output=str(label_path),
            points=len(cloud),
            dropped=cloud.dropped,
            terrain=int(frame.terrain_mask.sum()),
            clusters=frame.clusters.num_clusters,
            timings={k: round(v, 3) for k, v in frame.timings.items()},
        )
    except TravelError as e:
        log.error(f"Failed to segment {scan_path}: {e}", exc_info=True)
        record["error"] = str(e)
    except OSError as e:
        log.error(f"I/O error on {scan_path}: {e}", exc_info=True)
        record["error"] = str(e)
    return record


def _angles(pose: Pose | None) -> tuple[float, float, float] | None:
    return None if pose is None else (pose.roll, pose.pitch, pose.yaw)


def run_segment(
    scans: list[Path],
    config: PipelineConfig,
    out_dir,
    fmt: str | None = None,
    jobs: int = 1,
    dump_nodes: bool = False,
    cluster_summary: bool = False,
    poses: Mapping[str, Pose] | None = None,
) -> RunManifest:
    """
    Segment every scan into `out_dir/<stem>.label` and write the run manifest.

    `poses` maps scan stems to the sensor attitude; scans without one are taken as level.

    Per-file failures are recorded in the manifest and the run continues.
    Results are gathered in input order whatever the worker count.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config_dict = config.validate().to_dict()
    poses = poses or {}
    tasks = [
        (str(p), config_dict, str(out_dir), fmt, dump_nodes, cluster_summary, _angles(poses.get(p.stem)))
        for p in scans
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_segment_task, tasks))
    else:
        records = [_segment_task(task) for task in tasks]
    manifest = RunManifest(inputs=[str(p) for p in scans], config=config_dict, frames=records)
    manifest.write(out_dir / MANIFEST_NAME)
    log.info(f"Segmented {len(records) - len(manifest.failures)}/{len(records)} scans into {out_dir}")
    return manifest


# --- Evaluate ---


def evaluate_labels(
    pred_paths: list[Path],
    truth_paths: list[Path],
    scan_paths: list[Path] | None = None,
    objects: str = "labels",
    ec_radius: float = 0.5,
) -> list[FrameMetrics]:
    """
    Compare predicted label files (0 = terrain or unclustered) with Semantic-KITTI-style truth.

    With `objects="euclidean"` the ground-truth objects are the euclidean
    oracle's clusters of the truth non-terrain points, which needs the scans.
    """
    if len(pred_paths) != len(truth_paths):
        raise InputError(f"{len(pred_paths)} prediction files but {len(truth_paths)} truth files")
    if objects not in ("labels", "euclidean"):
        raise ConfigError("objects", f"must be 'labels' or 'euclidean', got {objects!r}")
    if objects == "euclidean" and (scan_paths is None or len(scan_paths) != len(pred_paths)):
        raise InputError("euclidean objects need one scan per prediction file")
    frames = []
    for k, (pred_path, truth_path) in enumerate(zip(pred_paths, truth_paths)):
        truth = load_labels(truth_path)
        pred = load_labels(pred_path, expected_count=len(truth)).raw
        truth_terrain, truth_objects = truth_from_semantic_labels(truth)
        if objects == "euclidean":
            cloud = load_scan(scan_paths[k])
            if len(cloud) != len(truth):
                raise InputError(f"{scan_paths[k]} has {len(cloud)} points but {truth_path} has {len(truth)} labels")
            truth_objects = euclidean_oracle(cloud, ec_radius, mask=~truth_terrain)
        frames.append(
            FrameMetrics(
                frame_id=Path(pred_path).stem,
                ground=ground_metrics(pred == 0, truth_terrain),
                clusters=cluster_metrics(truth_objects, pred),
            )
        )
    return frames


def above_ground_clusters(cluster_id: np.ndarray, truth_object: np.ndarray) -> int:
    """Distinct predicted clusters among the points of ground-truth objects."""
    hits = cluster_id[(truth_object > 0) & (cluster_id > 0)]
    return int(np.unique(hits).shape[0])


def evaluate_scan(scan: LabeledScan, config: PipelineConfig) -> tuple[FrameMetrics, dict]:
    """Segment a rendered scan and score it against its own ground truth."""
    result = TravelSegmenter(config).segment(scan.cloud, scan.pose)
    metrics = FrameMetrics(
        frame_id=scan.name,
        ground=ground_metrics(result.terrain_mask, scan.truth_terrain),
        clusters=cluster_metrics(scan.truth_object, result.cluster_id),
        timings=dict(result.timings),
    )
    extra = {"clusters": above_ground_clusters(result.cluster_id, scan.truth_object)}
    return metrics, extra


def scene_config(scene: SuiteScene, base: PipelineConfig) -> PipelineConfig:
    return base.replace(**scene.overrides) if scene.overrides else base


# --- Sweep ---


def run_sweep(param: str, values: list, scenes: list[SuiteScene], base: PipelineConfig) -> list[dict]:
    """One row per (value, scene): metrics, cluster count and stage times."""
    if param not in PipelineConfig.field_names():
        raise ConfigError(param, "unknown parameter for sweep")
    rendered = {scene.name: render(scene.spec) for scene in scenes}
    rows = []
    for value in values:
        for scene in scenes:
            config = scene_config(scene, base).replace(**{param: value})
            metrics, extra = evaluate_scan(rendered[scene.name], config)
            row = {"param": param, "value": getattr(config, param), "scene": scene.name}
            row.update({k: v for k, v in metrics.row().items() if k != "frame_id"})
            row["clusters"] = extra["clusters"]
            row["expected_clusters"] = scene.expected_clusters
            rows.append(row)
            log.debug(f"Sweep {param}={value} on {scene.name}: {row}")
    return rows


def write_rows_csv(rows: list[dict], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = []
    for row in rows:
        columns.extend(c for c in row if c not in columns)
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=columns, restval="")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
    return path


# --- Bench ---


def run_bench(scenes: list[SuiteScene], base: PipelineConfig, repeats: int = 5) -> list[dict]:
    """Mean and standard deviation of every stage time (ms) per scene over `repeats` runs."""
    if repeats < 1:
        raise ConfigError("repeats", f"must be >= 1, got {repeats}")
    rows = []
    for scene in scenes:
        scan = render(scene.spec)
        segmenter = TravelSegmenter(scene_config(scene, base))
        samples: dict[str, list[float]] = {}
        for _ in range(repeats):
            for stage, ms in segmenter.segment(scan.cloud, scan.pose).timings.items():
                samples.setdefault(stage, []).append(ms)
        row = {"scene": scene.name, "points": len(scan), "repeats": repeats}
        for stage, values in samples.items():
            row[f"{stage}_mean_ms"] = float(np.mean(values))
            row[f"{stage}_std_ms"] = float(np.std(values))
        rows.append(row)
    return rows
