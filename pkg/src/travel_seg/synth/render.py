"""
Deterministic ray-cast rendering of a spinning LiDAR over analytic primitives.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..core.attitude import attitude_rotation
from ..core.io import FORMAT_SUFFIXES, LabelArray, save_labels, save_scan
from ..core.types import PointCloud, Pose
from .primitives import TERRAIN_CLASS, Primitive

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SensorSpec:
    """Ring 0 is the lowest beam; azimuth step j looks at -pi + (j + 0.5) * 2pi / width."""

    rings: int = 64
    elevation_min: float = -25.0  # degrees
    elevation_max: float = 3.0  # degrees
    width: int = 1024
    height: float = 1.8  # meters above the ground at the origin
    max_range: float = 40.0

    def validate(self) -> "SensorSpec":
        if self.rings < 2 or self.width < 2:
            raise ValueError(f"sensor needs at least 2 rings and 2 azimuth steps, got {self.rings}x{self.width}")
        if not -90.0 < self.elevation_min < self.elevation_max < 90.0:
            raise ValueError(f"degenerate elevation span [{self.elevation_min}, {self.elevation_max}]")
        if not self.height > 0 or not self.max_range > 0:
            raise ValueError("sensor height and max_range must be positive")
        return self

    def elevations(self) -> np.ndarray:
        return np.radians(np.linspace(self.elevation_min, self.elevation_max, self.rings))

    def azimuths(self) -> np.ndarray:
        return -math.pi + (np.arange(self.width) + 0.5) * (2.0 * math.pi / self.width)

    def directions(self) -> tuple[np.ndarray, np.ndarray]:
        """Unit ray directions in the sensor frame, ring-major, with their ring index."""
        el, az = np.meshgrid(self.elevations(), self.azimuths(), indexing="ij")
        dirs = np.stack([np.cos(el) * np.cos(az), np.cos(el) * np.sin(az), np.sin(el)], axis=-1).reshape(-1, 3)
        rings = np.repeat(np.arange(self.rings), self.width)
        return dirs, rings


@dataclass(frozen=True)
class SceneSpec:
    name: str
    primitives: tuple[Primitive, ...]
    sensor: SensorSpec = field(default_factory=SensorSpec)
    noise_sigma: float = 0.0  # range noise, meters
    seed: int = 0
    pose: Pose | None = None


@dataclass
class LabeledScan:
    """A rendered scan in the sensor frame with per-point ground truth."""

    name: str
    cloud: PointCloud
    truth_terrain: np.ndarray
    truth_object: np.ndarray
    semantic: np.ndarray
    source: np.ndarray  # primitive index per point
    sensor_height: float
    pose: Pose | None = None

    def __len__(self) -> int:
        return len(self.cloud)

    def labels(self) -> LabelArray:
        """Semantic-KITTI-style truth words (class | instance << 16)."""
        return LabelArray.from_parts(self.semantic, self.truth_object)

    def world_xyz(self) -> np.ndarray:
        """Points with the sensor height added back (ground through z = 0), attitude undone."""
        xyz = self.cloud.xyz
        if self.pose is not None:
            xyz = attitude_rotation(self.pose).inv().apply(xyz)
        return xyz + np.array([0.0, 0.0, self.sensor_height])


def render(spec: SceneSpec) -> LabeledScan:
    """
    Cast every (ring, azimuth) ray and keep the nearest primitive hit within max_range.

    Misses are omitted. Range noise (when `noise_sigma` > 0) is drawn for every
    ray from a generator seeded by `spec.seed`, so the output depends only on
    the scene description.
    """
    sensor = spec.sensor.validate()
    if not spec.primitives:
        raise ValueError(f"scene {spec.name!r} has no primitives")
    dirs, rings = sensor.directions()
    rotation = attitude_rotation(spec.pose) if spec.pose is not None else None
    world_dirs = rotation.inv().apply(dirs) if rotation is not None else dirs
    origin = np.array([0.0, 0.0, sensor.height])

    t_all = np.stack([prim.intersect(origin, world_dirs) for prim in spec.primitives])
    source = np.argmin(t_all, axis=0)
    t = t_all[source, np.arange(t_all.shape[1])]
    hit = np.isfinite(t) & (t <= sensor.max_range)

    noise = np.zeros(t.shape[0])
    if spec.noise_sigma > 0:
        noise = np.random.default_rng(spec.seed).normal(0.0, spec.noise_sigma, t.shape[0])

    idx = np.flatnonzero(hit)
    source = source[idx]
    points = origin + world_dirs[idx] * t[idx, None]
    for k, prim in enumerate(spec.primitives):
        mine = source == k
        if mine.any():
            points[mine] = prim.snap(points[mine])
    points += world_dirs[idx] * noise[idx, None]
    xyz = points - origin
    if rotation is not None:
        xyz = rotation.apply(xyz)

    terrain_of = np.array([prim.terrain for prim in spec.primitives])
    instance_of = np.array(
        [0 if prim.terrain else (getattr(prim, "instance", 0) or k + 1) for k, prim in enumerate(spec.primitives)],
        dtype=np.uint32,
    )
    class_of = np.array([TERRAIN_CLASS if prim.terrain else prim.semantic for prim in spec.primitives], dtype=np.uint32)

    cloud = PointCloud(xyz, ring=rings[idx], frame_id=spec.name)
    scan = LabeledScan(
        name=spec.name,
        cloud=cloud,
        truth_terrain=terrain_of[source],
        truth_object=instance_of[source],
        semantic=class_of[source],
        source=source,
        sensor_height=sensor.height,
        pose=spec.pose,
    )
    log.debug(f"Rendered {spec.name}: {len(cloud)} of {dirs.shape[0]} rays hit")
    return scan


def write_labeled_scan(scan: LabeledScan, out_dir, fmt: str = "kitti_bin", stem: str | None = None) -> tuple[Path, Path]:
    """Write `velodyne/<stem><suffix>` and `labels/<stem>.label` under `out_dir`."""
    out_dir = Path(out_dir)
    stem = stem or scan.name
    suffix = {v: k for k, v in FORMAT_SUFFIXES.items()}[fmt]
    scan_path = out_dir / "velodyne" / f"{stem}{suffix}"
    label_path = out_dir / "labels" / f"{stem}.label"
    scan_path.parent.mkdir(parents=True, exist_ok=True)
    save_scan(scan.cloud, scan_path, fmt)
    save_labels(label_path, scan.labels())
    return scan_path, label_path
