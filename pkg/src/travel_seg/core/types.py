"""
Shared geometric types: points, clouds, poses and segmentation results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np


def normalize_angle(angle: float) -> float:
    """Wrap an angle in radians into (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Point:
    """A single return. Coordinates in meters, intensity in [0, 1]."""

    x: float
    y: float
    z: float
    intensity: float | None = None
    ring: int | None = None

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise ValueError(f"Point coordinates must be finite, got ({self.x}, {self.y}, {self.z})")


class PointCloud:
    """
    Ordered, immutable set of points stored column-wise.

    Index identity is point identity: every per-point array produced by the
    pipeline (terrain mask, cluster ids, truth labels) is aligned with it.
    """

    __slots__ = ("xyz", "intensity", "ring", "frame_id", "dropped")

    def __init__(self, xyz, intensity=None, ring=None, frame_id: str = "", dropped: int = 0):
        xyz = np.array(xyz, dtype=np.float64).reshape(-1, 3)
        if not np.all(np.isfinite(xyz)):
            raise ValueError("PointCloud coordinates must be finite")
        self.xyz = _frozen(xyz)
        self.intensity = None
        if intensity is not None:
            intensity = np.array(intensity, dtype=np.float64).reshape(-1)
            if intensity.shape[0] != xyz.shape[0]:
                raise ValueError("intensity length does not match point count")
            self.intensity = _frozen(intensity)
        self.ring = None
        if ring is not None:
            ring = np.array(ring, dtype=np.int64).reshape(-1)
            if ring.shape[0] != xyz.shape[0]:
                raise ValueError("ring length does not match point count")
            self.ring = _frozen(ring)
        self.frame_id = frame_id
        self.dropped = int(dropped)

    @classmethod
    def from_points(cls, points: Sequence[Point], frame_id: str = "") -> "PointCloud":
        xyz = [(p.x, p.y, p.z) for p in points]
        intensity = None
        if points and all(p.intensity is not None for p in points):
            intensity = [p.intensity for p in points]
        ring = None
        if points and all(p.ring is not None for p in points):
            ring = [p.ring for p in points]
        return cls(np.array(xyz, dtype=np.float64).reshape(-1, 3), intensity, ring, frame_id)

    def __len__(self) -> int:
        return self.xyz.shape[0]

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    @property
    def points(self) -> list[Point]:
        result = []
        for i, (x, y, z) in enumerate(self.xyz):
            intensity = None if self.intensity is None else float(self.intensity[i])
            ring = None if self.ring is None else int(self.ring[i])
            result.append(Point(float(x), float(y), float(z), intensity, ring))
        return result

    def with_xyz(self, xyz: np.ndarray) -> "PointCloud":
        """Same cloud (attributes, order, frame) with replaced coordinates."""
        return PointCloud(xyz, self.intensity, self.ring, self.frame_id, self.dropped)

    def subset(self, indices) -> "PointCloud":
        indices = np.asarray(indices)
        intensity = None if self.intensity is None else self.intensity[indices]
        ring = None if self.ring is None else self.ring[indices]
        return PointCloud(self.xyz[indices], intensity, ring, self.frame_id)

    def __repr__(self):
        return f"PointCloud(frame_id={self.frame_id!r}, points={len(self)}, dropped={self.dropped})"


@dataclass(frozen=True)
class Pose:
    """Sensor attitude (radians) and translation (meters)."""

    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0
    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        for name in ("roll", "pitch", "yaw"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"Pose.{name} must be finite, got {value}")
            object.__setattr__(self, name, normalize_angle(value))
        object.__setattr__(self, "translation", tuple(float(v) for v in self.translation))

    def inverse(self) -> "Pose":
        """
        Negated angles and translation.

        Only a true inverse for single-axis (roll-only or pitch-only) poses. To
        undo `align_attitude` on a pose with both roll and pitch, use
        `restore_attitude` with the same pose.
        """
        return Pose(-self.roll, -self.pitch, -self.yaw, tuple(-v for v in self.translation))


@dataclass
class SegmentationResult:
    """Per-point output of the two-stage pipeline."""

    terrain_mask: np.ndarray
    cluster_id: np.ndarray
    timings: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        self.terrain_mask = np.asarray(self.terrain_mask, dtype=bool)
        self.cluster_id = np.asarray(self.cluster_id, dtype=np.uint32)
        if self.terrain_mask.shape != self.cluster_id.shape:
            raise ValueError("terrain_mask and cluster_id must have the same length")
        if np.any(self.terrain_mask & (self.cluster_id != 0)):
            raise ValueError("a terrain point cannot belong to a cluster")

    @property
    def num_clusters(self) -> int:
        return int(self.cluster_id.max()) if self.cluster_id.size else 0

    def to_label_array(self) -> np.ndarray:
        """Output label words: 0 = terrain/unclustered, k >= 1 = cluster k."""
        return self.cluster_id.astype(np.uint32)
