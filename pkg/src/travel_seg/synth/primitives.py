"""
Analytic scene primitives for the synthetic LiDAR renderer.

World frame: z up, ground through the origin at z = 0. Every primitive
intersects a bundle of rays from one origin and returns the ray parameter of
the first hit (inf on a miss).
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

# Semantic-KITTI classes written into truth label files.
TERRAIN_CLASS = 40
BUILDING_CLASS = 50
CAR_CLASS = 10
POLE_CLASS = 80

EPS = 1e-12


def _positive(t: np.ndarray) -> np.ndarray:
    return np.where(t > EPS, t, np.inf)


@dataclass(frozen=True)
class Primitive(ABC):
    """Base class: subclasses set `kind` and implement `intersect`."""

    kind = "primitive"

    @property
    def terrain(self) -> bool:
        return False

    @property
    def semantic(self) -> int:
        return TERRAIN_CLASS if self.terrain else BUILDING_CLASS

    @abstractmethod
    def intersect(self, origin: np.ndarray, dirs: np.ndarray) -> np.ndarray:
        """First positive ray parameter per direction, inf on a miss."""

    def snap(self, points: np.ndarray) -> np.ndarray:
        """Project hit points exactly onto the surface where it has a closed form."""
        return points


@dataclass(frozen=True)
class GroundPlane(Primitive):
    """
    Ground rising along +x with the given slope (degrees); terrain iff slope <= terrain_limit.

    Unbounded unless `half_extent` limits it to the square |x|, |y| <= half_extent.
    """

    slope_deg: float = 0.0
    terrain_limit: float = 30.0
    instance: int = 0
    half_extent: float | None = None
    kind = "ground"

    @property
    def terrain(self) -> bool:
        return self.slope_deg <= self.terrain_limit

    def height(self, x: np.ndarray) -> np.ndarray:
        return math.tan(math.radians(self.slope_deg)) * x

    def intersect(self, origin, dirs):
        g = math.tan(math.radians(self.slope_deg))
        normal = np.array([-g, 0.0, 1.0])
        denom = dirs @ normal
        with np.errstate(divide="ignore", invalid="ignore"):
            t = -(origin @ normal) / denom
        t = _positive(np.where(denom < -EPS, t, np.inf))
        if self.half_extent is None:
            return t
        hit = origin[:2] + dirs[:, :2] * np.where(np.isfinite(t), t, 0.0)[:, None]
        inside = np.all(np.abs(hit) <= self.half_extent, axis=1)
        return np.where(inside, t, np.inf)

    def snap(self, points):
        points = points.copy()
        points[:, 2] = self.height(points[:, 0])
        return points


@dataclass(frozen=True)
class Ramp(Primitive):
    """
    Finite inclined plate starting on the ground at x = x0 and rising along +x.

    `length` is measured along the incline; the plate spans y in [y_min, y_max].
    """

    x0: float = 10.0
    length: float = 6.0
    y_min: float = -3.0
    y_max: float = 3.0
    slope_deg: float = 35.0
    terrain_limit: float = 30.0
    instance: int = 0
    kind = "ramp"

    @property
    def terrain(self) -> bool:
        return self.slope_deg <= self.terrain_limit

    @property
    def x1(self) -> float:
        return self.x0 + self.length * math.cos(math.radians(self.slope_deg))

    def height(self, x: np.ndarray) -> np.ndarray:
        return math.tan(math.radians(self.slope_deg)) * (x - self.x0)

    def intersect(self, origin, dirs):
        g = math.tan(math.radians(self.slope_deg))
        normal = np.array([-g, 0.0, 1.0])
        denom = dirs @ normal
        with np.errstate(divide="ignore", invalid="ignore"):
            t = -(origin @ normal + g * self.x0) / denom
        t = np.where(np.abs(denom) > EPS, t, np.inf)
        t = _positive(t)
        hit = origin + dirs * np.where(np.isfinite(t), t, 0.0)[:, None]
        inside = (hit[:, 0] >= self.x0) & (hit[:, 0] <= self.x1) & (hit[:, 1] >= self.y_min) & (hit[:, 1] <= self.y_max)
        return np.where(inside, t, np.inf)

    def snap(self, points):
        points = points.copy()
        points[:, 2] = self.height(points[:, 0])
        return points


@dataclass(frozen=True)
class Box(Primitive):
    """Axis-aligned box resting on z = base."""

    center: tuple[float, float] = (10.0, 0.0)
    size: tuple[float, float, float] = (2.0, 2.0, 1.5)
    base: float = 0.0
    instance: int = 0
    semantic_class: int = CAR_CLASS
    kind = "box"

    @property
    def semantic(self) -> int:
        return self.semantic_class

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        cx, cy = self.center
        sx, sy, sz = self.size
        lo = np.array([cx - sx / 2.0, cy - sy / 2.0, self.base])
        hi = np.array([cx + sx / 2.0, cy + sy / 2.0, self.base + sz])
        return lo, hi

    def intersect(self, origin, dirs):
        lo, hi = self.bounds
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / dirs
            t1 = (lo - origin) * inv
            t2 = (hi - origin) * inv
        # Rays parallel to a slab: inside keeps (-inf, inf), outside misses.
        parallel = dirs == 0.0
        inside_slab = (origin >= lo) & (origin <= hi)
        t_min = np.where(parallel, np.where(inside_slab, -np.inf, np.inf), np.minimum(t1, t2))
        t_max = np.where(parallel, np.where(inside_slab, np.inf, -np.inf), np.maximum(t1, t2))
        t_near = t_min.max(axis=1)
        t_far = t_max.min(axis=1)
        hit = (t_near <= t_far) & (t_near > EPS)
        return np.where(hit, t_near, np.inf)


@dataclass(frozen=True)
class Pole(Primitive):
    """Vertical cylinder with a flat top cap."""

    center: tuple[float, float] = (6.0, 0.0)
    radius: float = 0.15
    height: float = 4.0
    base: float = 0.0
    instance: int = 0
    kind = "pole"

    @property
    def semantic(self) -> int:
        return POLE_CLASS

    def intersect(self, origin, dirs):
        cx, cy = self.center
        ox, oy = origin[0] - cx, origin[1] - cy
        a = dirs[:, 0] ** 2 + dirs[:, 1] ** 2
        b = 2.0 * (ox * dirs[:, 0] + oy * dirs[:, 1])
        c = ox * ox + oy * oy - self.radius**2
        disc = b * b - 4.0 * a * c
        ok = (a > EPS) & (disc >= 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            root = np.sqrt(np.where(ok, disc, 0.0))
            t_side = np.where(ok, (-b - root) / (2.0 * a), np.inf)
        z_side = origin[2] + t_side * dirs[:, 2]
        t_side = np.where((z_side >= self.base) & (z_side <= self.base + self.height), _positive(t_side), np.inf)

        top = self.base + self.height
        with np.errstate(divide="ignore", invalid="ignore"):
            t_cap = (top - origin[2]) / dirs[:, 2]
        t_cap = _positive(np.where(np.abs(dirs[:, 2]) > EPS, t_cap, np.inf))
        cap_xy = origin[:2] + dirs[:, :2] * np.where(np.isfinite(t_cap), t_cap, 0.0)[:, None]
        on_cap = (cap_xy[:, 0] - cx) ** 2 + (cap_xy[:, 1] - cy) ** 2 <= self.radius**2
        t_cap = np.where(on_cap, t_cap, np.inf)
        return np.minimum(t_side, t_cap)


@dataclass(frozen=True)
class Wall(Primitive):
    """Zero-thickness vertical panel between two ground points."""

    start: tuple[float, float] = (9.0, -4.0)
    end: tuple[float, float] = (9.0, 4.0)
    height: float = 2.5
    base: float = 0.0
    instance: int = 0
    kind = "wall"

    def intersect(self, origin, dirs):
        p = np.asarray(self.start, dtype=np.float64)
        q = np.asarray(self.end, dtype=np.float64)
        seg = q - p
        rel = p - origin[:2]
        # Solve origin_xy + t d_xy = p + u seg.
        denom = dirs[:, 0] * seg[1] - dirs[:, 1] * seg[0]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (rel[0] * seg[1] - rel[1] * seg[0]) / denom
            u = (rel[0] * dirs[:, 1] - rel[1] * dirs[:, 0]) / denom
        z = origin[2] + t * dirs[:, 2]
        ok = (np.abs(denom) > EPS) & (u >= 0.0) & (u <= 1.0) & (z >= self.base) & (z <= self.base + self.height)
        return _positive(np.where(ok, t, np.inf))
