"""
Tri-grid field (TGF): a square grid over the xy-plane, each square split into
four triangles that meet at the square's center. Every triangle is a graph node
holding the points that fall inside it; edges join triangles sharing a side.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from ..config import PipelineConfig
from ..core.types import PointCloud

log = logging.getLogger(__name__)

# Triangle slots inside a square, counter-clockwise starting at the bottom edge.
BOTTOM, RIGHT, TOP, LEFT = 0, 1, 2, 3


class NodeKind(str, Enum):
    TERRAIN = "terrain"
    OBSTACLE = "obstacle"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class PlaneModel:
    """Plane s . p + d = 0 with unit normal s (s_z >= 0) and support mean m."""

    normal: np.ndarray
    d: float
    mean: np.ndarray

    def height_at(self, x: float, y: float) -> float:
        s = self.normal
        return -(s[0] * x + s[1] * y + self.d) / s[2]

    def signed_distance(self, xyz: np.ndarray) -> np.ndarray:
        return xyz @ self.normal + self.d

    def inclination_deg(self) -> float:
        return math.degrees(math.acos(min(1.0, max(-1.0, float(self.normal[2])))))


@dataclass
class TriGridNode:
    node_index: int
    corners: tuple[int, int, int]
    point_indices: np.ndarray
    plane: PlaneModel | None = None
    eigvals: np.ndarray | None = None
    weight: float = 0.0
    kind: NodeKind = NodeKind.UNKNOWN
    traversable: bool = False
    region: int = 0
    refined_plane: PlaneModel | None = None

    @property
    def num_points(self) -> int:
        return int(self.point_indices.shape[0])


@dataclass
class Corner:
    """A shared triangle corner. `contributions` holds (node, plane height, weight term)."""

    corner_id: int
    x: float
    y: float
    contributions: list[tuple[int, float, float]] = field(default_factory=list)
    z_hat: float | None = None

    @property
    def refined(self) -> bool:
        return self.z_hat is not None


class TriGridField:
    """The node graph plus the cloud coordinates it indexes into."""

    def __init__(self, resolution: float, extent: float, xyz: np.ndarray):
        self.resolution = float(resolution)
        self.extent = float(extent)
        self.cells_per_side = max(1, int(math.ceil(2.0 * self.extent / self.resolution - 1e-9)))
        self.xyz = xyz
        n = self.cells_per_side
        self.corners: list[Corner] = []
        for i in range(n + 1):
            for j in range(n + 1):
                x, y = self._grid_xy(i, j)
                self.corners.append(Corner(i * (n + 1) + j, x, y))
        for i in range(n):
            for j in range(n):
                x, y = self._grid_xy(i + 0.5, j + 0.5)
                self.corners.append(Corner(len(self.corners), x, y))
        self.nodes: list[TriGridNode] = []
        self.adjacency: list[tuple[int, ...]] = []
        empty = np.empty(0, dtype=np.int64)
        for i in range(n):
            for j in range(n):
                for k in (BOTTOM, RIGHT, TOP, LEFT):
                    index = self.node_id(i, j, k)
                    self.nodes.append(TriGridNode(index, self._triangle_corners(i, j, k), empty))
                    self.adjacency.append(self._neighbors(i, j, k))
        self.overflow = empty

    # --- indexing ---
    def _grid_xy(self, i: float, j: float) -> tuple[float, float]:
        return -self.extent + i * self.resolution, -self.extent + j * self.resolution

    def _vertex_id(self, i: int, j: int) -> int:
        return i * (self.cells_per_side + 1) + j

    def _center_id(self, i: int, j: int) -> int:
        return (self.cells_per_side + 1) ** 2 + i * self.cells_per_side + j

    def node_id(self, i: int, j: int, k: int) -> int:
        return (i * self.cells_per_side + j) * 4 + k

    def _triangle_corners(self, i: int, j: int, k: int) -> tuple[int, int, int]:
        v = self._vertex_id
        c = self._center_id(i, j)
        if k == BOTTOM:
            return v(i, j), v(i + 1, j), c
        if k == RIGHT:
            return v(i + 1, j), v(i + 1, j + 1), c
        if k == TOP:
            return v(i + 1, j + 1), v(i, j + 1), c
        return v(i, j + 1), v(i, j), c

    def _neighbors(self, i: int, j: int, k: int) -> tuple[int, ...]:
        n = self.cells_per_side
        same = [self.node_id(i, j, (k + 1) % 4), self.node_id(i, j, (k + 3) % 4)]
        if k == BOTTOM and j > 0:
            same.append(self.node_id(i, j - 1, TOP))
        elif k == RIGHT and i < n - 1:
            same.append(self.node_id(i + 1, j, LEFT))
        elif k == TOP and j < n - 1:
            same.append(self.node_id(i, j + 1, BOTTOM))
        elif k == LEFT and i > 0:
            same.append(self.node_id(i - 1, j, RIGHT))
        return tuple(sorted(same))

    def neighbors(self, node_index: int) -> tuple[int, ...]:
        return self.adjacency[node_index]

    def corner_xy(self, corner_id: int) -> tuple[float, float]:
        corner = self.corners[corner_id]
        return corner.x, corner.y

    def in_extent(self, xy: np.ndarray) -> np.ndarray:
        return np.all(np.abs(xy) <= self.extent, axis=1)

    def locate(self, xy: np.ndarray) -> np.ndarray:
        """
        Node index for every in-extent (x, y).

        Squares are half-open on their upper sides (the outer field edge is
        closed). Inside a square each triangle owns a quarter-turn sector of
        directions from the center, half-open counter-clockwise, so every point
        lands in exactly one triangle; the center itself goes to RIGHT.
        """
        n = self.cells_per_side
        r = self.resolution
        i = np.clip(np.floor((xy[:, 0] + self.extent) / r).astype(np.int64), 0, n - 1)
        j = np.clip(np.floor((xy[:, 1] + self.extent) / r).astype(np.int64), 0, n - 1)
        u = xy[:, 0] - (-self.extent + (i + 0.5) * r)
        v = xy[:, 1] - (-self.extent + (j + 0.5) * r)
        right = (u > 0) & (-u <= v) & (v < u)
        top = (v > 0) & (-v < u) & (u <= v)
        left = (u < 0) & (u < v) & (v <= -u)
        bottom = (v < 0) & (v <= u) & (u < -v)
        k = np.select([right, top, left, bottom], [RIGHT, TOP, LEFT, BOTTOM], default=RIGHT)
        return (i * n + j) * 4 + k

    def triangle_vertices(self, node_index: int) -> np.ndarray:
        return np.array([self.corner_xy(c) for c in self.nodes[node_index].corners])

    # --- summaries ---
    def nodes_of_kind(self, kind: NodeKind) -> list[TriGridNode]:
        return [node for node in self.nodes if node.kind == kind]

    def __len__(self) -> int:
        return len(self.nodes)


def build_tgf(cloud: PointCloud, config: PipelineConfig) -> TriGridField:
    """Encode a cloud into a tri-grid field; points beyond the extent go to `overflow`."""
    config.validate()
    tgf = TriGridField(config.tgf_resolution, config.field_extent, cloud.xyz)
    if len(cloud) == 0:
        return tgf
    xy = cloud.xyz[:, :2]
    inside = tgf.in_extent(xy)
    inside_idx = np.flatnonzero(inside)
    tgf.overflow = np.flatnonzero(~inside)
    node_ids = tgf.locate(xy[inside_idx])
    order = np.argsort(node_ids, kind="stable")
    sorted_ids = node_ids[order]
    present, starts = np.unique(sorted_ids, return_index=True)
    ends = np.append(starts[1:], sorted_ids.shape[0])
    for node_index, start, end in zip(present, starts, ends):
        tgf.nodes[node_index].point_indices = inside_idx[order[start:end]]
    log.debug(
        f"TGF {tgf.cells_per_side}x{tgf.cells_per_side} squares, {len(present)} occupied nodes, "
        f"{tgf.overflow.shape[0]} overflow points"
    )
    return tgf


def write_node_dump(tgf: TriGridField, path):
    """Per-node CSV for inspection: index, kind, traversable, normal, d, weight, point count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["node_index", "kind", "traversable", "region", "sx", "sy", "sz", "d", "weight", "points"])
        for node in tgf.nodes:
            if node.num_points == 0 and node.refined_plane is None:
                continue
            plane = node.refined_plane or node.plane
            s = plane.normal if plane is not None else (math.nan,) * 3
            d = plane.d if plane is not None else math.nan
            writer.writerow(
                [node.node_index, node.kind.value, int(node.traversable), node.region,
                 f"{s[0]:.6f}", f"{s[1]:.6f}", f"{s[2]:.6f}", f"{d:.6f}", f"{node.weight:.6g}", node.num_points]
            )
