"""
Spherical projection of obstacle points into a (ring, azimuth) grid.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..core.types import PointCloud
from ..errors import InputError

log = logging.getLogger(__name__)

EMPTY = -1


@dataclass
class SphericalGrid:
    """
    At most one point per cell; the nearest return wins a collision.

    `cell_point[row, col]` is a cloud index or EMPTY. Collision losers are kept
    in `losers` with the index of the point that beat them in `loser_winner`.
    """

    width: int
    height: int
    xyz: np.ndarray
    cell_point: np.ndarray
    cell_range: np.ndarray
    losers: np.ndarray
    loser_winner: np.ndarray
    dropped: int = 0

    @property
    def occupancy(self) -> int:
        return int((self.cell_point != EMPTY).sum())

    def row(self, ring: int) -> tuple[np.ndarray, np.ndarray]:
        """(columns, point indices) of the occupied cells of one ring, left to right."""
        cols = np.flatnonzero(self.cell_point[ring] != EMPTY)
        return cols, self.cell_point[ring, cols]


def azimuth_columns(xyz: np.ndarray, width: int) -> np.ndarray:
    """Column index from azimuth, increasing counter-clockwise from -pi."""
    phi = np.arctan2(xyz[:, 1], xyz[:, 0])
    cols = np.floor((phi + np.pi) / (2.0 * np.pi) * width).astype(np.int64)
    return np.mod(cols, width)


def elevation_rows(elevation: np.ndarray, el_min: float, el_max: float, height: int) -> np.ndarray:
    """Uniform elevation binning between the cloud's extreme elevations."""
    if not el_max > el_min:
        return np.zeros(elevation.shape[0], dtype=np.int64)
    rows = np.floor((elevation - el_min) / (el_max - el_min) * height).astype(np.int64)
    return np.clip(rows, 0, height - 1)


def project(
    cloud: PointCloud, obstacle_mask: np.ndarray, width: int, height: int, min_range: float = 0.0
) -> SphericalGrid:
    """
    Project the masked points of `cloud`.

    Rows come from the sensor ring index when the cloud carries one, otherwise
    from elevation binning over the whole cloud. Points at the origin (or
    closer than `min_range`) are dropped and counted.
    """
    if width < 2 or height < 2:
        raise ValueError(f"projection size must be at least 2x2, got {width}x{height}")
    xyz = cloud.xyz
    ranges = np.linalg.norm(xyz, axis=1)
    candidates = np.flatnonzero(np.asarray(obstacle_mask, dtype=bool))
    usable = (ranges[candidates] > 0.0) & (ranges[candidates] >= min_range)
    dropped = int((~usable).sum())
    if dropped:
        log.warning(f"Projection dropped {dropped} points at zero or below-minimum range")
    idx = candidates[usable]

    if cloud.ring is not None:
        rows = cloud.ring[idx].astype(np.int64)
        if rows.size and (rows.min() < 0 or rows.max() >= height):
            raise InputError(f"ring index range [{rows.min()}, {rows.max()}] does not fit projection height {height}")
    else:
        valid = ranges > 0.0
        elevation_all = np.arcsin(np.clip(xyz[valid, 2] / ranges[valid], -1.0, 1.0))
        el_min = float(elevation_all.min()) if elevation_all.size else 0.0
        el_max = float(elevation_all.max()) if elevation_all.size else 0.0
        elevation = np.arcsin(np.clip(xyz[idx, 2] / ranges[idx], -1.0, 1.0))
        rows = elevation_rows(elevation, el_min, el_max, height)
    cols = azimuth_columns(xyz[idx], width)

    cell_point = np.full((height, width), EMPTY, dtype=np.int64)
    cell_range = np.full((height, width), np.inf)
    keys = rows * width + cols
    order = np.lexsort((idx, ranges[idx], keys))
    sorted_keys = keys[order]
    first = np.ones(order.shape[0], dtype=bool)
    first[1:] = sorted_keys[1:] != sorted_keys[:-1]
    winners = idx[order[first]]
    cell_point.flat[sorted_keys[first]] = winners
    cell_range.flat[sorted_keys[first]] = ranges[winners]
    # Each loser sits after its winner in the sorted run of its cell.
    run_start = np.maximum.accumulate(np.where(first, np.arange(order.shape[0]), 0))
    losers = idx[order[~first]]
    loser_winner = idx[order[run_start[~first]]]
    log.debug(f"Projected {winners.shape[0]} cells, {losers.shape[0]} collision losers")
    return SphericalGrid(width, height, xyz, cell_point, cell_range, losers, loser_winner, dropped)
