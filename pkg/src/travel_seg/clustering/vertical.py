"""
Inter-ring label merging: binary-search bound finding and the early-exit vertical distance test.
"""

import bisect
import logging
from collections.abc import Sequence

import numpy as np

from .forest import LabelForest
from .ring_graph import ClusterNode

log = logging.getLogger(__name__)


class CountingSequence(Sequence):
    """Read-only view over a list that counts element accesses."""

    def __init__(self, values, counter: list[int]):
        self._values = values
        self._counter = counter

    def __len__(self):
        return len(self._values)

    def __getitem__(self, index):
        self._counter[0] += 1
        return self._values[index]


def find_bounds(
    starts: list[int], ends: list[int], lo: int, hi: int, counter: list[int] | None = None
) -> tuple[int, int] | None:
    """
    Index range of the ring nodes whose column interval meets [lo, hi].

    `starts` and `ends` are the idx_s / idx_e of disjoint nodes sorted left to
    right, so both lists are sorted. Lower bound: first node ending at or after
    `lo`; upper bound: last node starting at or before `hi`. Returns None when
    no node overlaps. Element reads are added to `counter[0]`.
    """
    counter = counter if counter is not None else [0]
    lower = bisect.bisect_left(CountingSequence(ends, counter), lo)
    upper = bisect.bisect_right(CountingSequence(starts, counter), hi) - 1
    if lower > upper:
        return None
    return lower, upper


def linear_bounds(starts: list[int], ends: list[int], lo: int, hi: int) -> tuple[int, int] | None:
    """Reference scan over every node; same contract as find_bounds."""
    hits = [k for k, (s, e) in enumerate(zip(starts, ends)) if e >= lo and s <= hi]
    if not hits:
        return None
    return hits[0], hits[-1]


def overlap_order(cols: np.ndarray, center: float) -> np.ndarray:
    """Positions of `cols` ordered outward from `center`, ties left first."""
    return np.argsort(np.abs(cols - center), kind="stable")


def vertical_link(a: ClusterNode, b: ClusterNode, xyz: np.ndarray, t_vert: float) -> bool:
    """
    True when some point pair of the two nodes is closer than `t_vert`.

    Pairs are visited from the middle of the column overlap outward (for
    disjoint intervals, the middle of the gap), stopping at the first hit.
    """
    center = (max(a.idx_s, b.idx_s) + min(a.idx_e, b.idx_e)) / 2.0
    pa = xyz[a.points[overlap_order(a.cols, center)]]
    pb = xyz[b.points[overlap_order(b.cols, center)]]
    limit = t_vert * t_vert
    for p in pa:
        diff = pb - p
        if np.any(np.einsum("ij,ij->i", diff, diff) < limit):
            return True
    return False


def vertical_update(
    current: list[ClusterNode],
    previous: list[list[ClusterNode]],
    xyz: np.ndarray,
    t_ext: int,
    t_vert: float,
    forest: LabelForest,
    counter: list[int] | None = None,
) -> int:
    """
    Union each node of the current ring with vertically close nodes of earlier rings.

    `previous` holds the node lists of rings theta-1 .. theta-t_ring. Each node's
    column interval is extended by `t_ext` on both sides and the overlapping
    candidates of every earlier ring are found by binary search. The extended
    interval does not wrap around the azimuth seam; that edge belongs to
    circular linkage alone. Returns the number of unions performed.
    """
    counter = counter if counter is not None else [0]
    merged = 0
    for below in previous:
        if not below:
            continue
        starts = [m.idx_s for m in below]
        ends = [m.idx_e for m in below]
        for node in current:
            bounds = find_bounds(starts, ends, node.idx_s - t_ext, node.idx_e + t_ext, counter)
            if bounds is None:
                continue
            for candidate in below[bounds[0] : bounds[1] + 1]:
                if forest.connected(node.label, candidate.label):
                    continue
                if vertical_link(node, candidate, xyz, t_vert):
                    forest.union(node.label, candidate.label)
                    merged += 1
    return merged
