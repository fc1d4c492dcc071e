"""
Vanilla Euclidean clustering, used as a near-ground-truth reference on small clouds.
"""

import logging

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from ..clustering.resolve import dense_first_appearance
from ..core.types import PointCloud
from ..errors import OracleGuardError

log = logging.getLogger(__name__)

MAX_ORACLE_POINTS = 50_000


def euclidean_oracle(cloud: PointCloud | np.ndarray, radius: float, mask=None) -> np.ndarray:
    """
    Connected components of the graph linking points within `radius` of each other.

    Ids are dense 1..K by first appearance; points outside `mask` get 0.
    Raises OracleGuardError above MAX_ORACLE_POINTS evaluated points.
    """
    xyz = cloud.xyz if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=np.float64).reshape(-1, 3)
    if not radius > 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    idx = np.arange(xyz.shape[0]) if mask is None else np.flatnonzero(np.asarray(mask, dtype=bool))
    if idx.shape[0] > MAX_ORACLE_POINTS:
        raise OracleGuardError(
            f"euclidean oracle refuses {idx.shape[0]} points (limit {MAX_ORACLE_POINTS}); subsample the cloud first"
        )
    labels = np.zeros(xyz.shape[0], dtype=np.uint32)
    if idx.shape[0] == 0:
        return labels
    pairs = cKDTree(xyz[idx]).query_pairs(radius, output_type="ndarray")
    graph = scipy.sparse.coo_matrix(
        (np.ones(pairs.shape[0], dtype=np.int8), (pairs[:, 0], pairs[:, 1])),
        shape=(idx.shape[0], idx.shape[0]),
    )
    n_components, component = connected_components(graph, directed=False)
    log.debug(f"Euclidean oracle: {idx.shape[0]} points, {pairs.shape[0]} edges, {n_components} components")
    labels[idx] = dense_first_appearance(component)
    return labels
