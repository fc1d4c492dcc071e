"""
Over- and under-segmentation entropy (nats).

Both metrics are computed from the object/cluster contingency table, using
only points that carry a nonzero id on both sides.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse
import scipy.stats


def contingency(reference, estimated) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(reference classes, estimated classes, count matrix) over the jointly labeled points."""
    reference = np.asarray(reference).reshape(-1)
    estimated = np.asarray(estimated).reshape(-1)
    if reference.shape != estimated.shape:
        raise ValueError(f"label arrays differ in length: {reference.shape[0]} vs {estimated.shape[0]}")
    keep = (reference != 0) & (estimated != 0)
    ref_classes, ref_idx = np.unique(reference[keep], return_inverse=True)
    est_classes, est_idx = np.unique(estimated[keep], return_inverse=True)
    counts = scipy.sparse.coo_matrix(
        (np.ones(ref_idx.shape[0], dtype=np.int64), (ref_idx.reshape(-1), est_idx.reshape(-1))),
        shape=(ref_classes.shape[0], est_classes.shape[0]),
    ).toarray()
    return ref_classes, est_classes, counts


def _row_entropies(counts: np.ndarray) -> np.ndarray:
    if counts.shape[0] == 0:
        return np.zeros(0)
    return np.array([scipy.stats.entropy(row[row > 0]) for row in counts])


def ose_breakdown(truth_objects, pred) -> dict[int, float]:
    """Entropy of the predicted labels inside each ground-truth object."""
    objects, _, counts = contingency(truth_objects, pred)
    return dict(zip(objects.tolist(), _row_entropies(counts).tolist()))


def ose(truth_objects, pred) -> float:
    """Over-segmentation entropy: sum over objects of their predicted-label entropy."""
    return float(sum(ose_breakdown(truth_objects, pred).values()))


def use(truth_objects, pred) -> float:
    """Under-segmentation entropy: sum over predicted clusters of their truth-label entropy."""
    return ose(pred, truth_objects)


@dataclass
class ClusterEval:
    ose: float
    use: float
    per_object: dict[int, float] = field(default_factory=dict)
    per_cluster: dict[int, float] = field(default_factory=dict)


def cluster_metrics(truth_objects, pred) -> ClusterEval:
    per_object = ose_breakdown(truth_objects, pred)
    per_cluster = ose_breakdown(pred, truth_objects)
    return ClusterEval(
        ose=float(sum(per_object.values())),
        use=float(sum(per_cluster.values())),
        per_object=per_object,
        per_cluster=per_cluster,
    )
