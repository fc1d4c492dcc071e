"""
Traversable ground segmentation over a tri-grid field.
"""

from .btgs import btgs, lcc_edge, lcc_test, select_seed
from .labeling import GroundResult, label_points, segment_ground
from .planes import fit_node, fit_node_planes, node_weight, pca_plane
from .tgf import NodeKind, PlaneModel, TriGridField, TriGridNode, build_tgf, write_node_dump
from .ttmf import corner_height, plane_from_corners, ttmf

__all__ = [
    "GroundResult",
    "NodeKind",
    "PlaneModel",
    "TriGridField",
    "TriGridNode",
    "btgs",
    "build_tgf",
    "corner_height",
    "fit_node",
    "fit_node_planes",
    "label_points",
    "lcc_edge",
    "lcc_test",
    "node_weight",
    "pca_plane",
    "plane_from_corners",
    "segment_ground",
    "select_seed",
    "ttmf",
    "write_node_dump",
]
