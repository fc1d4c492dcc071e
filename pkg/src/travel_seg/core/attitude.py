"""
Attitude alignment: rotate a scan upright using the sensor roll and pitch.
"""

import logging

from scipy.spatial.transform import Rotation

from .types import PointCloud, Pose

log = logging.getLogger(__name__)


def attitude_rotation(pose: Pose) -> Rotation:
    """Roll about x followed by pitch about y (extrinsic), yaw ignored."""
    return Rotation.from_euler("xy", [pose.roll, pose.pitch])


def align_attitude(cloud: PointCloud, pose: Pose) -> PointCloud:
    """Undo roll and pitch so the cloud's z axis is gravity aligned. Order is preserved."""
    if pose.roll == 0.0 and pose.pitch == 0.0:
        return cloud
    log.debug(f"Aligning {cloud.frame_id or 'cloud'} with roll={pose.roll:.4f} pitch={pose.pitch:.4f}")
    return cloud.with_xyz(attitude_rotation(pose).inv().apply(cloud.xyz))


def restore_attitude(cloud: PointCloud, pose: Pose) -> PointCloud:
    """Inverse of align_attitude."""
    if pose.roll == 0.0 and pose.pitch == 0.0:
        return cloud
    return cloud.with_xyz(attitude_rotation(pose).apply(cloud.xyz))
