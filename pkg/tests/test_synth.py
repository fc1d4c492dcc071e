import numpy as np
import pytest

from travel_seg.config import PipelineConfig
from travel_seg.core.io import load_labels, load_scan
from travel_seg.core.types import Pose
from travel_seg.runner import scene_config
from travel_seg.synth import Box, GroundPlane, Pole, SceneSpec, SensorSpec, get_scene, render, write_labeled_scan
from travel_seg.synth.primitives import CAR_CLASS, POLE_CLASS, TERRAIN_CLASS
from travel_seg.synth.scenes import SuiteScene


def test_flat_ground_lies_on_z_zero(rendered):
    scan = rendered("flat")
    assert len(scan) > 0
    np.testing.assert_allclose(scan.world_xyz()[:, 2], 0.0, atol=1e-9)
    assert scan.truth_terrain.all()
    assert np.all(scan.semantic == TERRAIN_CLASS)
    assert np.all(scan.truth_object == 0)


def test_sensor_frame_puts_ground_below_the_origin(rendered):
    scan = rendered("flat")
    np.testing.assert_allclose(scan.cloud.xyz[:, 2], -scan.sensor_height, atol=1e-9)
    assert scan.cloud.ring.min() >= 0
    assert np.all(np.diff(scan.cloud.ring) >= 0)


def _box_face_hits(origin, dirs, lo, hi):
    """Nearest hit on the five exposed faces, tested one face rectangle at a time."""
    best = np.full(dirs.shape[0], np.inf)
    for axis in range(3):
        others = [a for a in range(3) if a != axis]
        for value in (lo[axis], hi[axis]):
            if axis == 2 and value == lo[2]:
                continue
            with np.errstate(divide="ignore", invalid="ignore"):
                t = (value - origin[axis]) / dirs[:, axis]
            p = origin + dirs * np.where(np.isfinite(t), t, 0.0)[:, None]
            on_face = np.isfinite(t) & (t > 0)
            for a in others:
                on_face &= (p[:, a] >= lo[a]) & (p[:, a] <= hi[a])
            best = np.where(on_face & (t < best), t, best)
    return best


def test_box_point_count_matches_face_intersection():
    sensor = SensorSpec()
    box = Box(center=(10.0, 0.3), size=(2.0, 1.7, 1.5), instance=1)
    scan = render(SceneSpec("box", (GroundPlane(), box), sensor=sensor))
    dirs, _ = sensor.directions()
    origin = np.array([0.0, 0.0, sensor.height])
    lo, hi = box.bounds
    t_box = _box_face_hits(origin, dirs, lo, hi)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_ground = np.where(dirs[:, 2] < 0, -sensor.height / dirs[:, 2], np.inf)
    expected = int(np.sum((t_box < t_ground) & (t_box <= sensor.max_range)))
    on_box = scan.source == 1
    assert expected > 0
    assert int(on_box.sum()) == expected
    assert set(scan.truth_object[on_box].tolist()) == {1}
    assert set(scan.semantic[on_box].tolist()) == {CAR_CLASS}


def test_unnumbered_objects_get_their_primitive_index():
    scan = render(SceneSpec("pole", (GroundPlane(), Pole(center=(5.0, 0.0)))))
    assert set(scan.truth_object[~scan.truth_terrain].tolist()) == {2}
    assert set(scan.semantic[~scan.truth_terrain].tolist()) == {POLE_CLASS}


def test_same_seed_renders_identically():
    spec = get_scene("bumpy").spec
    first, second = render(spec), render(spec)
    np.testing.assert_array_equal(first.cloud.xyz, second.cloud.xyz)
    np.testing.assert_array_equal(first.truth_object, second.truth_object)


def test_noise_moves_points_along_their_rays():
    clean = render(SceneSpec("flat", (GroundPlane(),)))
    noisy = render(SceneSpec("flat", (GroundPlane(),), noise_sigma=0.02, seed=3))
    assert len(clean) == len(noisy)
    offset = noisy.cloud.xyz - clean.cloud.xyz
    assert np.abs(offset).max() > 0
    # offsets are parallel to the ray directions
    cross = np.cross(offset, clean.cloud.xyz)
    np.testing.assert_allclose(cross, 0.0, atol=1e-9)


def test_tilted_sensor_still_sees_flat_ground():
    pose = Pose(roll=0.05, pitch=-0.08)
    scan = render(SceneSpec("tilted", (GroundPlane(),), pose=pose))
    np.testing.assert_allclose(scan.world_xyz()[:, 2], 0.0, atol=1e-9)


def test_slope_terrain_flag(rendered):
    assert rendered("slope-20deg").truth_terrain.all()
    assert not rendered("slope-45deg").truth_terrain.any()


def test_suite_contents(suite):
    assert list(suite) == [
        "flat",
        "pole",
        "occluded-wall",
        "seam-wall",
        "low-obstacle",
        "bumpy",
        "slope-10deg",
        "slope-20deg",
        "slope-45deg",
        "ramp-35deg",
        "urban",
    ]
    assert suite["pole"].expected_clusters == 1
    assert suite["occluded-wall"].expected_clusters == 2
    assert suite["ramp-35deg"].expected_clusters == 1
    assert suite["slope-45deg"].expected_clusters is None
    ramp = suite["ramp-35deg"].spec.primitives[1]
    assert not ramp.terrain


def test_unknown_scene():
    with pytest.raises(ValueError):
        get_scene("moon")


@pytest.mark.parametrize(
    "sensor",
    [SensorSpec(rings=1), SensorSpec(width=1), SensorSpec(elevation_min=5.0, elevation_max=3.0), SensorSpec(height=0.0)],
)
def test_degenerate_sensors_are_rejected(sensor):
    with pytest.raises(ValueError):
        render(SceneSpec("bad", (GroundPlane(),), sensor=sensor))


def test_scene_without_primitives_is_rejected():
    with pytest.raises(ValueError):
        render(SceneSpec("empty", ()))


def test_written_scan_reloads(tmp_path, rendered):
    scan = rendered("pole")
    scan_path, label_path = write_labeled_scan(scan, tmp_path, fmt="csv", stem="000000")
    assert scan_path == tmp_path / "velodyne" / "000000.csv"
    cloud = load_scan(scan_path)
    np.testing.assert_array_equal(cloud.xyz, scan.cloud.xyz)
    np.testing.assert_array_equal(cloud.ring, scan.cloud.ring)
    labels = load_labels(label_path, expected_count=len(scan))
    np.testing.assert_array_equal(labels.instance, scan.truth_object)


def test_occluded_rail_is_one_beam_split_by_a_narrow_shadow(rendered):
    scan = rendered("occluded-wall")
    rail = scan.truth_object == 1
    assert set(scan.cloud.ring[rail].tolist()) == {52}
    y = np.sort(scan.cloud.xyz[rail, 1])
    widest = np.diff(y).max()
    # the shadow is the only gap wider than one column, and it is narrower than t_horz
    assert 0.1 < widest < 0.3
    assert np.sum(np.diff(y) > 0.1) == 1


def test_scene_overrides_reach_the_config():
    scene = SuiteScene(get_scene("pole").spec, 1, overrides={"t_skip": 0})
    assert scene_config(scene, PipelineConfig()).t_skip == 0
    assert scene_config(get_scene("pole"), PipelineConfig()) == PipelineConfig()
