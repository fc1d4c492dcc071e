"""
End-to-end checks of the pipeline on the synthetic suite.
"""

import numpy as np
import pytest

from travel_seg.config import PipelineConfig
from travel_seg.metrics import cluster_metrics, euclidean_oracle, ground_metrics
from travel_seg.pipeline import TravelSegmenter
from travel_seg.runner import above_ground_clusters, evaluate_scan, scene_config

pytestmark = pytest.mark.slow


def _segment(scan, config):
    return TravelSegmenter(config).segment(scan.cloud, scan.pose)


def _clusters(scan, config):
    return above_ground_clusters(_segment(scan, config).cluster_id, scan.truth_object)


def test_flat_ground_is_all_terrain(rendered):
    scan = rendered("flat")
    result = _segment(scan, PipelineConfig())
    scores = ground_metrics(result.terrain_mask, scan.truth_terrain)
    assert scores.precision >= 0.999
    assert scores.recall >= 0.999
    assert result.num_clusters == 0


def test_flat_ground_runs_under_a_hundred_milliseconds(rendered):
    scan = rendered("flat")
    segmenter = TravelSegmenter(PipelineConfig())
    segmenter.segment(scan.cloud, scan.pose)
    best = min(segmenter.segment(scan.cloud, scan.pose).timings["total"] for _ in range(3))
    assert best < 100.0


@pytest.mark.parametrize("name", ["slope-10deg", "slope-20deg"])
def test_moderate_slopes_stay_traversable(rendered, name):
    scan = rendered(name)
    scores = ground_metrics(_segment(scan, PipelineConfig()).terrain_mask, scan.truth_terrain)
    assert scores.recall >= 0.95


def test_steep_slope_is_not_terrain(rendered):
    scan = rendered("slope-45deg")
    result = _segment(scan, PipelineConfig())
    assert result.terrain_mask.mean() <= 0.05


def test_steep_ramp_stays_out_of_the_traversable_region(rendered, suite):
    scan = rendered("ramp-35deg")
    result = _segment(scan, scene_config(suite["ramp-35deg"], PipelineConfig()))
    on_ramp = ~scan.truth_terrain
    assert on_ramp.any()
    assert result.terrain_mask[on_ramp].mean() <= 0.1
    assert ground_metrics(result.terrain_mask, scan.truth_terrain).recall >= 0.95


def test_low_obstacle_is_extracted(rendered):
    scan = rendered("low-obstacle")
    result = _segment(scan, PipelineConfig())
    block = ~scan.truth_terrain
    assert block.sum() > 50
    assert (~result.terrain_mask[block]).mean() >= 0.95


def test_pole_needs_vertical_linkage(rendered):
    scan = rendered("pole")
    assert _clusters(scan, PipelineConfig()) == 1
    assert cluster_metrics(scan.truth_object, _segment(scan, PipelineConfig()).cluster_id).ose == 0.0
    assert _clusters(scan, PipelineConfig(vertical_linkage=False)) >= 5


def test_skipped_linkage_rejoins_the_occluded_wall(rendered, suite):
    scan = rendered("occluded-wall")
    config = scene_config(suite["occluded-wall"], PipelineConfig())
    assert config.t_skip == 10
    assert _clusters(scan, config) == 2
    assert _clusters(scan, config.replace(t_skip=0)) >= 3


def test_circular_linkage_closes_the_seam(rendered):
    scan = rendered("seam-wall")
    assert _clusters(scan, PipelineConfig()) == 1
    assert _clusters(scan, PipelineConfig(circular_linkage=False)) == 2


@pytest.mark.parametrize("name", ["pole", "occluded-wall", "seam-wall", "low-obstacle", "ramp-35deg", "urban"])
def test_suite_scene_reaches_its_cluster_count(rendered, suite, name):
    scene = suite[name]
    _, extra = evaluate_scan(rendered(name), scene_config(scene, PipelineConfig()))
    assert extra["clusters"] == scene.expected_clusters


@pytest.mark.parametrize("name", ["pole", "occluded-wall", "seam-wall", "low-obstacle", "ramp-35deg", "urban"])
def test_euclidean_oracle_is_no_worse_than_the_pipeline(rendered, suite, name):
    scan = rendered(name)
    objects = scan.truth_object > 0
    oracle = euclidean_oracle(scan.cloud, 0.5, mask=objects)
    pipeline = _segment(scan, scene_config(suite[name], PipelineConfig())).cluster_id
    oracle_scores = cluster_metrics(scan.truth_object, oracle)
    pipeline_scores = cluster_metrics(scan.truth_object, pipeline)
    assert oracle_scores.ose + oracle_scores.use <= pipeline_scores.ose + pipeline_scores.use + 1e-12


def test_segmentation_is_deterministic(rendered):
    scan = rendered("urban")
    first = _segment(scan, PipelineConfig())
    second = _segment(scan, PipelineConfig())
    np.testing.assert_array_equal(first.terrain_mask, second.terrain_mask)
    np.testing.assert_array_equal(first.cluster_id, second.cluster_id)
