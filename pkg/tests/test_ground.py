import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from travel_seg.config import PipelineConfig
from travel_seg.core.types import PointCloud
from travel_seg.ground import (
    NodeKind,
    PlaneModel,
    TriGridField,
    btgs,
    build_tgf,
    corner_height,
    fit_node,
    fit_node_planes,
    label_points,
    lcc_edge,
    lcc_test,
    node_weight,
    pca_plane,
    segment_ground,
    ttmf,
    write_node_dump,
)
from travel_seg.ground.tgf import BOTTOM, LEFT, RIGHT, TOP

from .conftest import plane_cloud


# --- tri-grid field ---


def test_small_field_has_four_triangles_per_square():
    tgf = TriGridField(resolution=8.0, extent=8.0, xyz=np.empty((0, 3)))
    assert tgf.cells_per_side == 2
    assert len(tgf) == 16


def test_interior_nodes_have_three_neighbors_and_adjacency_is_symmetric():
    tgf = TriGridField(resolution=2.0, extent=6.0, xyz=np.empty((0, 3)))
    n = tgf.cells_per_side
    for node in tgf.nodes:
        for other in tgf.neighbors(node.node_index):
            assert node.node_index in tgf.neighbors(other)
    interior = tgf.node_id(2, 2, TOP)
    assert len(tgf.neighbors(interior)) == 3
    assert len(tgf.neighbors(tgf.node_id(0, 0, BOTTOM))) == 2
    assert len(tgf.neighbors(tgf.node_id(n - 1, 0, RIGHT))) == 2


def test_neighboring_triangles_share_two_corners():
    tgf = TriGridField(resolution=2.0, extent=4.0, xyz=np.empty((0, 3)))
    for node in tgf.nodes:
        for other in tgf.neighbors(node.node_index):
            assert len(set(node.corners) & set(tgf.nodes[other].corners)) == 2


def test_square_center_maps_to_exactly_one_triangle():
    tgf = TriGridField(resolution=8.0, extent=8.0, xyz=np.empty((0, 3)))
    node = tgf.locate(np.array([[4.0, 4.0]]))[0]
    assert node == tgf.node_id(1, 1, RIGHT)


def _inside_triangle(p, tri):
    a, b, c = tri
    def cross(o, u, v):
        return (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0])
    d1, d2, d3 = cross(a, b, p), cross(b, c, p), cross(c, a, p)
    neg = d1 < -1e-9 or d2 < -1e-9 or d3 < -1e-9
    pos = d1 > 1e-9 or d2 > 1e-9 or d3 > 1e-9
    return not (neg and pos)


def test_random_points_partition_completely():
    rng = np.random.default_rng(0)
    xyz = np.column_stack([rng.uniform(-20, 20, size=(100_000, 2)), rng.normal(size=100_000)])
    config = PipelineConfig(field_extent=20.0)
    tgf = build_tgf(PointCloud(xyz), config)
    assert sum(node.num_points for node in tgf.nodes) == 100_000
    assert tgf.overflow.size == 0
    # brute-force check on a sample of nodes and points
    for node in tgf.nodes[::37]:
        tri = tgf.triangle_vertices(node.node_index)
        for idx in node.point_indices[:20]:
            assert _inside_triangle(xyz[idx, :2], tri)


def test_out_of_extent_points_overflow():
    cloud = PointCloud([[0.5, 0.5, 0.0], [150.0, 0.0, 0.0]])
    tgf = build_tgf(cloud, PipelineConfig())
    assert tgf.overflow.tolist() == [1]


# --- plane fitting ---


def test_weight_of_reference_eigenvalues():
    assert node_weight((4.0, 2.0, 1.0)) == pytest.approx(3.0, abs=1e-9)


def test_horizontal_plane_fit():
    cloud = plane_cloud(d=-2.0)  # z = 2
    fit = fit_node(cloud.xyz, PipelineConfig())
    np.testing.assert_allclose(fit.plane.normal, [0.0, 0.0, 1.0], atol=1e-9)
    assert fit.plane.d == pytest.approx(-2.0, abs=1e-9)
    assert fit.kind == NodeKind.TERRAIN


def test_steep_plane_is_obstacle():
    s = math.sqrt(0.5)
    cloud = plane_cloud(normal=(-s, 0.0, s))  # 45 degrees
    fit = fit_node(cloud.xyz, PipelineConfig())
    assert fit.plane.inclination_deg() == pytest.approx(45.0, abs=1e-6)
    assert fit.kind == NodeKind.OBSTACLE


def test_sparse_and_collinear_nodes_are_unknown():
    config = PipelineConfig()
    assert fit_node(np.zeros((5, 3)), config) is None
    line = np.column_stack([np.linspace(0, 5, 30), np.zeros(30), np.zeros(30)])
    assert fit_node(line, config) is None


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_plane_passes_through_its_mean(seed):
    xyz = np.random.default_rng(seed).normal(size=(50, 3))
    plane, eigvals = pca_plane(xyz)
    assert abs(plane.normal @ plane.mean + plane.d) < 1e-6
    assert np.linalg.norm(plane.normal) == pytest.approx(1.0)
    assert eigvals[0] >= eigvals[1] >= eigvals[2] >= 0
    assert plane.normal[2] >= 0


# --- lcc ---


def test_lcc_reference_cases():
    up = (0.0, 0.0, 1.0)
    assert lcc_test(up, (0, 0, 0), up, (1, 0, 0), 0.03, 0.1)
    # orthogonal normals fail once the means are apart; coincident means pass regardless
    assert not lcc_test(up, (0, 0, 0), (1.0, 0.0, 0.0), (1, 0, 0), 0.03, 0.1)
    assert not lcc_test(up, (0, 0, 0), up, (1, 0, 0.5), 0.03, 0.1)


def test_lcc_coincident_means_pass():
    assert lcc_test((0, 0, 1), (1, 1, 1), (1, 0, 0), (1, 1, 1), 0.03, 0.1)


unit = st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 3).filter(lambda v: np.linalg.norm(v) > 0.1)
coord = st.tuples(*[st.floats(-10, 10, allow_nan=False)] * 3)


@settings(max_examples=200, deadline=None)
@given(s_i=unit, m_i=coord, s_j=unit, m_j=coord)
def test_lcc_is_symmetric(s_i, m_i, s_j, m_j):
    s_i = np.array(s_i) / np.linalg.norm(s_i)
    s_j = np.array(s_j) / np.linalg.norm(s_j)
    assert lcc_test(s_i, m_i, s_j, m_j, 0.03, 0.1) == lcc_test(s_j, m_j, s_i, m_i, 0.03, 0.1)


# --- B-TGS ---


def _fitted(cloud, **overrides):
    config = PipelineConfig(**{"field_extent": 16.0, **overrides})
    tgf = build_tgf(cloud, config)
    fit_node_planes(tgf, config)
    return tgf, config


def test_flat_field_is_one_traversable_region():
    tgf, config = _fitted(plane_cloud(n=20_000, extent=16.0))
    regions = btgs(tgf, config)
    terrain = {node.node_index for node in tgf.nodes_of_kind(NodeKind.TERRAIN)}
    assert set(regions) == terrain
    assert set(regions.values()) == {1}


def _stepped_field(n=40_000):
    """Flat ground at z=0 for x < 0 and z=1 for x >= 0, a cliff between."""
    rng = np.random.default_rng(4)
    xy = rng.uniform(-16, 16, size=(n, 2))
    z = np.where(xy[:, 0] >= 0.0, 1.0, 0.0)
    # a dense band of obstacle points standing on the cliff edge
    wall = np.column_stack([np.zeros(4000), rng.uniform(-16, 16, 4000), rng.uniform(0, 3, 4000)])
    return PointCloud(np.vstack([np.column_stack([xy, z]), wall]))


def test_cliff_blocks_the_search_unless_multi_region():
    cloud = _stepped_field()
    tgf, config = _fitted(cloud)
    regions = btgs(tgf, config)
    sides = {np.sign(tgf.nodes[i].plane.mean[0]) for i in regions}
    assert len(sides) == 1
    tgf, config = _fitted(cloud, seed_multi_region=True)
    regions = btgs(tgf, config)
    assert len(set(regions.values())) >= 2


def test_every_traversable_node_but_the_seed_has_a_supporting_edge():
    tgf, config = _fitted(_stepped_field())
    regions = btgs(tgf, config)
    supported = 0
    for index in regions:
        node = tgf.nodes[index]
        if any(n in regions and lcc_edge(node, tgf.nodes[n], config.eps1, config.eps2) for n in tgf.neighbors(index)):
            supported += 1
    assert supported >= len(regions) - 1


def test_single_terrain_node_is_its_own_region():
    # well inside the RIGHT triangle of the square centered at (4, 4)
    xyz = plane_cloud(n=50, extent=0.5).xyz + np.array([7.0, 4.0, 0.0])
    tgf, config = _fitted(PointCloud(xyz))
    regions = btgs(tgf, config)
    assert len(regions) == 1


def test_no_terrain_gives_empty_search():
    s = math.sqrt(0.5)
    tgf, config = _fitted(plane_cloud(normal=(-s, 0.0, s), n=5000, extent=16.0))
    assert btgs(tgf, config) == {}


# --- TTMF ---


def test_corner_height_weighted_average():
    assert corner_height([(2.0, 3.0), (0.0, 1.0)]) == pytest.approx(1.5, abs=1e-9)
    assert corner_height([(0.0, 2.0), (1.0, 2.0)]) == pytest.approx(0.5)
    assert corner_height([(1.0, 0.0)]) is None


def test_single_traversable_node_refines_its_corners():
    tgf = TriGridField(resolution=8.0, extent=8.0, xyz=np.empty((0, 3)))
    node = tgf.nodes[tgf.node_id(0, 0, LEFT)]
    node.plane = PlaneModel(np.array([0.0, 0.0, 1.0]), -1.0, np.array([-6.0, -4.0, 1.0]))
    node.weight = 5.0
    ttmf(tgf, [node.node_index], PipelineConfig())
    for corner_id in node.corners:
        assert tgf.corners[corner_id].z_hat == pytest.approx(1.0)
    np.testing.assert_allclose(node.refined_plane.normal, [0.0, 0.0, 1.0], atol=1e-12)


def test_corner_heights_stay_within_contributors():
    rng = np.random.default_rng(5)
    xyz = plane_cloud(n=30_000, extent=16.0, seed=5).xyz.copy()
    xyz[:, 2] = 0.02 * xyz[:, 0] + rng.normal(scale=0.01, size=xyz.shape[0])
    tgf, config = _fitted(PointCloud(xyz))
    ttmf(tgf, btgs(tgf, config).keys(), config)
    for corner in tgf.corners:
        if corner.refined:
            heights = [z for _, z, _ in corner.contributions]
            assert min(heights) - 1e-9 <= corner.z_hat <= max(heights) + 1e-9


def test_ablation_keeps_own_planes():
    tgf, config = _fitted(plane_cloud(n=20_000, extent=16.0), ttmf_enabled=False)
    traversable = btgs(tgf, config)
    ttmf(tgf, traversable, config)
    for node in tgf.nodes:
        if node.node_index in traversable:
            assert node.refined_plane is node.plane
        else:
            assert node.refined_plane is None


# --- labeling ---


def test_points_above_the_plane_by_eps3_become_obstacles():
    base = plane_cloud(n=20_000, extent=16.0, seed=9).xyz
    samples = np.array([[1.0, 1.0, 0.05], [1.0, 1.0, 0.5], [-3.0, 2.0, -0.4]])
    cloud = PointCloud(np.vstack([base, samples]))
    result = segment_ground(cloud, PipelineConfig(field_extent=16.0))
    assert result.terrain_mask[-3]
    assert not result.terrain_mask[-2]
    assert result.terrain_mask[-1]


def test_mask_matches_analytic_distance_on_a_known_plane():
    rng = np.random.default_rng(11)
    ground = plane_cloud(normal=(0.0, 0.1, 1.0), n=30_000, extent=16.0, seed=11).xyz
    lifted = ground[:2000] + np.column_stack([np.zeros((2000, 2)), rng.uniform(-0.3, 0.3, 2000)])
    cloud = PointCloud(np.vstack([ground[2000:], lifted]))
    config = PipelineConfig(field_extent=16.0)
    tgf = build_tgf(cloud, config)
    fit_node_planes(tgf, config)
    ttmf(tgf, btgs(tgf, config).keys(), config)
    mask = label_points(tgf, cloud, config)
    normal = np.array([0.0, 0.1, 1.0]) / np.linalg.norm([0.0, 0.1, 1.0])
    analytic = cloud.xyz @ normal < config.eps3
    covered = np.zeros(len(cloud), dtype=bool)
    for node in tgf.nodes:
        if node.refined_plane is not None:
            covered[node.point_indices] = True
    margin = np.abs(cloud.xyz @ normal - config.eps3) > 0.02
    assert np.array_equal(mask[covered & margin], analytic[covered & margin])


def test_node_dump(tmp_path):
    cloud = plane_cloud(n=5000, extent=16.0)
    result = segment_ground(cloud, PipelineConfig(field_extent=16.0))
    path = tmp_path / "nodes.csv"
    write_node_dump(result.field, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("node_index,kind,traversable")
    assert len(lines) > 1
