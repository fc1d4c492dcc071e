import numpy as np
import pytest

from travel_seg.config import PipelineConfig
from travel_seg.core.types import PointCloud
from travel_seg.synth import render, scenario_suite


@pytest.fixture(autouse=True)
def isolated_user_config(tmp_path, monkeypatch):
    """Keep every test away from the real ~/.config and $TRAVEL_CONFIG."""
    monkeypatch.setenv("TRAVEL_CONFIG_DIR", str(tmp_path / "user-config"))
    monkeypatch.delenv("TRAVEL_CONFIG", raising=False)


@pytest.fixture(scope="session")
def suite():
    return scenario_suite()


@pytest.fixture(scope="session")
def rendered(suite):
    """Render each suite scene once per session, on first use."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = render(suite[name].spec)
        return cache[name]

    return get


@pytest.fixture
def config():
    return PipelineConfig()


def plane_cloud(normal=(0.0, 0.0, 1.0), d=0.0, n=400, extent=8.0, seed=0) -> PointCloud:
    """Random points on the plane normal . p + d = 0 over an xy square."""
    rng = np.random.default_rng(seed)
    xy = rng.uniform(-extent, extent, size=(n, 2))
    nx, ny, nz = normal
    z = -(nx * xy[:, 0] + ny * xy[:, 1] + d) / nz
    return PointCloud(np.column_stack([xy, z]))
