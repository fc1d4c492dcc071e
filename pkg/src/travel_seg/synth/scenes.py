"""
The fixed acceptance suite of synthetic scenes.
"""

from dataclasses import dataclass, field
from typing import Any

from .primitives import BUILDING_CLASS, Box, GroundPlane, Pole, Ramp, Wall
from .render import SceneSpec


@dataclass(frozen=True)
class SuiteScene:
    """A scene with the above-ground cluster count it should produce under `overrides`."""

    spec: SceneSpec
    expected_clusters: int | None
    overrides: dict[str, Any] = field(default_factory=dict)
    note: str = ""

    @property
    def name(self) -> str:
        return self.spec.name


def _slope(deg: float) -> SuiteScene:
    ground = GroundPlane(slope_deg=deg, instance=1)
    expected = 0 if ground.terrain else None
    return SuiteScene(
        SceneSpec(f"slope-{deg:g}deg", (ground,)),
        expected,
        note=f"uniform {deg:g} degree slope, terrain iff at most 30 degrees",
    )


def scenario_suite() -> dict[str, SuiteScene]:
    """Named scenes in a fixed order; every call builds the same specs."""
    scenes = [
        SuiteScene(
            SceneSpec("flat", (GroundPlane(half_extent=20.0),)),
            0,
            note="noise-free flat ground patch, 40 m square aligned with the default tri-grid",
        ),
        SuiteScene(
            SceneSpec("pole", (GroundPlane(), Pole(center=(6.0, 0.0), radius=0.15, height=4.0, instance=1))),
            1,
            note="thin pole, one column wide per ring at range; needs vertical linkage",
        ),
        SuiteScene(
            SceneSpec(
                "occluded-wall",
                (
                    GroundPlane(),
                    # 7 cm panel at 1.46 m: only ring 52 reaches it, so no vertical edge can bridge the shadow
                    Wall(start=(9.0, -3.0), end=(9.0, 3.0), height=0.07, base=1.46, instance=1),
                    Pole(center=(7.0, 0.0), radius=0.05, height=3.0, instance=2),
                ),
            ),
            2,
            note="thin pole 2 m in front of a single-beam rail splits it into halves about 0.17 m apart; "
            "skipped linkage rejoins them",
        ),
        SuiteScene(
            SceneSpec("seam-wall", (GroundPlane(), Wall(start=(-9.0, -5.0), end=(-9.0, 5.0), height=2.5, instance=1))),
            1,
            note="wall behind the sensor straddles the azimuth seam",
        ),
        SuiteScene(
            SceneSpec(
                "low-obstacle",
                (GroundPlane(), Box(center=(21.5, 0.0), size=(1.0, 6.0, 0.3), instance=1, semantic_class=BUILDING_CLASS)),
            ),
            1,
            note="0.3 m kerb-like block; two beams hit its face, the lower one just above 0.1 m",
        ),
        SuiteScene(
            SceneSpec(
                "bumpy",
                (
                    GroundPlane(),
                    Ramp(x0=6.0, length=4.0, y_min=-3.0, y_max=3.0, slope_deg=8.0),
                    Ramp(x0=-14.0, length=5.0, y_min=2.0, y_max=8.0, slope_deg=6.0),
                    Box(center=(-12.0, -6.0), size=(2.0, 2.0, 0.25), instance=1),
                    Box(center=(3.0, -12.0), size=(1.5, 3.0, 0.25), instance=2),
                ),
                noise_sigma=0.01,
                seed=7,
            ),
            None,
            note="gentle terrain ramps with low blocks and 1 cm range noise; scored on terrain only, "
            "since beams cross the block tops farther apart than t_vert",
        ),
        _slope(10.0),
        _slope(20.0),
        _slope(45.0),
        SuiteScene(
            SceneSpec(
                "ramp-35deg",
                (GroundPlane(), Ramp(x0=8.0, length=6.0, y_min=-3.0, y_max=3.0, slope_deg=35.0, instance=1)),
            ),
            1,
            note="ramp steeper than the inclination threshold stays out of the traversable region",
        ),
        SuiteScene(
            SceneSpec(
                "urban",
                (
                    GroundPlane(),
                    Box(center=(12.0, -5.0), size=(4.5, 1.8, 1.5), instance=1),
                    Box(center=(-10.0, 6.0), size=(4.5, 1.8, 1.5), instance=2),
                    Pole(center=(7.0, 6.0), radius=0.15, height=5.0, instance=3),
                    Pole(center=(-6.0, 7.0), radius=0.15, height=5.0, instance=4),
                    Wall(start=(-15.0, -15.0), end=(15.0, -15.0), height=4.0, instance=5),
                    Box(center=(20.0, 10.0), size=(3.0, 3.0, 2.0), instance=6, semantic_class=BUILDING_CLASS),
                ),
            ),
            6,
            note="cars, poles and a facade, placed so that no object shadows another",
        ),
    ]
    return {scene.name: scene for scene in scenes}


def get_scene(name: str) -> SuiteScene:
    suite = scenario_suite()
    try:
        return suite[name]
    except KeyError:
        raise ValueError(f"unknown scene {name!r}; available: {', '.join(suite)}") from None
