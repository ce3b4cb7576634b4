import numpy as np
import pytest

from scnforge.geometry import SampledPath
from scnforge.scenario import (
    FrictionSpec,
    Scenario,
    TrackBounds,
    VehicleEntry,
    VehicleSpec,
)


def straight_path(length: float = 100.0, step: float = 0.5) -> SampledPath:
    n = int(round(length / step)) + 1
    s = np.arange(n) * step
    return SampledPath(
        s=s,
        pts=np.column_stack([s, np.zeros(n)]),
        theta=np.zeros(n),
        kappa=np.zeros(n),
    )


def arc_path(radius: float = 20.0, length: float = 100.0, step: float = 0.5) -> SampledPath:
    n = int(round(length / step)) + 1
    s = np.arange(n) * step
    phi = s / radius
    return SampledPath(
        s=s,
        pts=np.column_stack([radius * np.sin(phi), radius - radius * np.cos(phi)]),
        theta=phi,
        kappa=np.full(n, 1.0 / radius),
    )


def straight_scenario(**overrides) -> Scenario:
    defaults = dict(
        name="test",
        track=TrackBounds(left=[[-20.0, 6.0], [260.0, 6.0]], right=[[-20.0, -6.0], [260.0, -6.0]]),
        vehicles=[
            VehicleEntry(
                spec=VehicleSpec(id="ego", length=4.0, width=2.0, is_vut=True),
                support=[[0.0, 0.0], [100.0, 0.0], [200.0, 0.0]],
                v_start=20.0,
            )
        ],
        friction=FrictionSpec(a_max=10.0, v_lim=40.0),
        planning_horizon=3.0,
        sampling_step=0.5,
    )
    defaults.update(overrides)
    return Scenario(**defaults)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260809)


def random_support(rng: np.random.Generator, n_points: int, max_turn: float = 0.7) -> np.ndarray:
    """Well-spaced random support points: a jittered walk with bounded turns."""
    heading = rng.uniform(-np.pi, np.pi)
    pos = rng.uniform(-50.0, 50.0, size=2)
    pts = [pos.copy()]
    for _ in range(n_points - 1):
        heading += rng.uniform(-max_turn, max_turn)
        step = rng.uniform(8.0, 20.0)
        pos = pos + step * np.array([np.cos(heading), np.sin(heading)])
        pts.append(pos.copy())
    return np.array(pts)
