import numpy as np
import pytest

from cylbie import (
    IlluminationSet,
    add_noise,
    curve_from_radial,
    derive_params,
    far_field,
    grid_nodes,
    solve_direct,
    with_incidence,
)


@pytest.fixture(scope="session")
def benchmark_params():
    """Exterior (1,1), interior (2,2), omega=2.5, theta=pi/3."""
    return derive_params(1.0, 1.0, 2.0, 2.0, omega=2.5, theta=np.pi / 3, phi=0.0)


@pytest.fixture(scope="session")
def make_illumination_data():
    """Far-field data factory: forward solve at n_forward, observed on the
    2*(n_obs/2)-point circle grid, optional noise with per-illumination seeds."""

    def build(params, radial, phis, delta=0.0, seed=7, n_obs=64, n_forward=64):
        curve = curve_from_radial(radial, n_forward)
        obs = grid_nodes(n_obs // 2)
        patterns = []
        for index, phi in enumerate(phis, start=1):
            params_l = with_incidence(params, phi)
            densities = solve_direct(curve, params_l)
            pattern = far_field(curve, params_l, densities, obs)
            patterns.append(add_noise(pattern, delta, delta, [seed, index]))
        return IlluminationSet(params=params, phis=tuple(phis), patterns=tuple(patterns))

    return build
