import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_gaussian_mixture(grid, rng, components=3, sigma_range=(0.45, 0.9)):
    """Random nonnegative normalized mixture of wrapped Gaussians."""
    from mflab.phase_space.grids import PhaseFunction, gaussian_phase_function

    vals = np.zeros(grid.shape)
    ws = rng.dirichlet(np.ones(components))
    vmax = grid.velocity_cutoff
    for w in ws:
        q = rng.uniform(0, grid.period)
        p = rng.uniform(-0.3 * vmax, 0.3 * vmax)
        sx = rng.uniform(*sigma_range)
        sv = rng.uniform(*sigma_range)
        g = gaussian_phase_function(grid, q, p, sx, sv)
        vals += w * g.values
    f = PhaseFunction(grid, vals)
    return PhaseFunction(grid, vals / f.integral())
