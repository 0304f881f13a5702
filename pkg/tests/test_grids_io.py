"""Grid bookkeeping, marginals, CSV and binary container round trips."""

import numpy as np
import pytest

from mflab.phase_space import (
    PhaseGrid,
    PhaseFunction,
    CoherentPoint,
    coherent_projector,
    export_csv,
    gaussian_phase_function,
    import_csv,
    io,
    marginal,
    tensor_product,
)


def test_grid_validation():
    with pytest.raises(ValueError):
        PhaseGrid(1, 7)
    with pytest.raises(ValueError):
        PhaseGrid(1, 24)
    with pytest.raises(ValueError):
        PhaseGrid(0, 16)
    with pytest.raises(ValueError):
        PhaseGrid(1, 16, velocity_cutoff=-1.0)


def test_cell_volume_reproduces_integrals():
    g = PhaseGrid(1, 32, velocity_cutoff=4.0)
    f = gaussian_phase_function(g, np.pi, 0.0, 0.6)
    assert abs(f.integral() - 1.0) < 1e-12


def test_normalized_flag_checks_mass():
    g = PhaseGrid(1, 16, velocity_cutoff=4.0)
    with pytest.raises(ValueError):
        PhaseFunction(g, np.ones(g.shape), normalized=True)


def test_product_marginal_recovers_factor():
    g = PhaseGrid(1, 16, velocity_cutoff=4.0)
    w = gaussian_phase_function(g, 2.0, 0.4, 0.7)
    u = gaussian_phase_function(g, 4.0, -0.4, 0.9)
    both = tensor_product(w, u)
    m = marginal(both, 1)
    assert np.abs(m.values - w.values).max() < 1e-12
    with pytest.raises(ValueError):
        marginal(w, 2)


def test_csv_round_trip(tmp_path):
    g = PhaseGrid(1, 16, velocity_cutoff=4.0)
    f = gaussian_phase_function(g, 1.0, 0.2, 0.8)
    path = tmp_path / "f.csv"
    export_csv(f, path)
    back = import_csv(g, path)
    assert np.abs(back.values - f.values).max() < 1e-15


def test_container_round_trip_phase_function(tmp_path):
    g = PhaseGrid(1, 16, velocity_cutoff=4.0)
    f = gaussian_phase_function(g, 1.0, 0.2, 0.8)
    path = tmp_path / "f.mfc"
    io.save_phase_function(path, f, extra={"tag": "test"})
    back = io.load_phase_function(path)
    assert back.grid == g
    assert np.array_equal(back.values, f.values)


def test_container_round_trip_operator(tmp_path):
    D = coherent_projector(16, CoherentPoint(2.0, 0.5, 0.5))
    path = tmp_path / "d.mfc"
    io.save_density_operator(path, D)
    back = io.load_density_operator(path)
    assert back.hbar == D.hbar
    assert np.array_equal(back.kernel, D.kernel)


def test_container_rejects_wrong_kind(tmp_path):
    g = PhaseGrid(1, 16, velocity_cutoff=4.0)
    f = gaussian_phase_function(g, 1.0, 0.2, 0.8)
    path = tmp_path / "f.mfc"
    io.save_phase_function(path, f)
    with pytest.raises(ValueError):
        io.load_density_operator(path)
