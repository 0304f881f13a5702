"""Grids, symplectic Fourier analysis, Wigner/Husimi/Toeplitz transforms,
weighted norms, marginals and trace utilities."""

from .grids import (
    PhaseGrid,
    PhaseFunction,
    gaussian_phase_function,
    marginal,
    tensor_product,
    export_csv,
    import_csv,
)
from .spectral import (
    FourierPhaseFunction,
    ModeGrid,
    measurement_band,
    mode_grid_of,
    sample_modes,
    symplectic_fourier,
    inverse_symplectic_fourier,
)
from .norms import beta_norm, beta_norm_maximizer, sequence_norm
from .operators import (
    CoherentPoint,
    DensityOperator,
    coherent_projector,
    coherent_wavefunction,
    fourier_wigner,
    heat_semigroup,
    husimi,
    inverse_wigner,
    kernel_grid_for,
    partial_trace,
    toeplitz_quantize,
    trace_norm,
    trace_product,
    wigner_grid,
    wigner_transform,
)
from . import io

__all__ = [
    "PhaseGrid",
    "PhaseFunction",
    "FourierPhaseFunction",
    "ModeGrid",
    "CoherentPoint",
    "DensityOperator",
    "gaussian_phase_function",
    "marginal",
    "tensor_product",
    "export_csv",
    "import_csv",
    "measurement_band",
    "mode_grid_of",
    "sample_modes",
    "symplectic_fourier",
    "inverse_symplectic_fourier",
    "beta_norm",
    "beta_norm_maximizer",
    "sequence_norm",
    "coherent_projector",
    "coherent_wavefunction",
    "fourier_wigner",
    "heat_semigroup",
    "husimi",
    "inverse_wigner",
    "kernel_grid_for",
    "partial_trace",
    "toeplitz_quantize",
    "trace_norm",
    "trace_product",
    "wigner_grid",
    "wigner_transform",
    "io",
]
