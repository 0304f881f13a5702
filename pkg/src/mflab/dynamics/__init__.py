"""Time evolution: quantum N-body, Hartree, classical N-body, Vlasov."""

from ..potential import TrigPotential
from .quantum import (
    QuantumEnsemble,
    evolve_and_reduce,
    evolve_nbody_quantum,
    reduced_state,
    reduced_wigner,
    toeplitz_product_ensemble,
)
from .hartree import (
    evolve_hartree,
    evolve_hartree_checkpoints,
    hartree_energy,
    mean_field_potential,
)
from .classical import (
    ClassicalEnsemble,
    characteristics_in_field,
    evolve_classical_nbody,
    evolve_vlasov,
    phase_mode_estimates,
    sample_gaussian_ensemble,
    vlasov_grid_solve,
)

__all__ = [
    "TrigPotential",
    "QuantumEnsemble",
    "evolve_and_reduce",
    "evolve_nbody_quantum",
    "reduced_state",
    "reduced_wigner",
    "toeplitz_product_ensemble",
    "evolve_hartree",
    "evolve_hartree_checkpoints",
    "hartree_energy",
    "mean_field_potential",
    "ClassicalEnsemble",
    "characteristics_in_field",
    "evolve_classical_nbody",
    "evolve_vlasov",
    "phase_mode_estimates",
    "sample_gaussian_ensemble",
    "vlasov_grid_solve",
]
