"""mflab: a numerical laboratory for mean-field limits of quantum and
classical many-body dynamics on the torus.

Subpackages
-----------
phase_space
    Grids, symplectic Fourier analysis, Wigner/Husimi/Toeplitz
    transforms, weighted norms, marginals, trace utilities.
dynamics
    Quantum N-body, Hartree, classical N-body and Vlasov evolution.
hierarchy
    Fourier-side marginal-hierarchy operators, free transport, truncated
    time-ordered expansions, propagation-estimate audits.
constants
    Every named rate constant, horizon and threshold, with root finders
    for the implicitly defined ones.
transport_metrics
    Exact discrete optimal-transport distances and couplings.
harness
    Configuration, convergence studies, bound audits, CLI.
"""

__version__ = "0.1.0"
