"""Fourier-side marginal-hierarchy operators, free transport, truncated
time-ordered expansions, and propagation-estimate audits."""

from .operators import (
    apply_C,
    apply_T,
    free_transport,
    multiplier,
    transported_coupling,
    transported_pair,
)
from .sequences import (
    DysonString,
    GaussianToeplitzInitialData,
    HierarchySequence,
    KernelInitialData,
    tensor_initial,
)
from .dyson import (
    dyson_partial_sum,
    dyson_term,
    dump_terms_csv,
    simplex_nodes,
    term_norms,
)
from .audit import AuditReport, audit_propagation_bounds, random_mode_gaussian

__all__ = [
    "apply_C",
    "apply_T",
    "free_transport",
    "multiplier",
    "transported_coupling",
    "transported_pair",
    "DysonString",
    "GaussianToeplitzInitialData",
    "HierarchySequence",
    "KernelInitialData",
    "tensor_initial",
    "dyson_partial_sum",
    "dyson_term",
    "dump_terms_csv",
    "simplex_nodes",
    "term_norms",
    "AuditReport",
    "audit_propagation_bounds",
    "random_mode_gaussian",
]
