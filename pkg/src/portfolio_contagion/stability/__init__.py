from .exact import StabilityMatrixExact, direct_losses, stability_matrix_exact
from .gamma import closed_form_xi1, critical_asset_degree, gamma_p, gamma_q
from .kernel import (
    BranchingMatrix,
    FailureKernel,
    branching_matrix,
    estimate_F,
    failure_threshold,
    sample_size_biased_degree,
)
from .phase import (
    MCParams,
    NoBracketError,
    boundary_flags,
    critical_leverage,
    phase_boundary,
    xi1_at,
    xi1_grid,
)
from .spectral import PowerIterationError, largest_eigenvalue

__all__ = [
    "BranchingMatrix",
    "FailureKernel",
    "MCParams",
    "NoBracketError",
    "PowerIterationError",
    "StabilityMatrixExact",
    "boundary_flags",
    "branching_matrix",
    "closed_form_xi1",
    "critical_asset_degree",
    "critical_leverage",
    "direct_losses",
    "estimate_F",
    "failure_threshold",
    "gamma_p",
    "gamma_q",
    "largest_eigenvalue",
    "phase_boundary",
    "sample_size_biased_degree",
    "stability_matrix_exact",
    "xi1_at",
    "xi1_grid",
]
