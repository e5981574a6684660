"""Fire-sale contagion through overlapping portfolios on bank-asset networks."""
from .balance import (
    DEFAULT_ALPHA,
    BalanceSheet,
    FinancialSystem,
    ImpactFunction,
    MarketState,
    build_uniform_system,
    calibrate_alpha,
    portfolio_value,
)
from .cascade import CascadeResult, Shock, ShockKind, apply_shock, is_solvent, run_cascade, step
from .montecarlo import EnsembleStats, ExperimentConfig, estimate_transition, run_ensemble, sweep
from .network import BipartiteNetwork, degree_stats, gen_poisson_bipartite, gen_regular_bipartite
from .stability import (
    branching_matrix,
    closed_form_xi1,
    estimate_F,
    largest_eigenvalue,
    phase_boundary,
    sample_size_biased_degree,
    stability_matrix_exact,
)

__version__ = "0.1.0"

__all__ = [
    "BalanceSheet",
    "BipartiteNetwork",
    "CascadeResult",
    "DEFAULT_ALPHA",
    "EnsembleStats",
    "ExperimentConfig",
    "FinancialSystem",
    "ImpactFunction",
    "MarketState",
    "Shock",
    "ShockKind",
    "apply_shock",
    "branching_matrix",
    "build_uniform_system",
    "calibrate_alpha",
    "closed_form_xi1",
    "degree_stats",
    "estimate_F",
    "estimate_transition",
    "gen_poisson_bipartite",
    "gen_regular_bipartite",
    "is_solvent",
    "largest_eigenvalue",
    "phase_boundary",
    "portfolio_value",
    "run_cascade",
    "run_ensemble",
    "sample_size_biased_degree",
    "stability_matrix_exact",
    "step",
    "sweep",
]
