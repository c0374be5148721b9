"""Two-island Wright-Fisher and seed-bank chains: exact stationary moments,
two-island diffusion moments, and explicit approximation bounds."""

from .beta import BetaParams, beta_moment, beta_params_from_chain, beta_poly_expectation
from .bounds import (
    BoundBreakdown,
    HNorms,
    SteinFactors,
    assemble_total,
    polynomial_h_norms,
    sb_beta_bound,
    sb_ti_bound,
    stein_factors,
    wf_beta_bound,
    wf_ti_bound,
)
from .chains import (
    ChainParams,
    ChainState,
    ModelKind,
    RngSeed,
    conditional_drift,
    initial_state,
    run_chain,
    sample_steps,
    step,
    validate_params,
)
from .diffusion import (
    LargeMigrationLimit,
    TIParams,
    generator_apply,
    limit_moments_large_c,
    map_chain_to_ti,
    ti_stationary_moments,
)
from .dual import (
    DualAbsorptionEstimate,
    IntegralKind,
    UrnRates,
    occupancy_probabilities,
    simulate_dual_absorption,
    simulate_urn_expected_counts,
    urn_integral_closed_form,
    urn_integral_quadrature,
)
from .moments import (
    MomentTable,
    MomentTransfer,
    exact_stationary_moments,
    joint_factorial_moments,
    leading_order_exy2,
    transfer_matrix,
)
from .regimes import ScalingRegime

__version__ = "0.1.0"

__all__ = [
    "BetaParams", "beta_moment", "beta_params_from_chain", "beta_poly_expectation",
    "BoundBreakdown", "HNorms", "SteinFactors", "assemble_total",
    "polynomial_h_norms", "sb_beta_bound", "sb_ti_bound", "stein_factors",
    "wf_beta_bound", "wf_ti_bound",
    "ChainParams", "ChainState", "ModelKind", "RngSeed", "conditional_drift",
    "initial_state", "run_chain", "sample_steps", "step", "validate_params",
    "LargeMigrationLimit", "TIParams", "generator_apply", "limit_moments_large_c",
    "map_chain_to_ti", "ti_stationary_moments",
    "DualAbsorptionEstimate", "IntegralKind", "UrnRates",
    "occupancy_probabilities", "simulate_dual_absorption",
    "simulate_urn_expected_counts", "urn_integral_closed_form",
    "urn_integral_quadrature",
    "MomentTable", "MomentTransfer", "exact_stationary_moments",
    "joint_factorial_moments", "leading_order_exy2", "transfer_matrix",
    "ScalingRegime",
    "__version__",
]
