"""Sharp mean-based upper bounds for moments of order statistics of
nonnegative random variables, the distributions attaining them, and
independent verification oracles (exact finite-support moments, quantile
quadrature, Monte Carlo, brute-force sharpness search)."""

__version__ = "0.1.0"

from .bounds import (
    ALPHA_BOUNDARY_SNAP,
    Attainability,
    BoundReport,
    MomentQuery,
    Regime,
    SampleModel,
    bound_independent_power,
    bound_moment,
    constant_A_low,
    constant_A_mid,
    solve_rho,
    solve_rho_gcm,
)
from .errors import DomainError, NumericError, UnsupportedRegimeError
from .extremal import (
    BetaPowerQuantile,
    Degenerate,
    HeavyTailWitness,
    IndepMinConfig,
    LogSquareTail,
    PowerLaw,
    TwoPoint,
    heavy_tail_witness,
    log_square_witness,
    minimum_extremal_indep,
    quantile_extremal_low,
    two_point_approach_family,
    two_point_extremal,
)
from .kernel import (
    OrderStatParams,
    elementary_symmetric,
    order_cdf,
    order_pdf,
    order_sf,
    regularized_incomplete_beta,
)
from .oracle import (
    DiscreteDistribution,
    MomentEstimate,
    StepFunction,
    SweepResult,
    exact_moment_iid_discrete,
    exact_moment_indep_discrete,
    mc_estimate_moment,
    moment_from_quantile,
    partial_power_moment,
    sharpness_search_two_point,
    step_power_inequality,
    survival_power_functional,
)

__all__ = [
    "ALPHA_BOUNDARY_SNAP",
    "Attainability",
    "BetaPowerQuantile",
    "BoundReport",
    "Degenerate",
    "DiscreteDistribution",
    "DomainError",
    "HeavyTailWitness",
    "IndepMinConfig",
    "LogSquareTail",
    "MomentEstimate",
    "MomentQuery",
    "NumericError",
    "OrderStatParams",
    "PowerLaw",
    "Regime",
    "SampleModel",
    "StepFunction",
    "SweepResult",
    "TwoPoint",
    "UnsupportedRegimeError",
    "bound_independent_power",
    "bound_moment",
    "constant_A_low",
    "constant_A_mid",
    "elementary_symmetric",
    "exact_moment_iid_discrete",
    "exact_moment_indep_discrete",
    "heavy_tail_witness",
    "log_square_witness",
    "mc_estimate_moment",
    "minimum_extremal_indep",
    "moment_from_quantile",
    "order_cdf",
    "order_pdf",
    "order_sf",
    "partial_power_moment",
    "quantile_extremal_low",
    "regularized_incomplete_beta",
    "sharpness_search_two_point",
    "solve_rho",
    "solve_rho_gcm",
    "step_power_inequality",
    "survival_power_functional",
    "two_point_approach_family",
    "two_point_extremal",
]
