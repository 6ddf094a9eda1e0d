"""Energy supply probability and finite-blocklength rate tools for
wirelessly powered communication links."""

from .specfun import (
    DEFAULT_TOL,
    ConvergenceError,
    DomainError,
    RealTol,
    complete_bell,
    gauss_2f1,
    gauss_2f1_deriv,
    lambert_w0,
    pochhammer,
)
from .single_pb import (
    BlocklengthPlan,
    LinkParams,
    RateResult,
    SearchError,
    achievable_rate_fbl,
    asymptotic_rate,
    asymptotic_supply_limit,
    capacity_prelog,
    energy_outage_prob,
    energy_supply_prob,
    high_reliability_rate,
    min_power_ratio,
    optimal_power_asymptotic,
    optimal_power_fbl,
    optimal_power_slope,
    within_derivation_domain,
)
from .multi_pb import (
    LaplaceDerivs,
    NetworkParams,
    StabilityError,
    achievable_rate_mp,
    energy_supply_prob_mp,
    f_deriv,
    laplace_derivs,
    laplace_derivs_bell,
    laplace_z,
    mean_harvested,
)
from .planner import (
    ScalingRate,
    UnsatisfiableError,
    harvest_overhead,
    min_harvest_blocklength,
    min_harvest_blocklength_mp,
    min_transmit_blocklength,
    scaling_rate,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    check_prefix_equivalence,
    estimate_supply_prob_mp,
    estimate_supply_prob_single,
    sample_ppp_energies,
    sample_ppp_energy,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "ConvergenceError",
    "DomainError",
    "RealTol",
    "complete_bell",
    "gauss_2f1",
    "gauss_2f1_deriv",
    "lambert_w0",
    "pochhammer",
    "BlocklengthPlan",
    "LinkParams",
    "RateResult",
    "SearchError",
    "achievable_rate_fbl",
    "asymptotic_rate",
    "asymptotic_supply_limit",
    "capacity_prelog",
    "energy_outage_prob",
    "energy_supply_prob",
    "high_reliability_rate",
    "min_power_ratio",
    "optimal_power_asymptotic",
    "optimal_power_fbl",
    "optimal_power_slope",
    "within_derivation_domain",
    "LaplaceDerivs",
    "NetworkParams",
    "StabilityError",
    "achievable_rate_mp",
    "energy_supply_prob_mp",
    "f_deriv",
    "laplace_derivs",
    "laplace_derivs_bell",
    "laplace_z",
    "mean_harvested",
    "ScalingRate",
    "UnsatisfiableError",
    "harvest_overhead",
    "min_harvest_blocklength",
    "min_harvest_blocklength_mp",
    "min_transmit_blocklength",
    "scaling_rate",
    "McConfig",
    "McEstimate",
    "check_prefix_equivalence",
    "estimate_supply_prob_mp",
    "estimate_supply_prob_single",
    "sample_ppp_energies",
    "sample_ppp_energy",
    "__version__",
]
