"""Simulation and verification toolkit for PPF-aware hybrid-gain finite-time sliding mode control."""

__version__ = "0.1.0"

from .control import (
    SecondOrderPlant,
    SlidingConfig,
    first_order_control,
    second_order_baseline_control,
    second_order_ppf_control,
    sliding_variable,
)
from .exceptions import (
    BracketError,
    ConfigError,
    ConvergenceError,
    DomainError,
    FTSMCError,
    InfeasibleGainError,
    InfeasibleStateError,
    NumericDivergenceError,
)
from .gain import (
    FeasibilityReport,
    GaussianGain,
    HybridGainSpec,
    MixedPowerGain,
    check_feasibility_first_order,
    check_feasibility_second_order,
    eval_gain,
    inner_settle_bound,
    reach_time_bounds,
    residual_radius,
)
from .metrics import Comparison, MetricsReport, compare, compute_metrics
from .ppf import (
    PerformanceFunction,
    TransformedState,
    rho,
    rho_dot,
    scaled_disturbance_bound,
    state_from_xi,
    xi_from_state,
)
from .scalarmath import Tolerance, bisect, erf, erf_inv, hard_sign, smooth_sign
from .scenario import Scenario, dumps_scenario, load_scenario, loads_scenario, run_scenario
from .sim import (
    Disturbance,
    Event,
    SimConfig,
    Trajectory,
    eval_disturbance,
    inflate_envelope,
    measure_reaching_time,
    run_first_order,
    run_second_order,
)

__all__ = [
    "__version__",
    "SecondOrderPlant",
    "SlidingConfig",
    "first_order_control",
    "second_order_baseline_control",
    "second_order_ppf_control",
    "sliding_variable",
    "BracketError",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "FTSMCError",
    "InfeasibleGainError",
    "InfeasibleStateError",
    "NumericDivergenceError",
    "FeasibilityReport",
    "GaussianGain",
    "HybridGainSpec",
    "MixedPowerGain",
    "check_feasibility_first_order",
    "check_feasibility_second_order",
    "eval_gain",
    "inner_settle_bound",
    "reach_time_bounds",
    "residual_radius",
    "Comparison",
    "MetricsReport",
    "compare",
    "compute_metrics",
    "PerformanceFunction",
    "TransformedState",
    "rho",
    "rho_dot",
    "scaled_disturbance_bound",
    "state_from_xi",
    "xi_from_state",
    "Tolerance",
    "bisect",
    "erf",
    "erf_inv",
    "hard_sign",
    "smooth_sign",
    "Scenario",
    "dumps_scenario",
    "load_scenario",
    "loads_scenario",
    "run_scenario",
    "Disturbance",
    "Event",
    "SimConfig",
    "Trajectory",
    "eval_disturbance",
    "inflate_envelope",
    "measure_reaching_time",
    "run_first_order",
    "run_second_order",
]
