"""Spectrum sharing with virtual reservation: exact chain analysis and simulation.

The package models licensed bands shared opportunistically by secondary
sessions that need a minimum number of channels each.  It solves the
occupancy chain exactly (blocking, forced termination, per-session
throughput), compares jump-chain drift against a minimum-allocation
baseline, searches for the best reservation level, and cross-validates
everything with an event-driven simulator.
"""
from .model import (
    State,
    StateSpace,
    SystemConfig,
    admits_su,
    build_config,
    build_generator,
    enumerate_states,
    max_pu,
    max_su,
    min_alloc_transition_rates,
    pu_arrival_outcome,
    transition_rates,
)
from .solver import residual, solve_stationary
from .kpis import (
    ChainSolution,
    KpiReport,
    average_throughput,
    blocking_probability,
    compute_kpis,
    forced_termination_probability,
    solve_chain,
)
from .drift import DriftReport, drift_comparison, embedded_chain, state_drift
from .optimizer import (
    CostPoint,
    OptimalPolicy,
    SweepPoint,
    objective,
    optimal_reservation,
    sweep,
)
from .simulator import (
    FSU,
    MIN_ALLOC,
    NON_COOPERATIVE,
    KpiComparison,
    SimKpiReport,
    SimPolicy,
    ValidationReport,
    compare_reports,
    simulate,
    validate,
)
from .scenario import (
    Scenario,
    ScenarioError,
    parse_scenario,
    serialize_scenario,
    with_overrides,
)

__version__ = "0.1.0"

__all__ = [
    "State",
    "StateSpace",
    "SystemConfig",
    "admits_su",
    "build_config",
    "build_generator",
    "enumerate_states",
    "max_pu",
    "max_su",
    "min_alloc_transition_rates",
    "pu_arrival_outcome",
    "transition_rates",
    "residual",
    "solve_stationary",
    "ChainSolution",
    "KpiReport",
    "average_throughput",
    "blocking_probability",
    "compute_kpis",
    "forced_termination_probability",
    "solve_chain",
    "DriftReport",
    "drift_comparison",
    "embedded_chain",
    "state_drift",
    "CostPoint",
    "OptimalPolicy",
    "SweepPoint",
    "objective",
    "optimal_reservation",
    "sweep",
    "FSU",
    "MIN_ALLOC",
    "NON_COOPERATIVE",
    "KpiComparison",
    "SimKpiReport",
    "SimPolicy",
    "ValidationReport",
    "compare_reports",
    "simulate",
    "validate",
    "Scenario",
    "ScenarioError",
    "parse_scenario",
    "serialize_scenario",
    "with_overrides",
    "__version__",
]
