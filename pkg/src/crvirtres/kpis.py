"""Performance indicators computed from the stationary distribution.

Three quantities summarize the secondary users' experience: the probability
that a fresh session is refused (blocking), the chance an admitted session is
killed by primary activity (forced termination), and the average number of
channels working per session (throughput, as a reward on occupied states).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    State,
    StateSpace,
    SystemConfig,
    admits_su,
    build_generator,
    enumerate_states,
    pu_arrival_outcome,
    transition_rates,
)
from .solver import residual, solve_stationary

__all__ = [
    "KpiReport",
    "ChainSolution",
    "solve_chain",
    "blocking_probability",
    "forced_termination_probability",
    "average_throughput",
    "compute_kpis",
]

# Balance-defect ceiling accepted from the solver before a report is emitted.
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class ChainSolution:
    """State space, generator, and stationary vector for one configuration."""

    config: SystemConfig
    space: StateSpace
    generator: np.ndarray
    pi: np.ndarray


@dataclass(frozen=True)
class KpiReport:
    p_block: float
    p_ft: float
    c_avg: float
    c_avg_conditional: float
    busy_probability: float
    config: SystemConfig


def solve_chain(config: SystemConfig, rates=transition_rates) -> ChainSolution:
    """Enumerate, assemble, and solve the chain for ``config``.

    ``rates`` selects the transition structure (full-sharing by default, the
    minimum-allocation variant for baseline comparisons).
    """
    space = enumerate_states(config)
    generator = build_generator(config, space, rates)
    pi = solve_stationary(generator)
    defect = residual(generator, pi)
    if defect > RESIDUAL_TOL:
        raise ArithmeticError(
            f"stationary solve residual {defect:g} exceeds {RESIDUAL_TOL:g}"
        )
    return ChainSolution(config=config, space=space, generator=generator, pi=pi)


def blocking_probability(config: SystemConfig, space: StateSpace, pi: np.ndarray) -> float:
    """Stationary mass of the states where a new secondary would be refused."""
    return float(
        sum(pi[i] for i, state in enumerate(space.states) if not admits_su(config, state))
    )


def forced_termination_probability(
    config: SystemConfig,
    space: StateSpace,
    pi: np.ndarray,
    p_block: float | None = None,
) -> float:
    """Termination rate over admission rate.

    The numerator weighs each state's termination count by the primary
    arrival rate and the state's probability; the denominator is the rate at
    which sessions actually enter the system.
    """
    if p_block is None:
        p_block = blocking_probability(config, space, pi)
    admitted_rate = (1.0 - p_block) * config.su_arrival_rate
    if admitted_rate <= 0:
        raise ValueError(
            "no secondary session is ever admitted; termination probability undefined"
        )
    terminated_rate = 0.0
    for i, state in enumerate(space.states):
        if state.pu >= config.bands:
            continue
        _, dropped = pu_arrival_outcome(config, state)
        if dropped > 0:
            terminated_rate += dropped * config.pu_arrival_rate * pi[i]
    return terminated_rate / admitted_rate


def average_throughput(config: SystemConfig, space: StateSpace, pi: np.ndarray) -> float:
    """Expected channels-per-session reward, zero on the empty-secondary states.

    In an occupied state every idle channel is working for some session, so
    the per-session reward is (idle channels) / (session count).
    """
    n = config.channels_per_band
    total = 0.0
    for i, state in enumerate(space.states):
        if state.su >= 1:
            total += n * (config.bands - state.pu) / state.su * pi[i]
    return total


def compute_kpis(config: SystemConfig) -> KpiReport:
    """Full pipeline: enumerate, solve, and evaluate all three indicators.

    ``c_avg`` averages the reward over all time; ``c_avg_conditional``
    divides by the probability of having at least one session, giving the
    mean allocation an observer sees while secondaries are present.
    """
    solution = solve_chain(config)
    space, pi = solution.space, solution.pi
    p_block = blocking_probability(config, space, pi)
    p_ft = forced_termination_probability(config, space, pi, p_block)
    c_avg = average_throughput(config, space, pi)
    busy = float(sum(pi[i] for i, s in enumerate(space.states) if s.su >= 1))
    c_avg_conditional = c_avg / busy if busy > 0 else 0.0
    return KpiReport(
        p_block=p_block,
        p_ft=p_ft,
        c_avg=c_avg,
        c_avg_conditional=c_avg_conditional,
        busy_probability=busy,
        config=config,
    )
