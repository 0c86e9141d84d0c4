"""Jump-chain drift: which way the next transition pushes the system.

Arrivals (rightward for primaries, upward for secondaries) push toward the
congested border; departures pull back toward empty.  The per-state drift is
the normalized balance of those jump probabilities, in [-1, 1].  Comparing
the full-sharing model against a minimum-allocation baseline shows how the
accelerated secondary departures shift the drift toward stability.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    State,
    SystemConfig,
    min_alloc_transition_rates,
    transition_rates,
)
from .kpis import solve_chain

__all__ = ["DriftReport", "embedded_chain", "state_drift", "drift_comparison"]


def embedded_chain(generator: np.ndarray) -> np.ndarray:
    """Jump-probability matrix of the chain embedded at transition epochs.

    Each row of the generator's off-diagonal part is normalized by its exit
    rate.  A row with no exit (an absorbing state) cannot occur for a valid
    configuration and is rejected as a structural bug.
    """
    q = np.asarray(generator, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError(f"generator must be square, got shape {q.shape}")
    off = q.copy()
    np.fill_diagonal(off, 0.0)
    exit_rates = off.sum(axis=1)
    if np.any(exit_rates <= 0):
        dead = int(np.argmin(exit_rates))
        raise ValueError(f"row {dead} is absorbing; embedded chain undefined")
    return off / exit_rates[:, None]


def state_drift(
    config: SystemConfig,
    state: State,
    rates: list[tuple[State, float]] | None = None,
    *,
    include_ft_edges: bool = True,
) -> float:
    """Normalized directional balance of the outgoing rates from ``state``.

    Rightward (primary arrival) and upward (secondary arrival) rates count
    positive, leftward and downward departures negative; the sum is divided
    by the total so the result lies in [-1, 1].  A primary arrival that also
    terminates sessions moves right-and-down; by default its rate counts as
    rightward (the arrival is what moves).  With ``include_ft_edges=False``
    such diagonal edges are excluded from the balance entirely, giving a
    strict four-neighbour reading.
    """
    if rates is None:
        rates = transition_rates(config, state)
    right = up = left = down = 0.0
    for target, rate in rates:
        if target.pu == state.pu + 1:
            if target.su != state.su and not include_ft_edges:
                continue
            right += rate
        elif target.pu == state.pu - 1:
            left += rate
        elif target.su == state.su + 1:
            up += rate
        elif target.su == state.su - 1:
            down += rate
        else:
            raise ValueError(f"unrecognised transition {state} -> {target}")
    total = right + up + left + down
    if total <= 0:
        raise ValueError(f"state {state} has no outgoing rate to balance")
    return (right + up - left - down) / total


@dataclass(frozen=True, eq=False)
class DriftReport:
    """Per-state drift for one allocation policy, with occupancy-weighted means."""

    label: str
    states: tuple[State, ...]
    drift: np.ndarray
    drift_strict: np.ndarray
    mean_drift: float
    mean_drift_strict: float


def _drift_arrays(config: SystemConfig, states, rates_fn) -> tuple[np.ndarray, np.ndarray]:
    drift = np.empty(len(states))
    strict = np.empty(len(states))
    for i, state in enumerate(states):
        rates = rates_fn(config, state)
        drift[i] = state_drift(config, state, rates)
        strict[i] = state_drift(config, state, rates, include_ft_edges=False)
    return drift, strict


def drift_comparison(config: SystemConfig) -> tuple[DriftReport, DriftReport]:
    """Drift of the full-sharing model next to the minimum-allocation baseline.

    Both chains live on the same state space (admission and termination rules
    are shared; only the secondary departure rate differs), so the reports
    line up state by state.  Both means are weighted by the sharing model's
    stationary occupancy: under a common measure the per-state dominance of
    the accelerated departures carries over to the summaries, whereas each
    policy's own occupancy would mostly reflect where that policy idles.
    """
    solution = solve_chain(config)
    states = solution.space.states
    reports = []
    for label, rates_fn in (("fsu", transition_rates), ("min_alloc", min_alloc_transition_rates)):
        drift, strict = _drift_arrays(config, states, rates_fn)
        reports.append(
            DriftReport(
                label=label,
                states=states,
                drift=drift,
                drift_strict=strict,
                mean_drift=float(solution.pi @ drift),
                mean_drift_strict=float(solution.pi @ strict),
            )
        )
    return reports[0], reports[1]
