"""Reservation tuning: pick the level that best trades termination for blocking.

Reserving channels makes admission stingier, which protects running sessions
(fewer forced terminations) at the price of refusing more newcomers.  The
cost ``zeta = alpha * p_ft + p_block`` prices a termination at ``alpha``
blockings; minimizing it over the handful of feasible integer reservation
levels is done by plain exhaustive evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

from .kpis import compute_kpis
from .model import SystemConfig

__all__ = [
    "CostPoint",
    "OptimalPolicy",
    "SweepPoint",
    "objective",
    "optimal_reservation",
    "sweep",
]


@dataclass(frozen=True)
class CostPoint:
    """Cost of one reservation level: the weighted sum and its two parts."""

    reserved: int
    zeta: float
    p_ft: float
    p_block: float
    alpha: float


@dataclass(frozen=True)
class OptimalPolicy:
    """Best reservation level plus the whole evaluated cost curve."""

    r_star: int
    curve: tuple[CostPoint, ...]
    config: SystemConfig

    @property
    def zeta_star(self) -> float:
        return self.curve[self.r_star].zeta


class SweepPoint(NamedTuple):
    """One optimization result at a (primary arrival rate, secondary load) pair."""

    pu_arrival_rate: float
    su_load: float
    policy: OptimalPolicy


def objective(config: SystemConfig, alpha: float) -> CostPoint:
    """Weighted termination-plus-blocking cost at the config's own reservation."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    report = compute_kpis(config)
    return CostPoint(
        reserved=config.reserved,
        zeta=alpha * report.p_ft + report.p_block,
        p_ft=report.p_ft,
        p_block=report.p_block,
        alpha=alpha,
    )


def optimal_reservation(config: SystemConfig, alpha: float) -> OptimalPolicy:
    """Exhaustively evaluate every feasible reservation level and keep the argmin.

    Feasible levels are 0 through ``total_channels - min_channels``; beyond
    that no session could ever be admitted.  Ties go to the smallest level,
    which admits more users at equal cost.
    """
    curve: list[CostPoint] = []
    best = -1
    for r in range(config.total_channels - config.min_channels + 1):
        point = objective(replace(config, reserved=r), alpha)
        curve.append(point)
        if best < 0 or point.zeta < curve[best].zeta:
            best = r
    return OptimalPolicy(r_star=best, curve=tuple(curve), config=config)


def sweep(
    config: SystemConfig,
    alpha: float,
    pu_arrival_grid: tuple[float, ...] | None = None,
    su_load_grid: tuple[float, ...] | None = None,
) -> list[SweepPoint]:
    """Optimize over a grid of traffic intensities, rows in grid order.

    ``None`` pins an axis to the template config's own value; an explicitly
    empty grid yields an empty table.  The secondary axis is offered load in
    per-channel units, converted through the template's per-channel rate.
    """
    if pu_arrival_grid is None:
        pu_arrival_grid = (config.pu_arrival_rate,)
    if su_load_grid is None:
        su_load_grid = (config.su_load,)
    table: list[SweepPoint] = []
    for lam_p in pu_arrival_grid:
        for load in su_load_grid:
            point = replace(
                config,
                pu_arrival_rate=lam_p,
                su_arrival_rate=load * config.su_rate_per_channel,
            )
            table.append(SweepPoint(lam_p, load, optimal_reservation(point, alpha)))
    return table
