"""Event-driven simulation of the band/channel occupancy process.

Three allocation policies are playable:

* ``fsu_virtual_reservation`` -- the analytical model itself: admission behind
  the reservation bar, greedy sharing of every idle channel, terminations on
  primary arrivals that break the per-session minimum.
* ``min_alloc_cooperative`` -- same admission and termination rules, but each
  session keeps exactly its minimum allocation, so service never speeds up.
* ``non_cooperative`` -- sessions grab specific channels with no reservation
  and no sharing; a primary arrival displaces exactly the sessions sitting on
  its band, which survive only if enough idle channels remain elsewhere.

The two cooperative policies depend on the state only through the occupancy
pair, and every holding time is exponential, so they are simulated directly
on the pair process with competing clocks (resampling the aggregate departure
clock at each jump is exact by memorylessness).  That inner loop is compiled.
The non-cooperative policy needs channel identities and is simulated
entity-by-entity in plain Python.

Blocked arrivals are modelled as self-loop events so arrival and block counts
come from the same event stream that an entity-level simulation would see.
Confidence intervals are Student-t over independent replication means.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from numba import njit
from scipy.stats import t as student_t

from .kpis import KpiReport, compute_kpis
from .model import (
    State,
    SystemConfig,
    admits_su,
    enumerate_states,
    min_alloc_transition_rates,
    pu_arrival_outcome,
    transition_rates,
)

__all__ = [
    "FSU",
    "MIN_ALLOC",
    "NON_COOPERATIVE",
    "SimPolicy",
    "SimKpiReport",
    "KpiComparison",
    "ValidationReport",
    "simulate",
    "compare_reports",
    "validate",
]

FSU = "fsu_virtual_reservation"
MIN_ALLOC = "min_alloc_cooperative"
NON_COOPERATIVE = "non_cooperative"
_KINDS = (FSU, MIN_ALLOC, NON_COOPERATIVE)

# Event codes shared between the table builder and the compiled loop.
_EV_PU_ARRIVAL = 0
_EV_SU_ADMIT = 1
_EV_SU_BLOCK = 2
_EV_MOVE = 3  # departures: no counter, just a state change


@dataclass(frozen=True)
class SimPolicy:
    """Which allocation rules to play, and the reservation level if any.

    ``reserved=None`` inherits the configuration's own level.  The
    non-cooperative policy has no reservation concept, so anything but 0 (or
    omission) is a mismatch.
    """

    kind: str = FSU
    reserved: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind == NON_COOPERATIVE and self.reserved not in (None, 0):
            raise ValueError(
                "non_cooperative has no reservation; leave reserved unset or 0"
            )


@dataclass(frozen=True)
class SimKpiReport:
    """Point estimates, 95% confidence half-widths, and raw event counts."""

    policy: SimPolicy
    config: SystemConfig
    horizon: float
    replications: int
    seed: int
    sim_time: float
    su_arrivals: int
    su_admitted: int
    su_blocked: int
    ft_events: int
    su_force_terminated: int
    p_block: float
    p_block_half_width: float
    p_ft: float
    p_ft_half_width: float
    c_avg: float
    c_avg_half_width: float
    c_avg_conditional: float
    c_avg_conditional_half_width: float
    occupancy: dict[State, float]
    warnings: tuple[str, ...]


class _RepResult(NamedTuple):
    arrivals: int
    admitted: int
    blocked: int
    ft_events: int
    dropped: int
    p_block: float
    p_ft: float
    c_avg: float
    c_avg_conditional: float
    occupancy: dict[State, float]


def _effective_config(config: SystemConfig, policy: SimPolicy) -> SystemConfig:
    if policy.kind == NON_COOPERATIVE:
        return replace(config, reserved=0)
    if policy.reserved is not None:
        return replace(config, reserved=policy.reserved)
    return config


@njit(cache=True)
def _chain_loop(
    seed, horizon, start, ev_count, ev_cum, ev_target, ev_code, ev_drop, total_rate, time_in_state
):
    np.random.seed(seed)
    t = 0.0
    state = start
    arrivals = 0
    admitted = 0
    blocked = 0
    ft_events = 0
    dropped = 0
    while True:
        tot = total_rate[state]
        if tot <= 0.0:
            time_in_state[state] += horizon - t
            break
        dt = np.random.exponential(1.0 / tot)
        if t + dt >= horizon:
            time_in_state[state] += horizon - t
            break
        time_in_state[state] += dt
        t += dt
        u = np.random.random() * tot
        k = 0
        last = ev_count[state] - 1
        while k < last and u > ev_cum[state, k]:
            k += 1
        code = ev_code[state, k]
        if code == _EV_SU_ADMIT:
            arrivals += 1
            admitted += 1
        elif code == _EV_SU_BLOCK:
            arrivals += 1
            blocked += 1
        elif code == _EV_PU_ARRIVAL:
            d = ev_drop[state, k]
            if d > 0:
                ft_events += 1
                dropped += d
        state = ev_target[state, k]
    return arrivals, admitted, blocked, ft_events, dropped


class _ChainTables(NamedTuple):
    states: tuple[State, ...]
    start: int
    ev_count: np.ndarray
    ev_cum: np.ndarray
    ev_target: np.ndarray
    ev_code: np.ndarray
    ev_drop: np.ndarray
    total_rate: np.ndarray
    reward: np.ndarray
    busy: np.ndarray


def _chain_tables(config: SystemConfig, kind: str) -> _ChainTables:
    """Precompute per-state event menus for the compiled loop.

    Each state's menu lists (cumulative rate, target index, code, drop count)
    rows; the loop samples a uniform point under the total rate and walks the
    menu.  Blocking states get a self-loop carrying the arrival rate.
    """
    space = enumerate_states(config)
    rates_fn = transition_rates if kind == FSU else min_alloc_transition_rates
    n = len(space)
    width = 4
    ev_rate = np.zeros((n, width))
    ev_target = np.zeros((n, width), dtype=np.int64)
    ev_code = np.full((n, width), _EV_MOVE, dtype=np.int64)
    ev_drop = np.zeros((n, width), dtype=np.int64)
    ev_count = np.zeros(n, dtype=np.int64)
    reward = np.zeros(n)
    busy = np.zeros(n)
    for i, state in enumerate(space.states):
        rows = []
        for target, rate in rates_fn(config, state):
            j = space.index[target]
            if target.pu == state.pu + 1:
                _, drop = pu_arrival_outcome(config, state)
                rows.append((rate, j, _EV_PU_ARRIVAL, drop))
            elif target.su == state.su + 1:
                rows.append((rate, j, _EV_SU_ADMIT, 0))
            else:
                rows.append((rate, j, _EV_MOVE, 0))
        if config.su_arrival_rate > 0 and not admits_su(config, state):
            rows.append((config.su_arrival_rate, i, _EV_SU_BLOCK, 0))
        ev_count[i] = len(rows)
        for k, (rate, j, code, drop) in enumerate(rows):
            ev_rate[i, k] = rate
            ev_target[i, k] = j
            ev_code[i, k] = code
            ev_drop[i, k] = drop
        if state.su >= 1:
            busy[i] = 1.0
            if kind == FSU:
                reward[i] = config.channels_per_band * (config.bands - state.pu) / state.su
            else:
                reward[i] = config.min_channels
    ev_cum = np.cumsum(ev_rate, axis=1)
    total_rate = ev_cum[np.arange(n), np.maximum(ev_count - 1, 0)].copy()
    total_rate[ev_count == 0] = 0.0
    return _ChainTables(
        states=space.states,
        start=space.index[State(0, 0)],
        ev_count=ev_count,
        ev_cum=ev_cum,
        ev_target=ev_target,
        ev_code=ev_code,
        ev_drop=ev_drop,
        total_rate=total_rate,
        reward=reward,
        busy=busy,
    )


def _run_chain_rep(tables: _ChainTables, horizon: float, rep_seed: int) -> _RepResult:
    time_in_state = np.zeros(len(tables.states))
    arrivals, admitted, blocked, ft_events, dropped = _chain_loop(
        rep_seed,
        horizon,
        tables.start,
        tables.ev_count,
        tables.ev_cum,
        tables.ev_target,
        tables.ev_code,
        tables.ev_drop,
        tables.total_rate,
        time_in_state,
    )
    reward_time = float(time_in_state @ tables.reward)
    busy_time = float(time_in_state @ tables.busy)
    occupancy = {
        s: float(time_in_state[i]) for i, s in enumerate(tables.states) if time_in_state[i] > 0
    }
    return _RepResult(
        arrivals=arrivals,
        admitted=admitted,
        blocked=blocked,
        ft_events=ft_events,
        dropped=dropped,
        p_block=blocked / arrivals if arrivals else math.nan,
        p_ft=dropped / admitted if admitted else 0.0,
        c_avg=reward_time / horizon,
        c_avg_conditional=reward_time / busy_time if busy_time > 0 else 0.0,
        occupancy=occupancy,
    )


def _idle_channels(band_pu: list[bool], owner: dict[tuple[int, int], int], config: SystemConfig):
    """Free channels on primary-free bands, lowest band and channel first."""
    idle = []
    for b in range(config.bands):
        if band_pu[b]:
            continue
        for c in range(config.channels_per_band):
            if (b, c) not in owner:
                idle.append((b, c))
    return idle


def _run_entity_rep(config: SystemConfig, horizon: float, rep_seed: int) -> _RepResult:
    """One non-cooperative replication with explicit channel bookkeeping.

    Policy constants: a newcomer is admitted iff ``min_channels`` idle
    channels exist and grabs the lowest-numbered ones; a primary picks its
    band uniformly among primary-free bands; sessions displaced from that
    band release everything and re-acquire (instantaneous handoff), with the
    survivors -- as many as the idle channels can host -- drawn uniformly;
    the departing session on a service completion is uniform too.
    """
    rng = random.Random(rep_seed)
    m, n, c_min = config.bands, config.channels_per_band, config.min_channels
    band_pu = [False] * m
    owner: dict[tuple[int, int], int] = {}
    sessions: dict[int, list[tuple[int, int]]] = {}
    next_sid = 0
    n_pu = 0
    t = 0.0
    arrivals = admitted = blocked = ft_events = dropped = 0
    reward_time = 0.0
    busy_time = 0.0
    occupancy: dict[State, float] = {}

    def grab() -> list[tuple[int, int]]:
        return _idle_channels(band_pu, owner, config)[:c_min]

    while True:
        n_su = len(sessions)
        assert n_pu * n + n_su * c_min <= config.total_channels
        rates = [
            config.su_arrival_rate,
            config.pu_arrival_rate if n_pu < m else 0.0,
            n_pu * config.pu_service_rate,
            n_su * config.su_service_rate,
        ]
        total = sum(rates)
        if total <= 0:
            dt = horizon - t
        else:
            dt = rng.expovariate(total)
            if t + dt >= horizon:
                dt = horizon - t
                total = 0.0
        here = State(n_pu, n_su)
        occupancy[here] = occupancy.get(here, 0.0) + dt
        if n_su >= 1:
            reward_time += c_min * dt
            busy_time += dt
        if total <= 0:
            break
        t += dt
        u = rng.random() * total
        choice = 3
        acc = 0.0
        for j in range(4):
            acc += rates[j]
            if u < acc:
                choice = j
                break
        while rates[choice] == 0.0:  # round-off at the top edge of the last band
            choice -= 1
        if choice == 0:
            arrivals += 1
            chans = grab()
            if len(chans) == c_min:
                admitted += 1
                sessions[next_sid] = chans
                for ch in chans:
                    owner[ch] = next_sid
                next_sid += 1
            else:
                blocked += 1
        elif choice == 1:
            band = rng.choice([b for b in range(m) if not band_pu[b]])
            displaced = sorted({owner[(band, c)] for c in range(n) if (band, c) in owner})
            for sid in displaced:
                for ch in sessions.pop(sid):
                    del owner[ch]
            band_pu[band] = True
            n_pu += 1
            rng.shuffle(displaced)
            capacity = len(_idle_channels(band_pu, owner, config)) // c_min
            for sid in displaced[:capacity]:
                chans = grab()
                sessions[sid] = chans
                for ch in chans:
                    owner[ch] = sid
            lost = len(displaced) - min(len(displaced), capacity)
            if lost > 0:
                ft_events += 1
                dropped += lost
        elif choice == 2:
            band = rng.choice([b for b in range(m) if band_pu[b]])
            band_pu[band] = False
            n_pu -= 1
        else:
            sid = rng.choice(sorted(sessions))
            for ch in sessions.pop(sid):
                del owner[ch]

    return _RepResult(
        arrivals=arrivals,
        admitted=admitted,
        blocked=blocked,
        ft_events=ft_events,
        dropped=dropped,
        p_block=blocked / arrivals if arrivals else math.nan,
        p_ft=dropped / admitted if admitted else 0.0,
        c_avg=reward_time / horizon,
        c_avg_conditional=reward_time / busy_time if busy_time > 0 else 0.0,
        occupancy=occupancy,
    )


def _mean_ci(values: list[float]) -> tuple[float, float]:
    """Sample mean and 95% half-width over replications, ignoring undefined reps."""
    vals = np.array([v for v in values if not math.isnan(v)])
    if vals.size == 0:
        return math.nan, math.nan
    mean = float(vals.mean())
    if vals.size == 1:
        return mean, math.inf
    sem = float(vals.std(ddof=1)) / math.sqrt(vals.size)
    return mean, float(student_t.ppf(0.975, vals.size - 1)) * sem


def simulate(
    config: SystemConfig,
    policy: SimPolicy = SimPolicy(),
    horizon: float = 1e6,
    replications: int = 10,
    seed: int = 1,
) -> SimKpiReport:
    """Run independent replications of one policy and aggregate the estimates.

    Each replication starts empty, runs for ``horizon`` simulated time units
    on its own deterministic substream, and contributes one mean per KPI.
    Identical arguments produce identical reports.
    """
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    if replications < 1:
        raise ValueError("replications must be at least 1")
    cfg = _effective_config(config, policy)
    master = random.Random(seed)
    rep_seeds = [master.getrandbits(31) for _ in range(replications)]
    if policy.kind == NON_COOPERATIVE:
        reps = [_run_entity_rep(cfg, horizon, s) for s in rep_seeds]
    else:
        tables = _chain_tables(cfg, policy.kind)
        reps = [_run_chain_rep(tables, horizon, s) for s in rep_seeds]

    arrivals = sum(r.arrivals for r in reps)
    admitted = sum(r.admitted for r in reps)
    blocked = sum(r.blocked for r in reps)
    if admitted + blocked != arrivals:
        raise AssertionError("arrival bookkeeping out of balance")
    warnings: list[str] = []
    if arrivals == 0:
        warnings.append("no arrivals: blocking estimate undefined")
    p_block, p_block_hw = _mean_ci([r.p_block for r in reps])
    p_ft, p_ft_hw = _mean_ci([r.p_ft for r in reps])
    c_avg, c_avg_hw = _mean_ci([r.c_avg for r in reps])
    c_cond, c_cond_hw = _mean_ci([r.c_avg_conditional for r in reps])
    sim_time = horizon * replications
    occupancy: dict[State, float] = {}
    for r in reps:
        for state, span in r.occupancy.items():
            occupancy[state] = occupancy.get(state, 0.0) + span
    occupancy = {s: span / sim_time for s, span in sorted(occupancy.items())}
    return SimKpiReport(
        policy=policy,
        config=cfg,
        horizon=horizon,
        replications=replications,
        seed=seed,
        sim_time=sim_time,
        su_arrivals=arrivals,
        su_admitted=admitted,
        su_blocked=blocked,
        ft_events=sum(r.ft_events for r in reps),
        su_force_terminated=sum(r.dropped for r in reps),
        p_block=p_block,
        p_block_half_width=p_block_hw,
        p_ft=p_ft,
        p_ft_half_width=p_ft_hw,
        c_avg=c_avg,
        c_avg_half_width=c_avg_hw,
        c_avg_conditional=c_cond,
        c_avg_conditional_half_width=c_cond_hw,
        occupancy=occupancy,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class KpiComparison:
    kpi: str
    analytical: float
    simulated: float
    ci_half_width: float
    abs_gap: float
    rel_gap: float
    covered: bool


@dataclass(frozen=True)
class ValidationReport:
    comparisons: tuple[KpiComparison, ...]
    passed: bool


def compare_reports(analytical: KpiReport, simulated: SimKpiReport) -> ValidationReport:
    """Line up the closed-form and simulated estimates KPI by KPI.

    A KPI is covered when its 95% interval contains the closed-form value;
    the report passes only if all three are.
    """
    rows = []
    pairs = (
        ("p_block", analytical.p_block, simulated.p_block, simulated.p_block_half_width),
        ("p_ft", analytical.p_ft, simulated.p_ft, simulated.p_ft_half_width),
        ("c_avg", analytical.c_avg, simulated.c_avg, simulated.c_avg_half_width),
    )
    for name, exact, est, hw in pairs:
        gap = abs(est - exact)
        if exact != 0:
            rel = gap / abs(exact)
        else:
            rel = 0.0 if gap == 0 else math.inf
        rows.append(
            KpiComparison(
                kpi=name,
                analytical=exact,
                simulated=est,
                ci_half_width=hw,
                abs_gap=gap,
                rel_gap=rel,
                covered=bool(gap <= hw),
            )
        )
    return ValidationReport(comparisons=tuple(rows), passed=all(r.covered for r in rows))


def validate(
    config: SystemConfig,
    horizon: float = 1e6,
    replications: int = 10,
    seed: int = 1,
) -> ValidationReport:
    """Cross-check the stationary solve against a fresh simulation run."""
    analytical = compute_kpis(config)
    simulated = simulate(config, SimPolicy(FSU), horizon, replications, seed)
    return compare_reports(analytical, simulated)
