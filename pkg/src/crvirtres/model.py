"""Core occupancy model: configuration, state space, and transition structure.

Spectrum is organised as ``bands`` licensed bands of ``channels_per_band``
channels each.  A primary (licensed) arrival seizes a whole band; secondary
sessions need at least ``min_channels`` channels apiece and greedily share
every idle channel in the system, so their service accelerates whenever spare
capacity exists.  ``reserved`` channels are withheld from *new* secondary
admissions while remaining in active use by running sessions -- the
reservation is virtual, never idle capacity.

The system state is the pair (active primaries, active secondaries).  Because
a primary arrival can leave more secondaries in place than the admission bound
would ever let in, the reachable state set is a closure under the transition
rules, not a rectangle.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple

import numpy as np

__all__ = [
    "State",
    "SystemConfig",
    "StateSpace",
    "build_config",
    "admits_su",
    "pu_arrival_outcome",
    "max_pu",
    "max_su",
    "enumerate_states",
    "transition_rates",
    "min_alloc_transition_rates",
    "build_generator",
]


class State(NamedTuple):
    """Occupancy snapshot: (active primary users, active secondary sessions)."""

    pu: int
    su: int


@dataclass(frozen=True)
class SystemConfig:
    """Immutable model parameters.  All rates are per unit time.

    ``pu_service_rate`` is the rate at which one primary releases its whole
    band; ``su_service_rate`` is the secondary session rate when holding
    exactly ``min_channels`` channels (it scales linearly with extra
    allocation).  Arrival rates may be zero (useful for degenerate traffic
    studies); service rates must be positive.
    """

    bands: int
    channels_per_band: int
    min_channels: int
    reserved: int
    pu_arrival_rate: float
    pu_service_rate: float
    su_arrival_rate: float
    su_service_rate: float

    def __post_init__(self) -> None:
        if self.bands < 1:
            raise ValueError("bands must be at least 1")
        if self.channels_per_band < 1:
            raise ValueError("channels_per_band must be at least 1")
        total = self.bands * self.channels_per_band
        if not 1 <= self.min_channels <= total:
            raise ValueError(
                f"min_channels must lie in [1, {total}], got {self.min_channels}"
            )
        if self.reserved < 0:
            raise ValueError("reserved must be nonnegative")
        if self.min_channels > total - self.reserved:
            raise ValueError(
                f"reserved={self.reserved} leaves no room for a "
                f"min_channels={self.min_channels} session among {total} channels"
            )
        for name in ("pu_service_rate", "su_service_rate"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("pu_arrival_rate", "su_arrival_rate"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def total_channels(self) -> int:
        return self.bands * self.channels_per_band

    @property
    def pu_load(self) -> float:
        """Offered primary load: arrival rate over whole-band service rate."""
        return self.pu_arrival_rate / self.pu_service_rate

    @property
    def su_rate_per_channel(self) -> float:
        """Secondary service rate contributed by a single channel."""
        return self.su_service_rate / self.min_channels

    @property
    def su_load(self) -> float:
        """Offered secondary load in per-channel units."""
        return self.su_arrival_rate / self.su_rate_per_channel


def build_config(
    *,
    bands: int,
    channels_per_band: int,
    min_channels: int,
    reserved: int = 0,
    pu_arrival_rate: float,
    pu_service_rate: float | None = None,
    pu_rate_per_channel: float | None = None,
    su_arrival_rate: float | None = None,
    su_load: float | None = None,
    su_service_rate: float | None = None,
    su_rate_per_channel: float | None = None,
) -> SystemConfig:
    """Validate raw parameters and return a :class:`SystemConfig`.

    Rates can be given directly (``pu_service_rate``, ``su_service_rate``,
    ``su_arrival_rate``) or in per-channel form (``pu_rate_per_channel``,
    ``su_rate_per_channel``, ``su_load``), in which case
    ``pu_service_rate = channels_per_band * pu_rate_per_channel`` and
    ``su_service_rate = min_channels * su_rate_per_channel`` and
    ``su_arrival_rate = su_load * su_rate_per_channel``.

    Raises ``ValueError`` naming the offending parameter on any violation;
    unlike the dataclass itself, this entry point insists on strictly
    positive arrival rates.
    """
    if (pu_service_rate is None) == (pu_rate_per_channel is None):
        raise ValueError(
            "exactly one of pu_service_rate or pu_rate_per_channel is required"
        )
    if (su_service_rate is None) == (su_rate_per_channel is None):
        raise ValueError(
            "exactly one of su_service_rate or su_rate_per_channel is required"
        )
    if (su_arrival_rate is None) == (su_load is None):
        raise ValueError("exactly one of su_arrival_rate or su_load is required")

    for name, value in (
        ("pu_service_rate", pu_service_rate),
        ("pu_rate_per_channel", pu_rate_per_channel),
        ("su_service_rate", su_service_rate),
        ("su_rate_per_channel", su_rate_per_channel),
        ("su_load", su_load),
        ("su_arrival_rate", su_arrival_rate),
        ("pu_arrival_rate", pu_arrival_rate),
    ):
        if value is not None and value <= 0:
            raise ValueError(f"{name} must be positive")

    mu_p = pu_service_rate if pu_service_rate is not None else channels_per_band * pu_rate_per_channel
    if su_service_rate is not None:
        mu_s = su_service_rate
        per_channel = su_service_rate / min_channels
    else:
        per_channel = su_rate_per_channel
        mu_s = min_channels * su_rate_per_channel
    lam_s = su_arrival_rate if su_arrival_rate is not None else su_load * per_channel

    return SystemConfig(
        bands=bands,
        channels_per_band=channels_per_band,
        min_channels=min_channels,
        reserved=reserved,
        pu_arrival_rate=pu_arrival_rate,
        pu_service_rate=mu_p,
        su_arrival_rate=lam_s,
        su_service_rate=mu_s,
    )


def admits_su(config: SystemConfig, state: State) -> bool:
    """True when one more secondary session fits behind the reservation bar.

    Admission requires the idle channels, minus the reserved ones, to cover
    the minimum need of every running session plus the newcomer; equality
    admits.
    """
    free = config.total_channels - config.channels_per_band * state.pu - config.reserved
    return free - config.min_channels * (state.su + 1) >= 0


def pu_arrival_outcome(config: SystemConfig, state: State) -> tuple[State, int]:
    """Resolve a primary arrival: the state reached and how many secondaries die.

    If the channels left after the new primary still cover every session's
    minimum, nobody is terminated.  Otherwise the secondary count collapses to
    the largest population the remaining channels can sustain.
    """
    if state.pu >= config.bands:
        raise ValueError(f"no idle band for a primary arrival in state {state}")
    idle = config.total_channels - config.channels_per_band * (state.pu + 1)
    if idle >= config.min_channels * state.su:
        return State(state.pu + 1, state.su), 0
    survivors = idle // config.min_channels
    return State(state.pu + 1, survivors), state.su - survivors


def max_pu(config: SystemConfig, su_count: int) -> int:
    """Largest primary population that can coexist with ``su_count`` sessions."""
    if su_count == 0:
        return config.bands
    return (config.total_channels - su_count * config.min_channels) // config.channels_per_band


def max_su(config: SystemConfig, pu_count: int) -> int:
    """Admission bound on secondary sessions given ``pu_count`` primaries."""
    free = config.total_channels - config.channels_per_band * pu_count - config.reserved
    return max(0, free // config.min_channels)


def _successors(config: SystemConfig, state: State) -> Iterator[State]:
    if state.pu < config.bands:
        target, _ = pu_arrival_outcome(config, state)
        yield target
    if admits_su(config, state):
        yield State(state.pu, state.su + 1)
    if state.pu >= 1:
        yield State(state.pu - 1, state.su)
    if state.su >= 1:
        yield State(state.pu, state.su - 1)


@dataclass(frozen=True)
class StateSpace:
    """Reachable closure from the empty system, in sorted order."""

    states: tuple[State, ...]
    index: dict[State, int]

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[State]:
        return iter(self.states)

    def __contains__(self, state: State) -> bool:
        return state in self.index


def enumerate_states(config: SystemConfig) -> StateSpace:
    """Breadth-first reachability closure from the empty state (0, 0).

    The result includes overflow states (secondary counts above the admission
    bound) that only a primary arrival can create.
    """
    seen = {State(0, 0)}
    frontier = deque(seen)
    while frontier:
        current = frontier.popleft()
        for nxt in _successors(config, current):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    ordered = tuple(sorted(seen))
    return StateSpace(states=ordered, index={s: i for i, s in enumerate(ordered)})


def transition_rates(config: SystemConfig, state: State) -> list[tuple[State, float]]:
    """Nonzero outgoing rates from ``state`` under full spectrum sharing.

    Emitted in a fixed order: primary arrival (possibly with terminations),
    secondary arrival (only when admitted), primary departure, aggregate
    secondary departure.  The aggregate departure rate is the total idle
    spectrum times the per-channel secondary rate: every free channel is
    working for some session.
    """
    out: list[tuple[State, float]] = []
    if state.pu < config.bands and config.pu_arrival_rate > 0:
        target, _ = pu_arrival_outcome(config, state)
        out.append((target, config.pu_arrival_rate))
    if admits_su(config, state) and config.su_arrival_rate > 0:
        out.append((State(state.pu, state.su + 1), config.su_arrival_rate))
    if state.pu >= 1:
        out.append((State(state.pu - 1, state.su), state.pu * config.pu_service_rate))
    if state.su >= 1:
        rate = (
            config.channels_per_band
            * (config.bands - state.pu)
            * config.su_rate_per_channel
        )
        out.append((State(state.pu, state.su - 1), rate))
    return out


def min_alloc_transition_rates(config: SystemConfig, state: State) -> list[tuple[State, float]]:
    """Outgoing rates when every session keeps exactly its minimum allocation.

    Identical admission and termination rules; only the secondary departure
    rate differs (``su_count * su_service_rate``, no spare-channel speed-up).
    """
    out: list[tuple[State, float]] = []
    if state.pu < config.bands and config.pu_arrival_rate > 0:
        target, _ = pu_arrival_outcome(config, state)
        out.append((target, config.pu_arrival_rate))
    if admits_su(config, state) and config.su_arrival_rate > 0:
        out.append((State(state.pu, state.su + 1), config.su_arrival_rate))
    if state.pu >= 1:
        out.append((State(state.pu - 1, state.su), state.pu * config.pu_service_rate))
    if state.su >= 1:
        out.append((State(state.pu, state.su - 1), state.su * config.su_service_rate))
    return out


def build_generator(
    config: SystemConfig,
    space: StateSpace,
    rates: Callable[[SystemConfig, State], list[tuple[State, float]]] = transition_rates,
) -> np.ndarray:
    """Assemble the infinitesimal generator over ``space``.

    Off-diagonal entries are the transition rates; each diagonal entry is the
    negated row sum, so rows sum to zero.  A transition out of the enumerated
    set signals an inconsistency between the closure and the rate rules.
    """
    n = len(space)
    q = np.zeros((n, n))
    for i, state in enumerate(space.states):
        for target, rate in rates(config, state):
            j = space.index.get(target)
            if j is None:
                raise RuntimeError(
                    f"transition {state} -> {target} leaves the enumerated state space"
                )
            q[i, j] += rate
        q[i, i] = -q[i].sum()
    return q
