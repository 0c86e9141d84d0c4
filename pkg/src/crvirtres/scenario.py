"""Scenario files: a flat ``key = value`` format for experiment settings.

A scenario carries one base system description in per-channel form (band
count ``m``, channels per band ``n``, session minimum ``c_min``, reservation
``r``, primary arrival rate ``lambda_p``, per-channel service rates ``mu1``
and ``mu2``, secondary offered load ``rho_s``), the sweep grids the CLI
commands walk, the cost weight ``alpha``, and the simulation settings.
Omitted keys keep their defaults, so an empty file is a valid scenario.

Grammar: one ``key = value`` assignment per line; blank lines and ``#``
comments (full-line or trailing) are ignored; grid values are comma
separated.  Parsing reports the offending line number; invariant violations
name the key.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .model import SystemConfig, build_config

__all__ = [
    "Scenario",
    "ScenarioError",
    "parse_scenario",
    "serialize_scenario",
    "with_overrides",
]


class ScenarioError(ValueError):
    """Malformed scenario text or a value outside its allowed range."""


@dataclass(frozen=True)
class Scenario:
    """One experiment description: base system, sweep grids, run settings."""

    m: int = 4
    n: int = 5
    c_min: int = 2
    r: int = 0
    lambda_p: float = 1.3
    mu1: float = 1.0
    mu2: float = 0.75
    rho_s: float = 0.6
    lambda_p_grid: tuple[float, ...] = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
    rho_s_grid: tuple[float, ...] = (0.4, 0.6, 0.8)
    r_grid: tuple[int, ...] = (0, 2, 4)
    mu1_grid: tuple[float, ...] = (0.5, 1.0, 2.0, 4.0)
    c_min_grid: tuple[int, ...] = (1, 2, 4)
    alpha: float = 1.0
    horizon: float = 1e6
    replications: int = 10
    seed: int = 1

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ScenarioError("m must be at least 1")
        if self.n < 1:
            raise ScenarioError("n must be at least 1")
        total = self.m * self.n
        if not 1 <= self.c_min <= total:
            raise ScenarioError(f"c_min must lie in [1, {total}]")
        if self.r < 0:
            raise ScenarioError("r must be nonnegative")
        if self.r > total - self.c_min:
            raise ScenarioError("r leaves no room for c_min")
        for key in ("lambda_p", "mu1", "mu2", "rho_s"):
            if getattr(self, key) <= 0:
                raise ScenarioError(f"{key} must be positive")
        if self.alpha < 0:
            raise ScenarioError("alpha must be nonnegative")
        if self.horizon <= 0:
            raise ScenarioError("horizon must be positive")
        if self.replications < 1:
            raise ScenarioError("replications must be at least 1")
        for key in ("lambda_p_grid", "rho_s_grid", "mu1_grid"):
            if any(v <= 0 for v in getattr(self, key)):
                raise ScenarioError(f"{key} values must be positive")
        if any(v < 0 for v in self.r_grid):
            raise ScenarioError("r_grid values must be nonnegative")
        if any(not 1 <= v <= total for v in self.c_min_grid):
            raise ScenarioError(f"c_min_grid values must lie in [1, {total}]")

    def config_at(
        self,
        *,
        lambda_p: float | None = None,
        rho_s: float | None = None,
        mu1: float | None = None,
        c_min: int | None = None,
        r: int | None = None,
    ) -> SystemConfig:
        """System config at one sweep point; ``None`` keeps the base value.

        Rate conventions follow the per-channel form throughout: the primary
        band rate is ``n * mu1``, the session minimum-allocation rate is
        ``c_min * mu2``, and the secondary arrival rate is ``rho_s * mu2``.
        Changing ``c_min`` therefore rescales the session rate but not the
        offered load.
        """
        return build_config(
            bands=self.m,
            channels_per_band=self.n,
            min_channels=self.c_min if c_min is None else c_min,
            reserved=self.r if r is None else r,
            pu_arrival_rate=self.lambda_p if lambda_p is None else lambda_p,
            pu_rate_per_channel=self.mu1 if mu1 is None else mu1,
            su_rate_per_channel=self.mu2,
            su_load=self.rho_s if rho_s is None else rho_s,
        )


_INT_KEYS = {"m", "n", "c_min", "r", "replications", "seed"}
_FLOAT_KEYS = {"lambda_p", "mu1", "mu2", "rho_s", "alpha", "horizon"}
_INT_GRID_KEYS = {"r_grid", "c_min_grid"}
_FLOAT_GRID_KEYS = {"lambda_p_grid", "rho_s_grid", "mu1_grid"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _INT_GRID_KEYS | _FLOAT_GRID_KEYS


def _parse_number(token: str, to_int: bool, lineno: int, key: str):
    try:
        return int(token) if to_int else float(token)
    except ValueError:
        kind = "an integer" if to_int else "a number"
        raise ScenarioError(f"line {lineno}: {key} expects {kind}, got {token!r}") from None


def parse_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario file; unset keys fall back to defaults."""
    text = Path(path).read_text()
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _ALL_KEYS:
            raise ScenarioError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r}")
        if key in _INT_GRID_KEYS or key in _FLOAT_GRID_KEYS:
            to_int = key in _INT_GRID_KEYS
            tokens = [tok.strip() for tok in value.split(",")] if value else []
            if any(not tok for tok in tokens):
                raise ScenarioError(f"line {lineno}: empty entry in {key}")
            values[key] = tuple(_parse_number(tok, to_int, lineno, key) for tok in tokens)
        else:
            if not value:
                raise ScenarioError(f"line {lineno}: {key} has no value")
            values[key] = _parse_number(value, key in _INT_KEYS, lineno, key)
    return Scenario(**values)


def serialize_scenario(scenario: Scenario) -> str:
    """Render every field as scenario text; parsing it back is the identity."""
    lines = []
    for field in fields(Scenario):
        value = getattr(scenario, field.name)
        if isinstance(value, tuple):
            lines.append(f"{field.name} = {', '.join(repr(v) for v in value)}".rstrip())
        else:
            lines.append(f"{field.name} = {value!r}")
    return "\n".join(lines) + "\n"


def with_overrides(
    scenario: Scenario,
    *,
    alpha: float | None = None,
    seed: int | None = None,
    horizon: float | None = None,
    replications: int | None = None,
) -> Scenario:
    """Apply command-line overrides on top of a parsed scenario."""
    updates: dict[str, object] = {}
    if alpha is not None:
        updates["alpha"] = alpha
    if seed is not None:
        updates["seed"] = seed
    if horizon is not None:
        updates["horizon"] = horizon
    if replications is not None:
        updates["replications"] = replications
    return replace(scenario, **updates) if updates else scenario
