"""Experiment configuration, scenario presets and flat-key overrides.

A configuration is a flat mapping of dotted keys (``policy.epsilon``,
``network.server_capacities``, ``horizon`` ...) on top of a named preset.
Every key carries a source tag: ``paper`` for the reference scenario values,
``artifact-default`` for values this package had to choose, and ``override``
for anything set by the caller.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .arms import DEFAULT_ARM_CAP
from .network import NetworkProfile
from .workload import Mode, TrafficPattern

POLICIES = ("epsilon_greedy", "ucb1", "atoa", "oracle")
PRESETS = ("stable", "unstable", "tidal", "custom")

PAPER = "paper"
ARTIFACT = "artifact-default"
OVERRIDE = "override"


class ConfigError(ValueError):
    """Bad configuration; ``key`` names the offending field."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class PolicySpec:
    name: str = "atoa"
    epsilon: float = 0.01
    xi: float = 0.1
    window: int = 10
    threshold: float | None = None  # None: derived from the traffic means and window
    u_prior: float = 1.0


@dataclass(frozen=True)
class ExperimentConfig:
    profile: NetworkProfile
    pattern: TrafficPattern
    policy: PolicySpec
    horizon: int
    explore_slots: int
    discount: float = 1.0
    seed: int = 0
    average_from: int = 1
    oracle_trace: bool = False
    arm_cap: int = DEFAULT_ARM_CAP
    preset: str = "custom"
    values: tuple = ()  # flat (key, value) pairs this config was built from
    sources: tuple = ()  # flat (key, provenance) pairs

    def echo(self) -> dict:
        """Serializable form that :func:`from_echo` turns back into this config."""
        return {
            "preset": self.preset,
            "set": dict(self.values),
            "sources": dict(self.sources),
        }


# Every accepted key and the kind of value it holds.
KEYS: dict[str, str] = {
    "network.user_capacities": "floats",
    "network.server_capacities": "floats",
    "network.link_capacity": "matrix",
    "network.cycles_per_bit": "float",
    "network.deadline": "float",
    "traffic.mode": "mode",
    "traffic.means": "floats",
    "traffic.stable_sigma_factor": "float",
    "traffic.unstable_sigma_factor": "float",
    "traffic.stable_period": "int",
    "traffic.unstable_period": "int",
    "traffic.sigma_is_variance": "bool",
    "policy.name": "policy",
    "policy.epsilon": "float",
    "policy.xi": "float",
    "policy.window": "int",
    "policy.threshold": "optfloat",
    "policy.u_prior": "float",
    "horizon": "int",
    "explore_slots": "int",
    "discount": "float",
    "seed": "int",
    "average_from": "int",
    "oracle_trace": "bool",
    "arm_cap": "int",
}

# Keys with a usable default even in the custom preset.
DEFAULTS: dict[str, Any] = {
    "network.cycles_per_bit": 1.0,
    "network.deadline": 1.0,
    "traffic.mode": "tidal",
    "traffic.stable_sigma_factor": 0.1,
    "traffic.unstable_sigma_factor": 0.5,
    "traffic.stable_period": 150,
    "traffic.unstable_period": 150,
    "traffic.sigma_is_variance": False,
    "policy.name": "atoa",
    "policy.epsilon": 0.01,
    "policy.xi": 0.1,
    "policy.window": 10,
    "policy.threshold": None,
    "policy.u_prior": 1.0,
    "discount": 1.0,
    "seed": 0,
    "average_from": 1,
    "oracle_trace": False,
    "arm_cap": DEFAULT_ARM_CAP,
}


def _preset_values(name: str) -> tuple[dict, dict]:
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}, expected one of {', '.join(PRESETS)}")
    values = dict(DEFAULTS)
    sources = {key: ARTIFACT for key in values}
    if name == "custom":
        return values, sources
    num_users = 6
    paper = {
        "network.server_capacities": [200.0, 50.0],  # gNB, eNB
        "traffic.mode": name,
        "traffic.means": [10.0 * i for i in range(1, num_users + 1)],
        "traffic.stable_sigma_factor": 0.1,
        "traffic.unstable_sigma_factor": 0.5,
        "traffic.stable_period": 150,
        "traffic.unstable_period": 150,
        "policy.epsilon": 0.01,
        "policy.xi": 0.1,
        "policy.window": 10,
        "policy.threshold": None,
        "horizon": 20000,
        "explore_slots": 10000,
    }
    artifact = {
        # Local cap equals each user's mean task size, so offloading is
        # needed about half the time.
        "network.user_capacities": [10.0 * i for i in range(1, num_users + 1)],
        "network.link_capacity": 100.0,
        "network.cycles_per_bit": 1.0,
        "network.deadline": 1.0,
    }
    values.update(paper)
    values.update(artifact)
    sources.update({key: PAPER for key in paper})
    sources.update({key: ARTIFACT for key in artifact})
    return values, sources


def _coerce(key: str, value: Any) -> Any:
    kind = KEYS[key]
    try:
        if kind == "float":
            return _coerce_float(value)
        if kind == "optfloat":
            return None if value is None else _coerce_float(value)
        if kind == "int":
            if isinstance(value, bool):
                raise TypeError
            if isinstance(value, float):
                if not value.is_integer():
                    raise ValueError
                return int(value)
            return int(value)
        if kind == "bool":
            if isinstance(value, str) and value.lower() in ("true", "false"):
                return value.lower() == "true"
            if not isinstance(value, bool):
                raise TypeError
            return value
        if kind == "floats":
            if not isinstance(value, (list, tuple)) or not value:
                raise TypeError
            return [_coerce_float(v) for v in value]
        if kind == "matrix":
            if isinstance(value, (list, tuple)):
                return [[_coerce_float(v) for v in row] for row in value]
            return _coerce_float(value)
        if kind == "mode":
            return Mode(value).value
        if kind == "policy":
            if value not in POLICIES:
                raise ValueError
            return value
    except (TypeError, ValueError):
        pass
    raise ConfigError(key, f"invalid {kind} value {value!r}")


def _coerce_float(value) -> float:
    if isinstance(value, bool):
        raise TypeError
    out = float(value)
    if math.isnan(out):
        raise ValueError
    return out


def parse_value(text: str) -> Any:
    """Parse one ``--set`` value: JSON where possible, ``inf`` and bare strings otherwise."""
    lowered = text.strip().lower()
    if lowered in ("inf", "+inf", "infinity"):
        return math.inf
    if lowered in ("none", "null"):
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def build(preset: str = "custom", overrides: dict | None = None) -> ExperimentConfig:
    """Expand ``preset``, apply flat-key ``overrides`` and validate the result.

    A key is tagged ``override`` only when its value differs from the preset's.
    """
    values, sources = _preset_values(preset)
    defaults = {key: _coerce(key, value) for key, value in values.items()}
    for key, value in (overrides or {}).items():
        if key not in KEYS:
            raise ConfigError(key, "unknown config key")
        values[key] = value
    for key in list(values):
        values[key] = _coerce(key, values[key])
        if key not in defaults or values[key] != defaults[key]:
            sources[key] = OVERRIDE
    missing = [key for key in KEYS if key not in values]
    if missing:
        raise ConfigError(missing[0], "missing required key")
    return _assemble(preset, values, sources)


def _check(key: str, ok: bool, message: str) -> None:
    if not ok:
        raise ConfigError(key, message)


def _assemble(preset: str, values: dict, sources: dict) -> ExperimentConfig:
    users = values["network.user_capacities"]
    servers = values["network.server_capacities"]
    links = values["network.link_capacity"]
    if not isinstance(links, list):
        links = [[links] * len(servers) for _ in users]
    _check("network.server_capacities", len(users) > len(servers),
           "need more users than servers")
    _check("network.link_capacity",
           len(links) == len(users) and all(len(r) == len(servers) for r in links),
           f"must be a scalar or a {len(users)}x{len(servers)} matrix")
    for key in ("network.user_capacities", "network.server_capacities"):
        _check(key, all(0 < v < math.inf for v in values[key]), "must be positive and finite")
    _check("network.link_capacity", all(0 < v < math.inf for r in links for v in r),
           "must be positive and finite")
    for key in ("network.cycles_per_bit", "network.deadline"):
        _check(key, 0 < values[key] < math.inf, "must be positive and finite")
    _check("traffic.means", len(values["traffic.means"]) == len(users),
           f"needs one mean per user ({len(users)})")
    _check("traffic.means", all(0 < m < math.inf for m in values["traffic.means"]),
           "must be positive")
    for key in ("traffic.stable_sigma_factor", "traffic.unstable_sigma_factor"):
        _check(key, 0 <= values[key] < math.inf, "must be nonnegative")
    for key in ("traffic.stable_period", "traffic.unstable_period", "policy.window"):
        _check(key, values[key] >= 1, "must be at least 1")
    _check("policy.epsilon", 0 <= values["policy.epsilon"] <= 1, "must lie in [0, 1]")
    _check("policy.xi", 0 < values["policy.xi"] < math.inf, "must be positive")
    _check("policy.u_prior", 0 <= values["policy.u_prior"] < math.inf, "must be nonnegative")
    threshold = values["policy.threshold"]
    _check("policy.threshold", threshold is None or threshold >= 0, "must be nonnegative")
    _check("horizon", values["horizon"] >= 2, "must be at least 2")
    _check("explore_slots", 1 <= values["explore_slots"] < values["horizon"],
           "must satisfy 1 <= explore_slots < horizon")
    _check("discount", 0 < values["discount"] <= 1, "must lie in (0, 1]")
    _check("seed", 0 <= values["seed"] < 2**64, "must be a 64-bit unsigned integer")
    _check("average_from", 1 <= values["average_from"] <= values["horizon"],
           "must lie in [1, horizon]")
    _check("arm_cap", values["arm_cap"] >= 1, "must be positive")
    arm_count = (len(servers) + 1) ** len(users)
    _check("arm_cap", arm_count <= values["arm_cap"],
           f"{arm_count} joint arms exceed the cap of {values['arm_cap']}")

    profile = NetworkProfile(tuple(users), tuple(servers), links,
                             values["network.cycles_per_bit"], values["network.deadline"])
    pattern = TrafficPattern(
        tuple(values["traffic.means"]),
        mode=Mode(values["traffic.mode"]),
        stable_sigma_factor=values["traffic.stable_sigma_factor"],
        unstable_sigma_factor=values["traffic.unstable_sigma_factor"],
        stable_period=values["traffic.stable_period"],
        unstable_period=values["traffic.unstable_period"],
        sigma_is_variance=values["traffic.sigma_is_variance"],
    )
    policy = PolicySpec(
        name=values["policy.name"],
        epsilon=values["policy.epsilon"],
        xi=values["policy.xi"],
        window=values["policy.window"],
        threshold=threshold,
        u_prior=values["policy.u_prior"],
    )
    ordered = tuple((key, values[key]) for key in KEYS)
    return ExperimentConfig(
        profile=profile,
        pattern=pattern,
        policy=policy,
        horizon=values["horizon"],
        explore_slots=values["explore_slots"],
        discount=values["discount"],
        seed=values["seed"],
        average_from=values["average_from"],
        oracle_trace=values["oracle_trace"],
        arm_cap=values["arm_cap"],
        preset=preset,
        values=ordered,
        sources=tuple((key, sources.get(key, OVERRIDE)) for key in KEYS),
    )


def with_overrides(config: ExperimentConfig, delta: dict) -> ExperimentConfig:
    """Return ``config`` with flat-key ``delta`` applied on top of its own values."""
    return build(config.preset, {**dict(config.values), **delta})


def from_echo(data: dict) -> ExperimentConfig:
    unknown = set(data) - {"preset", "set", "sources"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown top-level config field")
    values = data.get("set", {})
    if not isinstance(values, dict):
        raise ConfigError("set", "must be an object of key: value pairs")
    return build(data.get("preset", "custom"), values)


def parse_config(path: str | Path | None = None, preset: str | None = None,
                 sets: list[str] | None = None, seed: int | None = None) -> ExperimentConfig:
    """Build a config from an optional JSON file, a preset and ``key=value`` strings.

    The file holds ``{"preset": ..., "set": {...}}`` (the same shape written by
    :meth:`ExperimentConfig.echo`). ``preset`` replaces the file's preset;
    ``sets`` and ``seed`` are applied last.
    """
    data: dict = {}
    if path is not None:
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError:
            raise ConfigError("config", f"file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"{path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", f"{path} must hold a JSON object")
    if preset is not None:
        data = {**data, "preset": preset}
    extra = {}
    for item in sets or []:
        key, sep, text = item.partition("=")
        if not sep or not key:
            raise ConfigError(item, "expected key=value")
        extra[key.strip()] = parse_value(text)
    if seed is not None:
        extra["seed"] = seed
    return with_overrides(from_echo(data), extra)
