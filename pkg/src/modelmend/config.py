"""Experiment configuration loading.

One JSON document describes a whole experiment: env, planner,
consistency, and repair sub-objects plus top-level agent, episodes,
trials, and base_seed.  Every schema violation raises ConfigError with
a message naming the offending field.
"""

from __future__ import annotations

import json
from typing import Any

from .consistency import ConsistencyConfig
from .domain import DomainModel, FluentName, nominal_model
from .environment import EnvConfig, NoveltyEvent
from .harness import AgentKind, ExperimentConfig
from .planner import PlannerConfig
from .repair import MMOSet, RepairConfig


class ConfigError(ValueError):
    """A config file is missing, malformed, or has invalid values."""


_MISSING = object()


def _mapping(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a JSON object, "
                          f"got {type(value).__name__}")
    return dict(value)


def _take(obj: dict, key: str, kind: type, where: str, default: Any = _MISSING):
    """Pop one typed field; bool is rejected where a number is expected."""
    if key not in obj:
        if default is _MISSING:
            raise ConfigError(f"missing required field {where}.{key}")
        return default
    value = obj.pop(key)
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"field {where}.{key} must be a number, "
                              f"got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"field {where}.{key} must be an integer, "
                              f"got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"field {where}.{key} must be a string, "
                              f"got {value!r}")
        return value
    if kind is list:
        if not isinstance(value, list):
            raise ConfigError(f"field {where}.{key} must be an array, "
                              f"got {value!r}")
        return value
    if kind is dict:
        return _mapping(value, f"{where}.{key}")
    raise AssertionError(f"unsupported kind {kind}")


def _reject_unknown(obj: dict, where: str) -> None:
    if obj:
        names = ", ".join(sorted(obj))
        raise ConfigError(f"unknown field(s) in {where}: {names}")


def _fluent(name: str, where: str) -> FluentName:
    try:
        return FluentName(name)
    except ValueError:
        valid = ", ".join(f.value for f in FluentName)
        raise ConfigError(f"{where}: unknown fluent {name!r} "
                          f"(expected one of {valid})") from None


def _fluent_map(obj: dict, where: str) -> dict[FluentName, float]:
    out = {}
    for name, value in obj.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"field {where}.{name} must be a number, "
                              f"got {value!r}")
        out[_fluent(name, where)] = float(value)
    return out


def _weights4(values: list, where: str) -> tuple[float, float, float, float]:
    if len(values) != 4 or any(
            isinstance(v, bool) or not isinstance(v, (int, float))
            for v in values):
        raise ConfigError(f"field {where} must be an array of 4 numbers, "
                          f"got {values!r}")
    return tuple(float(v) for v in values)


def _build(factory, where: str, **kwargs):
    """Construct a config dataclass, recasting its errors as ConfigError."""
    try:
        return factory(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid {where} config: {exc}") from exc


def _load_env(obj: dict) -> EnvConfig:
    fluents = nominal_model()
    if "true_fluents" in obj:
        raw = _take(obj, "true_fluents", dict, "env")
        named = {f.value: v for f, v in _fluent_map(raw, "env.true_fluents").items()}
        try:
            fluents = DomainModel.from_dict(named)
        except ValueError as exc:
            raise ConfigError(f"invalid env.true_fluents: {exc}") from exc
    events = []
    for i, item in enumerate(_take(obj, "novelty_schedule", list, "env", [])):
        where = f"env.novelty_schedule[{i}]"
        entry = _mapping(item, where)
        episode = _take(entry, "episode", int, where)
        overrides = _fluent_map(_take(entry, "overrides", dict, where),
                                f"{where}.overrides")
        _reject_unknown(entry, where)
        events.append(_build(NoveltyEvent, where,
                             episode=episode, overrides=overrides))
    kwargs = dict(
        true_fluents=fluents,
        novelty_schedule=tuple(events),
        max_steps=_take(obj, "max_steps", int, "env", 200),
        init_range=_take(obj, "init_range", float, "env", 0.05),
        sensor_noise_sigma=_take(obj, "sensor_noise_sigma", float, "env", 0.0),
        seed=_take(obj, "seed", int, "env", 0),
    )
    _reject_unknown(obj, "env")
    return _build(EnvConfig, "env", **kwargs)


def _load_planner(obj: dict) -> PlannerConfig:
    defaults = PlannerConfig()
    kwargs = dict(
        lookahead_depth=_take(obj, "lookahead_depth", int, "planner",
                              defaults.lookahead_depth),
        beam_width=_take(obj, "beam_width", int, "planner",
                         defaults.beam_width),
        replan_interval=_take(obj, "replan_interval", int, "planner",
                              defaults.replan_interval),
        terminal_penalty=_take(obj, "terminal_penalty", float, "planner",
                               defaults.terminal_penalty),
    )
    if "cost_weights" in obj:
        kwargs["cost_weights"] = _weights4(
            _take(obj, "cost_weights", list, "planner"), "planner.cost_weights")
    _reject_unknown(obj, "planner")
    return _build(PlannerConfig, "planner", **kwargs)


def _load_consistency(obj: dict) -> ConsistencyConfig:
    defaults = ConsistencyConfig()
    kwargs = dict(
        gamma=_take(obj, "gamma", float, "consistency", defaults.gamma),
        threshold=_take(obj, "threshold", float, "consistency",
                        defaults.threshold),
    )
    if "dimension_weights" in obj:
        kwargs["dimension_weights"] = _weights4(
            _take(obj, "dimension_weights", list, "consistency"),
            "consistency.dimension_weights")
    _reject_unknown(obj, "consistency")
    return _build(ConsistencyConfig, "consistency", **kwargs)


def _load_repair(obj: dict, consistency: ConsistencyConfig
                 ) -> tuple[RepairConfig, MMOSet]:
    defaults = RepairConfig()
    step = _take(obj, "mmo_step", float, "repair", 0.1)
    if step <= 0.0:
        raise ConfigError(f"field repair.mmo_step must be > 0, got {step!r}")
    per_fluent = {}
    if "mmo_steps" in obj:
        raw = _take(obj, "mmo_steps", dict, "repair")
        per_fluent = _fluent_map(raw, "repair.mmo_steps")
        for fluent, value in per_fluent.items():
            if value <= 0.0:
                raise ConfigError(f"field repair.mmo_steps.{fluent.value} "
                                  f"must be > 0, got {value!r}")
    kwargs = dict(
        consistency=consistency,
        length_penalty=_take(obj, "length_penalty", float, "repair",
                             defaults.length_penalty),
        max_expansions=_take(obj, "max_expansions", int, "repair",
                             defaults.max_expansions),
    )
    _reject_unknown(obj, "repair")
    cfg = _build(RepairConfig, "repair", **kwargs)
    mmos = MMOSet.default(step, per_fluent or None)
    return cfg, mmos


def parse_experiment_config(doc: Any, where: str = "config") -> ExperimentConfig:
    """Build an ExperimentConfig from a decoded JSON document."""
    top = _mapping(doc, where)
    env = _load_env(_take(top, "env", dict, where, {}))
    planner = _load_planner(_take(top, "planner", dict, where, {}))
    consistency = _load_consistency(_take(top, "consistency", dict, where, {}))
    repair, mmos = _load_repair(_take(top, "repair", dict, where, {}),
                                consistency)
    agent_name = _take(top, "agent", str, where, "planning_repairing")
    try:
        agent = AgentKind(agent_name)
    except ValueError:
        valid = ", ".join(k.value for k in AgentKind)
        raise ConfigError(f"field {where}.agent must be one of {valid}, "
                          f"got {agent_name!r}") from None
    kwargs = dict(
        env=env, planner=planner, consistency=consistency, repair=repair,
        agent=agent, mmos=mmos,
        episodes=_take(top, "episodes", int, where, 50),
        trials=_take(top, "trials", int, where, 5),
        base_seed=_take(top, "base_seed", int, where, 0),
        output_path=_take(top, "output_path", str, where, ""),
    )
    _reject_unknown(top, where)
    return _build(ExperimentConfig, where, **kwargs)


def load_experiment_config(path: str) -> ExperimentConfig:
    """Read and validate one experiment config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_experiment_config(doc, where="config")
