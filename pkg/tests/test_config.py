"""Experiment JSON parsing and its error reporting."""

import json
import pathlib

import pytest

from modelmend import AgentKind, ConfigError, FluentName, load_experiment_config
from modelmend.config import parse_experiment_config

MINIMAL = {"env": {}, "planner": {}, "consistency": {}, "repair": {}}
SCENARIOS = pathlib.Path(__file__).resolve().parent.parent / "scenarios"


def write_config(tmp_path, doc, name="exp.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_empty_document_yields_all_defaults():
    cfg = parse_experiment_config({})
    assert cfg.agent is AgentKind.PLANNING_REPAIRING
    assert cfg.episodes == 50
    assert cfg.trials == 5
    assert cfg.base_seed == 0
    assert cfg.env.true_fluents.gravity == 9.8
    assert cfg.env.max_steps == 200
    assert cfg.planner.lookahead_depth == 20
    assert cfg.consistency.gamma == 0.95
    assert cfg.repair.length_penalty == 0.001
    assert len(cfg.mmos.operators) == 14


def test_shipped_baseline_scenario_parses(tmp_path):
    cfg = load_experiment_config(str(SCENARIOS / "baseline.json"))
    assert cfg.agent is AgentKind.PLANNING_REPAIRING
    assert cfg.episodes == 20
    assert cfg.planner.lookahead_depth == 30
    assert cfg.repair.length_penalty == 0.02
    assert cfg.env.novelty_schedule == ()


def test_shipped_novelty_scenarios_parse():
    n1 = load_experiment_config(str(SCENARIOS / "n1.json"))
    assert n1.episodes == 50
    event = n1.env.novelty_schedule[0]
    assert event.episode == 7
    assert event.overrides == {FluentName.LENGTH_POLE: 1.1,
                               FluentName.GRAVITY: 12.0}
    n2 = load_experiment_config(str(SCENARIOS / "n2.json"))
    assert n2.env.novelty_schedule[0].overrides == {
        FluentName.LENGTH_POLE: 1.1, FluentName.MASS_CART: 0.9}


def test_full_document_round_trips(tmp_path):
    doc = {
        "agent": "planning_static",
        "episodes": 3,
        "trials": 2,
        "base_seed": 17,
        "env": {
            "true_fluents": {
                "mass_cart": 1.0, "mass_pole": 0.1, "length_pole": 0.5,
                "force_mag": 10.0, "gravity": 9.8, "angle_limit": 0.2095,
                "x_limit": 2.4},
            "novelty_schedule": [
                {"episode": 1, "overrides": {"gravity": 12.0}}],
            "max_steps": 50,
            "init_range": 0.01,
            "sensor_noise_sigma": 0.0,
            "seed": 4,
        },
        "planner": {"lookahead_depth": 6, "beam_width": 16,
                    "replan_interval": 2,
                    "cost_weights": [1.0, 0.2, 0.1, 0.05],
                    "terminal_penalty": 100.0},
        "consistency": {"gamma": 0.9, "threshold": 0.05,
                        "dimension_weights": [1, 1, 2, 1]},
        "repair": {"length_penalty": 0.01, "max_expansions": 500,
                   "mmo_step": 0.2,
                   "mmo_steps": {"gravity": 1.0}},
    }
    cfg = load_experiment_config(write_config(tmp_path, doc))
    assert cfg.agent is AgentKind.PLANNING_STATIC
    assert cfg.trials == 2
    assert cfg.base_seed == 17
    assert cfg.env.novelty_schedule[0].overrides == {FluentName.GRAVITY: 12.0}
    assert cfg.planner.replan_interval == 2
    assert cfg.consistency.dimension_weights == (1.0, 1.0, 2.0, 1.0)
    assert cfg.repair.max_expansions == 500
    gravity_steps = {op.delta for op in cfg.mmos.operators
                     if op.fluent is FluentName.GRAVITY}
    assert gravity_steps == {1.0, -1.0}
    cart_steps = {op.delta for op in cfg.mmos.operators
                  if op.fluent is FluentName.MASS_CART}
    assert cart_steps == {0.2, -0.2}


def test_missing_file_names_the_path():
    with pytest.raises(ConfigError, match="no/such/config.json"):
        load_experiment_config("no/such/config.json")


def test_malformed_json_names_the_path(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="broken.json"):
        load_experiment_config(str(path))


def test_non_object_document_rejected(tmp_path):
    with pytest.raises(ConfigError, match="object"):
        parse_experiment_config([1, 2, 3])


def test_unknown_top_level_field(tmp_path):
    with pytest.raises(ConfigError, match="reward_shaping"):
        parse_experiment_config({**MINIMAL, "reward_shaping": True})


def test_unknown_nested_field():
    with pytest.raises(ConfigError, match="planner.*depth_limit"):
        parse_experiment_config({"planner": {"depth_limit": 5}})


def test_wrong_types_name_the_field():
    with pytest.raises(ConfigError, match="env.max_steps"):
        parse_experiment_config({"env": {"max_steps": "many"}})
    with pytest.raises(ConfigError, match="consistency.gamma"):
        parse_experiment_config({"consistency": {"gamma": True}})
    with pytest.raises(ConfigError, match="episodes"):
        parse_experiment_config({"episodes": 1.5})


def test_invalid_values_are_config_errors():
    with pytest.raises(ConfigError, match="gamma"):
        parse_experiment_config({"consistency": {"gamma": 2.0}})
    with pytest.raises(ConfigError, match="lookahead_depth"):
        parse_experiment_config({"planner": {"lookahead_depth": 0}})
    with pytest.raises(ConfigError, match="episodes"):
        parse_experiment_config({"episodes": 0})


def test_unknown_fluent_lists_the_valid_names():
    doc = {"env": {"novelty_schedule": [
        {"episode": 0, "overrides": {"wind": 3.0}}]}}
    with pytest.raises(ConfigError, match="mass_cart.*x_limit"):
        parse_experiment_config(doc)


def test_partial_true_fluents_rejected():
    with pytest.raises(ConfigError, match="missing"):
        parse_experiment_config({"env": {"true_fluents": {"gravity": 9.8}}})


def test_bad_agent_lists_the_kinds():
    with pytest.raises(ConfigError,
                       match="planning_static.*planning_repairing"):
        parse_experiment_config({"agent": "dqn"})


def test_weights_must_be_four_numbers():
    with pytest.raises(ConfigError, match="cost_weights"):
        parse_experiment_config({"planner": {"cost_weights": [1, 2, 3]}})
    with pytest.raises(ConfigError, match="dimension_weights"):
        parse_experiment_config(
            {"consistency": {"dimension_weights": [1, 2, 3, "x"]}})


def test_mmo_step_must_be_positive():
    with pytest.raises(ConfigError, match="mmo_step"):
        parse_experiment_config({"repair": {"mmo_step": 0.0}})
    with pytest.raises(ConfigError, match="mmo_steps.gravity"):
        parse_experiment_config({"repair": {"mmo_steps": {"gravity": -1.0}}})


def test_duplicate_novelty_episode_rejected():
    doc = {"env": {"novelty_schedule": [
        {"episode": 2, "overrides": {"gravity": 12.0}},
        {"episode": 2, "overrides": {"x_limit": 1.0}}]}}
    with pytest.raises(ConfigError, match="one novelty event"):
        parse_experiment_config(doc)
