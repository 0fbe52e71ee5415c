"""Episode and trial orchestration.

Runs the plan, execute, check, repair loop over many episodes, carries
the repaired model forward within a trial, and records per-episode
metrics to CSV.
"""

from __future__ import annotations

import csv
import enum
import json
import time
import warnings
from dataclasses import dataclass, field, replace

from .consistency import (ConsistencyConfig, detect_novelty,
                          expected_trajectory, inconsistency_score)
from .domain import DomainModel, PlanningProblem, nominal_model
from .environment import EnvConfig, Environment, episode_reward
from .planner import PlannerConfig, run_plan_execute
from .repair import (DomainRepair, MMOSet, RepairConfig, RepairExhausted,
                     apply_repair, repair_search)


class AgentKind(enum.Enum):
    PLANNING_STATIC = "planning_static"
    PLANNING_REPAIRING = "planning_repairing"


@dataclass(frozen=True)
class ExperimentConfig:
    env: EnvConfig
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    consistency: ConsistencyConfig = field(default_factory=ConsistencyConfig)
    repair: RepairConfig = field(default_factory=RepairConfig)
    agent: AgentKind = AgentKind.PLANNING_REPAIRING
    mmos: MMOSet = field(default_factory=MMOSet.default)
    episodes: int = 50
    trials: int = 5
    base_seed: int = 0
    output_path: str = ""

    def __post_init__(self):
        if self.episodes < 1:
            raise ValueError(f"episodes must be >= 1, got {self.episodes}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class EpisodeRecord:
    trial: int
    episode: int
    reward: int
    inconsistency: float
    novelty_detected: bool
    repair: DomainRepair | None
    repaired_model: DomainModel
    wall_time_ms: float

    def __post_init__(self):
        if self.reward < 0:
            raise ValueError(f"reward must be >= 0, got {self.reward}")
        if self.inconsistency < 0.0:
            raise ValueError(
                f"inconsistency must be >= 0, got {self.inconsistency!r}")


def run_episode(internal_model: DomainModel, env: Environment,
                episode_idx: int, cfg: ExperimentConfig,
                trial: int = 0) -> tuple[EpisodeRecord, DomainModel]:
    """One full loop pass: plan and execute, check consistency, maybe repair.

    Returns the episode's record and the model the next episode should
    use.  A static agent always hands back the model unchanged.  When
    the repair budget runs out, the best repair found is still applied
    and a warning is issued.
    """
    start = time.perf_counter()
    s0 = env.reset(episode_idx)
    problem = PlanningProblem(initial_state=s0, horizon=env.config.max_steps)
    tau, executed_plan = run_plan_execute(internal_model, env, problem,
                                          cfg.planner)
    expected = expected_trajectory(internal_model, s0, executed_plan)
    score = inconsistency_score(expected, tau.states(), cfg.consistency)
    detected = detect_novelty(score, cfg.consistency)

    applied: DomainRepair | None = None
    updated = internal_model
    if detected and cfg.agent is AgentKind.PLANNING_REPAIRING:
        try:
            applied = repair_search(cfg.mmos, internal_model, executed_plan,
                                    tau, cfg.repair)
        except RepairExhausted as exc:
            # partial improvement beats none
            applied = exc.best_repair
            warnings.warn(
                f"repair budget exhausted at episode {episode_idx}; applying "
                f"best found (score {exc.best_score:.6g})",
                RuntimeWarning, stacklevel=2)
        updated = apply_repair(internal_model, applied)

    elapsed_ms = (time.perf_counter() - start) * 1000.0
    record = EpisodeRecord(
        trial=trial, episode=episode_idx, reward=episode_reward(tau),
        inconsistency=score, novelty_detected=detected, repair=applied,
        repaired_model=updated, wall_time_ms=elapsed_ms)
    return record, updated


def run_experiment(cfg: ExperimentConfig) -> list[EpisodeRecord]:
    """All trials of an experiment, each from a fresh seed and model.

    Trial t seeds its environment with base_seed + t and starts from the
    nominal model; repairs carry forward across that trial's episodes.
    Records arrive in (trial, episode) order and are written to
    cfg.output_path as CSV when a path is set.
    """
    records: list[EpisodeRecord] = []
    for trial in range(cfg.trials):
        env = Environment(replace(cfg.env, seed=cfg.base_seed + trial))
        model = nominal_model()
        for episode in range(cfg.episodes):
            record, model = run_episode(model, env, episode, cfg, trial=trial)
            records.append(record)
    if cfg.output_path:
        write_records(cfg.output_path, records)
    return records


CSV_COLUMNS = ("trial", "episode", "reward", "inconsistency",
               "novelty_detected", "repair_json", "wall_time_ms")


def record_row(record: EpisodeRecord) -> tuple[str, ...]:
    """CSV cells for one record; floats use repr for exact round-trips."""
    repair_json = ""
    if record.repair is not None:
        repair_json = json.dumps(record.repair.as_dict(),
                                 separators=(",", ":"))
    return (str(record.trial), str(record.episode), str(record.reward),
            repr(record.inconsistency),
            "true" if record.novelty_detected else "false",
            repair_json, repr(record.wall_time_ms))


def write_records(path: str, records: list[EpisodeRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow(record_row(record))
