"""Open-world planning with novelty detection and model repair.

The agent keeps a numeric-fluent model of CartPole, plans against it
with beam search, flags episodes whose observations drift from the
model's predictions, and repairs the model by best-first search over
small fluent edits.
"""

from ._backend import active_backend
from .consistency import (ConsistencyConfig, EmptySequence, detect_novelty,
                          expected_trajectory, inconsistency_score)
from .domain import (DT, Action, DomainModel, FLUENT_ORDER, FluentName, Plan,
                     PlanningProblem, State, Trajectory, Transition,
                     nominal_model, simulate_plan, step_model)
from .environment import (EnvConfig, Environment, EpisodeFinished,
                          NoveltyEvent, episode_reward)
from .harness import (AgentKind, EpisodeRecord, ExperimentConfig, run_episode,
                      run_experiment, write_records)
from .planner import (AllBranchesTerminal, PlannerConfig, plan_next,
                      run_plan_execute, state_cost)
from .repair import (DomainRepair, InvalidRepair, MMO, MMOSet, RepairConfig,
                     RepairExhausted, apply_repair, f_priority, repair_search,
                     undo_repair)
from .config import ConfigError, load_experiment_config

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AgentKind",
    "AllBranchesTerminal",
    "ConfigError",
    "ConsistencyConfig",
    "DT",
    "DomainModel",
    "DomainRepair",
    "EmptySequence",
    "EnvConfig",
    "Environment",
    "EpisodeFinished",
    "EpisodeRecord",
    "ExperimentConfig",
    "FLUENT_ORDER",
    "FluentName",
    "InvalidRepair",
    "MMO",
    "MMOSet",
    "NoveltyEvent",
    "Plan",
    "PlannerConfig",
    "PlanningProblem",
    "RepairConfig",
    "RepairExhausted",
    "State",
    "Trajectory",
    "Transition",
    "active_backend",
    "apply_repair",
    "detect_novelty",
    "episode_reward",
    "expected_trajectory",
    "f_priority",
    "inconsistency_score",
    "load_experiment_config",
    "nominal_model",
    "plan_next",
    "repair_search",
    "run_episode",
    "run_experiment",
    "run_plan_execute",
    "simulate_plan",
    "state_cost",
    "step_model",
    "undo_repair",
    "write_records",
    "__version__",
]
