"""Receding-horizon beam planner over the agent's internal model.

Plans short lookaheads with a quadratic balance cost and executes their
prefix, replanning from each observed state.  The planner consults only
the internal model, so wrong fluent values show up as lost reward.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from ._backend import kernels
from .domain import DT, Action, DomainModel, Plan, PlanningProblem, State, Trajectory, Transition, is_terminal

if TYPE_CHECKING:
    from .environment import Environment


class AllBranchesTerminal(RuntimeError):
    """Every one-step expansion fails the limits; the episode is lost."""


@dataclass(frozen=True)
class PlannerConfig:
    lookahead_depth: int = 20
    beam_width: int = 100
    replan_interval: int = 1
    # (w_theta, w_theta_dot, w_x, w_x_dot)
    cost_weights: tuple[float, float, float, float] = (1.0, 0.25, 0.1, 0.05)
    terminal_penalty: float = 1e6

    def __post_init__(self):
        if self.lookahead_depth < 1:
            raise ValueError(f"lookahead_depth must be >= 1, got {self.lookahead_depth}")
        if self.beam_width < 1:
            raise ValueError(f"beam_width must be >= 1, got {self.beam_width}")
        if not 1 <= self.replan_interval <= self.lookahead_depth:
            raise ValueError(
                "replan_interval must be in [1, lookahead_depth], got "
                f"{self.replan_interval}")
        if any(w < 0.0 for w in self.cost_weights):
            raise ValueError(f"cost weights must be >= 0, got {self.cost_weights}")


def state_cost(model: DomainModel, state: State, cfg: PlannerConfig) -> float:
    """Quadratic distance from upright-and-centered, huge if out of limits."""
    w_theta, w_theta_dot, w_x, w_x_dot = cfg.cost_weights
    cost = (w_theta * state.theta * state.theta +
            w_theta_dot * state.theta_dot * state.theta_dot +
            w_x * state.x * state.x +
            w_x_dot * state.x_dot * state.x_dot)
    if is_terminal(model, state):
        cost += cfg.terminal_penalty
    return cost


def plan_next(model: DomainModel, state: State, cfg: PlannerConfig,
              dt: float = DT) -> Plan:
    """Beam-search a lookahead and return its first replan_interval actions.

    Ties between equal-cost sequences resolve to the lexicographically
    smallest with left < right, so results are deterministic.
    """
    w_theta, w_theta_dot, w_x, w_x_dot = cfg.cost_weights
    result = kernels.beam_plan(
        model.as_tuple(), state.x, state.x_dot, state.theta, state.theta_dot,
        dt, cfg.lookahead_depth, cfg.beam_width,
        w_theta, w_theta_dot, w_x, w_x_dot, cfg.terminal_penalty)
    if result is None:
        raise AllBranchesTerminal(
            "every one-step expansion exceeds the model's limits")
    actions, _ = result
    chosen = actions[:cfg.replan_interval]
    return Plan(tuple(Action(a) for a in chosen), dt)


def run_plan_execute(model: DomainModel, env: "Environment",
                     problem: PlanningProblem, cfg: PlannerConfig,
                     dt: float = DT) -> tuple[Trajectory, Plan]:
    """Plan/execute loop for one freshly reset episode.

    Replans from each observed state, executes the plan prefix in the
    environment, and records the observed transitions.  Ends on
    termination, truncation, the horizon, or a lost position (every
    branch terminal).  The executed plan always has exactly one action
    per recorded transition.
    """
    transitions: list[Transition] = []
    executed: list[Action] = []
    state = problem.initial_state
    done = False
    while not done and len(executed) < problem.horizon:
        try:
            plan = plan_next(model, state, cfg, dt)
        except AllBranchesTerminal:
            break
        for action in plan.actions:
            obs, terminated, truncated = env.step(action)
            transitions.append(Transition(state, action, obs))
            executed.append(action)
            state = obs
            if terminated or truncated or len(executed) >= problem.horizon:
                done = True
                break
    trajectory = Trajectory(problem.initial_state, tuple(transitions))
    return trajectory, Plan(tuple(executed), dt)
