"""Ground-truth cart-pole simulator with a hidden novelty schedule.

The environment owns the true fluent values.  A novelty event rewrites
some of them at the start of a configured episode and stays in effect
for every later episode; the agent is never told.  Dynamics reuse the
same stepping kernel as the agent's model, so fluent values are the only
possible source of divergence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .domain import DT, Action, DomainModel, FluentName, State, Trajectory, is_terminal, step_model


class EpisodeFinished(RuntimeError):
    """Raised when stepping an episode that already terminated or truncated."""


@dataclass(frozen=True)
class NoveltyEvent:
    """Fluent overrides that take effect at the given episode index."""

    episode: int
    overrides: dict[FluentName, float]

    def __post_init__(self):
        if self.episode < 0:
            raise ValueError(f"novelty episode must be >= 0, got {self.episode}")
        for fluent, value in self.overrides.items():
            if value <= 0.0:
                raise ValueError(
                    f"novelty override {fluent.value} must be > 0, got {value!r}")


@dataclass(frozen=True)
class EnvConfig:
    true_fluents: DomainModel = field(default_factory=DomainModel)
    novelty_schedule: tuple[NoveltyEvent, ...] = ()
    max_steps: int = 200
    init_range: float = 0.05
    sensor_noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.init_range < 0.0:
            raise ValueError(f"init_range must be >= 0, got {self.init_range!r}")
        if self.sensor_noise_sigma < 0.0:
            raise ValueError(
                f"sensor_noise_sigma must be >= 0, got {self.sensor_noise_sigma!r}")
        episodes = [e.episode for e in self.novelty_schedule]
        if len(episodes) != len(set(episodes)):
            raise ValueError("at most one novelty event per episode index")


class Environment:
    """One trial's worth of episodes against the true dynamics.

    Not thread-safe; run one instance per trial.  ``reset`` applies the
    novelty schedule and draws a fresh initial state, ``step`` advances
    the hidden true state and returns the (optionally noisy) observation.
    """

    def __init__(self, config: EnvConfig):
        self.config = config
        self.current_fluents = config.true_fluents
        self.step_count = 0
        self._rng = random.Random(config.seed)
        self._true_state: State | None = None
        self._done = True

    def reset(self, episode_idx: int) -> State:
        """Start an episode: apply due novelty events, draw the initial state."""
        if episode_idx < 0:
            raise ValueError(f"episode index must be >= 0, got {episode_idx}")
        values = self.config.true_fluents.as_dict()
        for event in self.config.novelty_schedule:
            if event.episode <= episode_idx:
                for fluent, value in event.overrides.items():
                    values[fluent.value] = value
        self.current_fluents = DomainModel.from_dict(values)
        self.step_count = 0
        r = self.config.init_range
        self._true_state = State(
            self._rng.uniform(-r, r), self._rng.uniform(-r, r),
            self._rng.uniform(-r, r), self._rng.uniform(-r, r))
        self._done = False
        return self._observe(self._true_state)

    def step(self, action: Action) -> tuple[State, bool, bool]:
        """Advance one step; returns (observation, terminated, truncated)."""
        if self._done or self._true_state is None:
            raise EpisodeFinished("step() called on a finished episode; call reset()")
        self._true_state = step_model(self.current_fluents, self._true_state,
                                      action, DT)
        self.step_count += 1
        terminated = is_terminal(self.current_fluents, self._true_state)
        truncated = self.step_count >= self.config.max_steps
        self._done = terminated or truncated
        return self._observe(self._true_state), terminated, truncated

    def _observe(self, true_state: State) -> State:
        sigma = self.config.sensor_noise_sigma
        if sigma == 0.0:
            return true_state
        return State(
            true_state.x + self._rng.gauss(0.0, sigma),
            true_state.x_dot + self._rng.gauss(0.0, sigma),
            true_state.theta + self._rng.gauss(0.0, sigma),
            true_state.theta_dot + self._rng.gauss(0.0, sigma))


def episode_reward(trajectory: Trajectory) -> int:
    """Steps survived: one unit per executed transition."""
    return len(trajectory)
