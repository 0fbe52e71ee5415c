"""Discounted deviation between predicted and observed state sequences.

The score compares the trajectory the internal model predicts for the
executed actions against what the environment actually produced; a
score above the configured threshold means the model no longer explains
the world.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Sequence

from ._backend import kernels
from .domain import DomainModel, Plan, State, simulate_plan


class EmptySequence(ValueError):
    """A compared state sequence was empty."""


@dataclass(frozen=True)
class ConsistencyConfig:
    gamma: float = 0.95
    threshold: float = 0.01
    # per state component: (x, x_dot, theta, theta_dot)
    dimension_weights: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must be in (0, 1), got {self.gamma!r}")
        if self.threshold <= 0.0:
            raise ValueError(f"threshold must be > 0, got {self.threshold!r}")
        if any(w < 0.0 for w in self.dimension_weights):
            raise ValueError(
                f"dimension weights must be >= 0, got {self.dimension_weights}")


def flatten_states(states: Sequence[State]) -> array:
    """Pack states into the flat double array the kernels consume."""
    return array("d", (value for s in states for value in s.as_tuple()))


def inconsistency_score(expected: Sequence[State], observed: Sequence[State],
                        cfg: ConsistencyConfig) -> float:
    """Sum of per-step gamma^i-discounted weighted distances.

    Index 0 is the initial state; when the sequences have different
    lengths only the shared prefix is compared.
    """
    if not expected or not observed:
        raise EmptySequence("cannot score an empty state sequence")
    w0, w1, w2, w3 = cfg.dimension_weights
    return kernels.discounted_deviation(
        flatten_states(expected), flatten_states(observed),
        cfg.gamma, w0, w1, w2, w3)


def detect_novelty(score: float, cfg: ConsistencyConfig) -> bool:
    """True when the score strictly exceeds the threshold."""
    return score > cfg.threshold


def expected_trajectory(model: DomainModel, s0: State,
                        executed_plan: Plan) -> list[State]:
    """States the model predicts for the actions that actually ran."""
    return simulate_plan(model, s0, executed_plan)
