"""Cart-pole fluent model, states, plans, and deterministic simulation.

The agent's beliefs about the environment are seven named numeric
fluents.  Everything here is an immutable value; the stepping functions
are pure and delegate to the active kernel backend.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ._backend import kernels

DT = 0.02  # integrator timestep, seconds


class FluentName(enum.Enum):
    """The closed, ordered set of model parameters."""

    MASS_CART = "mass_cart"
    MASS_POLE = "mass_pole"
    LENGTH_POLE = "length_pole"  # half-pole length, benchmark convention
    FORCE_MAG = "force_mag"
    GRAVITY = "gravity"
    ANGLE_LIMIT = "angle_limit"
    X_LIMIT = "x_limit"


FLUENT_ORDER: tuple[FluentName, ...] = tuple(FluentName)

# the two fluents that bound episodes but never enter the dynamics
LIMIT_FLUENTS = frozenset((FluentName.ANGLE_LIMIT, FluentName.X_LIMIT))


@dataclass(frozen=True)
class DomainModel:
    """Seven strictly positive, finite fluent values."""

    mass_cart: float = 1.0
    mass_pole: float = 0.1
    length_pole: float = 0.5
    force_mag: float = 10.0
    gravity: float = 9.8
    angle_limit: float = 0.2095
    x_limit: float = 2.4

    def __post_init__(self):
        for name, value in zip(FLUENT_ORDER, self.as_tuple()):
            if not math.isfinite(value):
                raise ValueError(f"fluent {name.value} must be finite, got {value!r}")
            if value <= 0.0:
                raise ValueError(f"fluent {name.value} must be > 0, got {value!r}")

    def __getitem__(self, fluent: FluentName) -> float:
        return getattr(self, fluent.value)

    def as_tuple(self) -> tuple[float, ...]:
        """Fluent values in the fixed fluent order."""
        return (self.mass_cart, self.mass_pole, self.length_pole,
                self.force_mag, self.gravity, self.angle_limit, self.x_limit)

    def as_dict(self) -> dict[str, float]:
        return {f.value: getattr(self, f.value) for f in FLUENT_ORDER}

    @classmethod
    def from_dict(cls, values: dict) -> "DomainModel":
        extra = set(values) - {f.value for f in FLUENT_ORDER}
        if extra:
            raise ValueError(f"unknown fluent name(s): {sorted(extra)}")
        missing = {f.value for f in FLUENT_ORDER} - set(values)
        if missing:
            raise ValueError(f"missing fluent name(s): {sorted(missing)}")
        return cls(**{k: float(v) for k, v in values.items()})


def nominal_model() -> DomainModel:
    """The standard benchmark parameter values."""
    return DomainModel()


@dataclass(frozen=True)
class State:
    """Cart position/velocity and pole angle/angular velocity."""

    x: float
    x_dot: float
    theta: float
    theta_dot: float

    def __post_init__(self):
        for value in (self.x, self.x_dot, self.theta, self.theta_dot):
            if not math.isfinite(value):
                raise ValueError(f"state components must be finite, got {self}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.x_dot, self.theta, self.theta_dot)


class Action(enum.Enum):
    LEFT = 0
    RIGHT = 1

    def force(self, force_mag: float) -> float:
        return force_mag if self is Action.RIGHT else -force_mag


@dataclass(frozen=True)
class Plan:
    """An ordered push sequence and the timestep it was planned for."""

    actions: tuple[Action, ...]
    dt: float = DT

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"plan dt must be > 0, got {self.dt!r}")

    def __len__(self) -> int:
        return len(self.actions)

    def action_bytes(self) -> bytes:
        """Kernel encoding: one byte per action, 0 = left, 1 = right."""
        return bytes(a.value for a in self.actions)


@dataclass(frozen=True)
class PlanningProblem:
    initial_state: State
    horizon: int = 200

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")


@dataclass(frozen=True)
class Transition:
    state: State
    action: Action
    next_state: State


@dataclass(frozen=True)
class Trajectory:
    """Observed transitions of one episode, chained start to end."""

    initial_state: State
    transitions: tuple[Transition, ...] = ()

    def __post_init__(self):
        if self.transitions:
            if self.transitions[0].state != self.initial_state:
                raise ValueError("trajectory must start at its initial state")
            for prev, cur in zip(self.transitions, self.transitions[1:]):
                if prev.next_state != cur.state:
                    raise ValueError("trajectory transitions must chain")

    def __len__(self) -> int:
        return len(self.transitions)

    def states(self) -> list[State]:
        """The visited states: initial state followed by each successor."""
        return [self.initial_state] + [t.next_state for t in self.transitions]

    def actions(self) -> tuple[Action, ...]:
        return tuple(t.action for t in self.transitions)


def dynamics_derivatives(model: DomainModel, state: State,
                         force: float) -> tuple[float, float]:
    """Cart and pole accelerations under the model for an applied force."""
    return kernels.derivatives(model.mass_cart, model.mass_pole,
                               model.length_pole, model.gravity,
                               state.theta, state.theta_dot, force)


def step_model(model: DomainModel, state: State, action: Action,
               dt: float = DT) -> State:
    """Advance one explicit-Euler step under the model."""
    if dt <= 0.0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    return State(*kernels.euler_step(
        model.mass_cart, model.mass_pole, model.length_pole, model.gravity,
        state.x, state.x_dot, state.theta, state.theta_dot,
        action.force(model.force_mag), dt))


def is_terminal(model: DomainModel, state: State) -> bool:
    """True when the state strictly exceeds the model's angle or cart limit."""
    return abs(state.theta) > model.angle_limit or abs(state.x) > model.x_limit


def simulate_plan(model: DomainModel, s0: State, plan: Plan) -> list[State]:
    """States visited by executing the plan under the model.

    The result starts with ``s0`` and has one entry per executed action;
    simulation stops early at the first terminal state, which then ends
    the sequence.
    """
    raw = kernels.simulate(model.as_tuple(), s0.x, s0.x_dot, s0.theta,
                           s0.theta_dot, plan.action_bytes(), plan.dt)
    return [State(*s) for s in raw]
