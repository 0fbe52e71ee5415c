"""Best-first search for model repairs that explain an observed trajectory.

A repair is a sequence of atomic edits, each adding a signed step to one
fluent.  The search grows repairs one edit at a time, scoring each
candidate model by how well it re-predicts the episode that exposed the
problem, and stops at the first candidate under the detection threshold.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

from ._backend import kernels
from .consistency import ConsistencyConfig, flatten_states
from .domain import (DomainModel, FLUENT_ORDER, FluentName, LIMIT_FLUENTS,
                     Plan, Trajectory)


class InvalidRepair(ValueError):
    """Applying the repair would push a fluent to zero or below."""


class RepairExhausted(RuntimeError):
    """Expansion budget ran out before any candidate scored under threshold.

    Carries the best repair found and its score so callers can still use
    the partial improvement.
    """

    def __init__(self, best_repair: "DomainRepair", best_score: float):
        super().__init__(
            f"no consistent repair within budget; best score {best_score:.6g}")
        self.best_repair = best_repair
        self.best_score = best_score


@dataclass(frozen=True)
class MMO:
    """One atomic model edit: add a signed amount to one fluent."""

    fluent: FluentName
    delta: float

    def __post_init__(self):
        if self.delta == 0.0:
            raise ValueError("an edit must change its fluent; delta == 0")


@dataclass(frozen=True)
class MMOSet:
    """The edit moves available to the search."""

    operators: tuple[MMO, ...]

    def __post_init__(self):
        if not self.operators:
            raise ValueError("operator set must be non-empty")
        seen = {(op.fluent, op.delta) for op in self.operators}
        if len(seen) != len(self.operators):
            raise ValueError("duplicate (fluent, delta) operators")

    @classmethod
    def default(cls, step: float = 0.1,
                per_fluent: dict[FluentName, float] | None = None) -> "MMOSet":
        """A +step and -step edit for every fluent, with optional overrides."""
        steps = {f: step for f in FLUENT_ORDER}
        if per_fluent:
            steps.update(per_fluent)
        ops = []
        for fluent in FLUENT_ORDER:
            ops.append(MMO(fluent, +steps[fluent]))
            ops.append(MMO(fluent, -steps[fluent]))
        return cls(tuple(ops))


@dataclass(frozen=True)
class DomainRepair:
    """An ordered edit sequence, reduced to one net delta per fluent."""

    mmos: tuple[MMO, ...] = ()

    def canonical(self) -> tuple[float, ...]:
        """Net per-fluent deltas in fluent order.

        Each fluent's deltas are summed in sorted order, so any
        permutation of the same edits produces the identical vector.
        """
        per_fluent: dict[FluentName, list[float]] = {f: [] for f in FLUENT_ORDER}
        for op in self.mmos:
            per_fluent[op.fluent].append(op.delta)
        net = []
        for fluent in FLUENT_ORDER:
            total = 0.0
            for delta in sorted(per_fluent[fluent]):
                total += delta
            net.append(total)
        return tuple(net)

    def as_dict(self) -> dict[str, float]:
        """Canonical form keyed by fluent name, zero entries included."""
        return {f.value: d for f, d in zip(FLUENT_ORDER, self.canonical())}

    def __len__(self) -> int:
        return len(self.mmos)


@dataclass(frozen=True)
class RepairConfig:
    consistency: ConsistencyConfig = field(default_factory=ConsistencyConfig)
    length_penalty: float = 0.001
    max_expansions: int = 10000

    def __post_init__(self):
        if self.length_penalty < 0.0:
            raise ValueError(
                f"length_penalty must be >= 0, got {self.length_penalty!r}")
        if self.max_expansions < 1:
            raise ValueError(
                f"max_expansions must be >= 1, got {self.max_expansions}")


def apply_repair(model: DomainModel, repair: DomainRepair) -> DomainModel:
    """Model with the repair's net deltas added; the input is untouched."""
    values = {}
    for fluent, delta in zip(FLUENT_ORDER, repair.canonical()):
        value = getattr(model, fluent.value) + delta
        if value <= 0.0:
            raise InvalidRepair(
                f"repair drives {fluent.value} to {value!r} (must stay > 0)")
        values[fluent.value] = value
    return DomainModel(**values)


def undo_repair(base: DomainModel, repair: DomainRepair) -> DomainModel:
    """The pristine base model; models are values, so undo is the kept copy."""
    return base


def f_priority(repair: DomainRepair, score: float, cfg: RepairConfig) -> float:
    """Queue key: the candidate's score plus a small length penalty."""
    return score + cfg.length_penalty * len(repair)


def repair_search(mmos: MMOSet, model: DomainModel, executed_plan: Plan,
                  tau: Trajectory, cfg: RepairConfig,
                  trace: list | None = None) -> DomainRepair:
    """Best-first search for a repair that re-predicts the trajectory.

    The frontier is a min-priority queue on ``f_priority`` with FIFO
    tie-breaking.  Each expansion composes every available edit onto the
    popped repair; candidates equal to an already-seen net delta vector,
    or violating fluent positivity, are pruned.  The empty repair is
    scored first so an already-consistent model returns immediately.

    Candidates are scored on dynamics alone: the candidate's limit
    fluents are ignored while re-simulating, so a repair cannot look
    consistent merely by predicting early termination and shrinking the
    compared prefix.  Because the limit-respecting prediction is a prefix
    of the limit-free one and the score is non-decreasing in prefix
    length, any repair accepted here is also consistent under the
    standard score.

    Operators on the two limit fluents are not composed during the
    search: with limit-free scoring they cannot change any candidate's
    score, so exploring them would only multiply the frontier.  Ties in
    score keep the earlier (shorter) best, which keeps such zero-effect
    edits out of the result even when supplied directly.

    Returns the first repair scoring under the detection threshold.
    Raises :class:`RepairExhausted` (carrying the best candidate) when
    the expansion budget or the frontier runs out first.  When ``trace``
    is given, the canonical vector of every expanded repair is appended
    to it.
    """
    if len(tau) == 0:
        raise ValueError("cannot repair against an empty trajectory")
    observed = flatten_states(tau.states())
    actions = bytes(a.value for a in tau.actions())
    ccfg = cfg.consistency
    gamma = ccfg.gamma
    w0, w1, w2, w3 = ccfg.dimension_weights
    s0 = tau.initial_state
    dt = executed_plan.dt
    base = model.as_tuple()
    score_fn = kernels.trajectory_score

    def evaluate(values: tuple) -> float:
        return score_fn(values, s0.x, s0.x_dot, s0.theta, s0.theta_dot,
                        actions, observed, dt, gamma, w0, w1, w2, w3, False)

    # a frontier node is (per-fluent sorted delta tuples, canonical, length);
    # materialized into a DomainRepair only when returned
    def materialize(node) -> DomainRepair:
        deltas, _, _ = node
        return DomainRepair(tuple(
            MMO(fluent, d)
            for fluent, ds in zip(FLUENT_ORDER, deltas) for d in ds))

    empty = (((),) * 7, (0.0,) * 7, 0)
    best_score = evaluate(base)
    best = empty
    if best_score < ccfg.threshold:
        return DomainRepair()

    index = {fluent: i for i, fluent in enumerate(FLUENT_ORDER)}
    ops = [(index[op.fluent], op.delta) for op in mmos.operators
           if op.fluent not in LIMIT_FLUENTS]
    counter = itertools.count()
    open_heap = [(best_score, next(counter), empty)]
    closed = {empty[1]}
    expansions = 0
    penalty = cfg.length_penalty

    while best_score >= ccfg.threshold:
        if not open_heap or expansions >= cfg.max_expansions:
            raise RepairExhausted(materialize(best), best_score)
        _, _, (deltas, canon, length) = heapq.heappop(open_heap)
        expansions += 1
        if trace is not None:
            trace.append(canon)
        for fi, delta in ops:
            fl = sorted(deltas[fi] + (delta,))
            total = 0.0
            for d in fl:
                total += d
            child_canon = canon[:fi] + (total,) + canon[fi + 1:]
            if child_canon in closed:
                continue
            closed.add(child_canon)
            if base[fi] + total <= 0.0:
                continue
            score = evaluate(tuple(b + c for b, c in zip(base, child_canon)))
            child = (deltas[:fi] + (tuple(fl),) + deltas[fi + 1:],
                     child_canon, length + 1)
            if score < best_score:
                best_score = score
                best = child
            heapq.heappush(open_heap,
                           (score + penalty * (length + 1), next(counter),
                            child))
    return materialize(best)
