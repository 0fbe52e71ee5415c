"""Shared fixtures: small, fast experiment shapes for unit tests.

Acceptance tests build their own full-size configs; everything else
runs against trimmed-down episodes so the suite stays quick.
"""

import pytest

from modelmend import (ConsistencyConfig, EnvConfig, Environment,
                       ExperimentConfig, MMOSet, NoveltyEvent, PlannerConfig,
                       RepairConfig, nominal_model)
from modelmend.domain import FluentName


# acceptance tests append their PASS/FAIL lines here; the terminal
# summary hook below replays them after the run, outside capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)


@pytest.fixture
def nominal():
    return nominal_model()


@pytest.fixture
def fast_planner():
    # shallow lookahead keeps unit tests fast; plenty for short episodes
    return PlannerConfig(lookahead_depth=8, beam_width=32)


@pytest.fixture
def consistency_cfg():
    return ConsistencyConfig()


def make_experiment(*, novelty=None, episodes=2, trials=1, max_steps=40,
                    agent=None, repair=None, planner=None, seed=0,
                    mmo_step=0.1):
    """A small experiment config; novelty is {fluent_name: value} at episode 0."""
    from modelmend import AgentKind

    schedule = ()
    if novelty:
        overrides = {FluentName(k): v for k, v in novelty.items()}
        schedule = (NoveltyEvent(episode=0, overrides=overrides),)
    return ExperimentConfig(
        env=EnvConfig(novelty_schedule=schedule, max_steps=max_steps,
                      seed=seed),
        planner=planner or PlannerConfig(lookahead_depth=8, beam_width=32),
        consistency=ConsistencyConfig(),
        repair=repair or RepairConfig(),
        agent=agent or AgentKind.PLANNING_REPAIRING,
        mmos=MMOSet.default(mmo_step),
        episodes=episodes,
        trials=trials,
        base_seed=seed,
    )


@pytest.fixture
def novel_episode():
    """One executed episode against gravity=12 dynamics, nominal beliefs.

    Returns (model, executed_plan, trajectory): the raw material a
    detection-plus-repair cycle consumes.
    """
    from modelmend import PlanningProblem, run_plan_execute

    model = nominal_model()
    env = Environment(EnvConfig(
        novelty_schedule=(NoveltyEvent(
            episode=0, overrides={FluentName.GRAVITY: 12.0}),),
        max_steps=40, seed=3))
    s0 = env.reset(0)
    problem = PlanningProblem(initial_state=s0, horizon=40)
    tau, plan = run_plan_execute(model, env, problem,
                                 PlannerConfig(lookahead_depth=8,
                                               beam_width=32))
    return model, plan, tau
