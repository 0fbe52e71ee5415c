"""Ground-truth simulator: seeding, novelty schedule, episode lifecycle."""

import pytest

from modelmend import (Action, DT, EnvConfig, Environment, EpisodeFinished,
                       FluentName, NoveltyEvent, Plan, Trajectory, Transition,
                       episode_reward, nominal_model, simulate_plan,
                       step_model)

N1_SCHEDULE = (NoveltyEvent(episode=7, overrides={
    FluentName.LENGTH_POLE: 1.1, FluentName.GRAVITY: 12.0}),)


def drive(env, episode_idx, actions):
    """Reset and run a fixed action sequence; returns observed states."""
    states = [env.reset(episode_idx)]
    for action in actions:
        obs, terminated, truncated = env.step(action)
        states.append(obs)
        if terminated or truncated:
            break
    return states


def test_same_seed_same_rollout():
    cfg = EnvConfig(seed=11)
    actions = (Action.LEFT, Action.RIGHT) * 20
    a = drive(Environment(cfg), 0, actions)
    b = drive(Environment(cfg), 0, actions)
    assert a == b


def test_different_seeds_differ():
    s0 = Environment(EnvConfig(seed=0)).reset(0)
    s1 = Environment(EnvConfig(seed=1)).reset(0)
    assert s0 != s1


def test_reset_draws_within_init_range():
    env = Environment(EnvConfig(seed=5, init_range=0.03))
    for episode in range(10):
        s = env.reset(episode)
        assert all(abs(v) <= 0.03 for v in s.as_tuple())


def test_zero_init_range_starts_at_origin():
    s = Environment(EnvConfig(init_range=0.0)).reset(0)
    assert s.as_tuple() == (0.0, 0.0, 0.0, 0.0)


def test_novelty_applies_at_its_episode_and_persists():
    env = Environment(EnvConfig(novelty_schedule=N1_SCHEDULE))
    env.reset(6)
    assert env.current_fluents == nominal_model()
    env.reset(7)
    assert env.current_fluents.length_pole == 1.1
    assert env.current_fluents.gravity == 12.0
    assert env.current_fluents.mass_cart == 1.0
    env.reset(30)
    assert env.current_fluents.gravity == 12.0
    # jumping straight past the event also applies it
    late = Environment(EnvConfig(novelty_schedule=N1_SCHEDULE))
    late.reset(9)
    assert late.current_fluents.gravity == 12.0


def test_fluents_never_change_mid_episode():
    env = Environment(EnvConfig(novelty_schedule=N1_SCHEDULE, seed=2))
    env.reset(6)
    before = env.current_fluents
    for _ in range(50):
        _, terminated, truncated = env.step(Action.RIGHT)
        if terminated or truncated:
            break
    assert env.current_fluents is before


def test_noiseless_observation_matches_model_stepping():
    """With sigma=0 the observation is exactly the stepped true state."""
    env = Environment(EnvConfig(seed=9))
    s = env.reset(0)
    for action in (Action.RIGHT, Action.LEFT, Action.LEFT, Action.RIGHT):
        obs, _, _ = env.step(action)
        assert obs == step_model(nominal_model(), s, action, DT)
        s = obs


def test_matched_model_rollout_equals_simulate_plan():
    # the environment and the model share the stepping kernel, so a
    # matched rollout must agree bitwise, not approximately
    env = Environment(EnvConfig(seed=4, max_steps=60))
    actions = (Action.LEFT, Action.RIGHT, Action.RIGHT) * 20
    observed = drive(env, 0, actions)
    predicted = simulate_plan(nominal_model(), observed[0],
                              Plan(tuple(actions[:len(observed) - 1])))
    assert observed == predicted


def test_truncation_at_max_steps():
    env = Environment(EnvConfig(max_steps=5, init_range=0.0))
    env.reset(0)
    flags = []
    # alternating pushes keep the pole up for the full five steps
    for action in (Action.RIGHT, Action.LEFT) * 3:
        obs, terminated, truncated = env.step(action)
        flags.append((terminated, truncated))
        if terminated or truncated:
            break
    assert flags[-1] == (False, True)
    assert env.step_count == 5


def test_termination_on_limit_exceedance():
    env = Environment(EnvConfig(init_range=0.0))
    env.reset(0)
    terminated = False
    for _ in range(200):
        _, terminated, truncated = env.step(Action.LEFT)
        if terminated or truncated:
            break
    assert terminated


def test_step_after_done_raises():
    env = Environment(EnvConfig(max_steps=2, init_range=0.0))
    with pytest.raises(EpisodeFinished):
        env.step(Action.LEFT)  # never reset
    env.reset(0)
    env.step(Action.RIGHT)
    env.step(Action.LEFT)
    with pytest.raises(EpisodeFinished):
        env.step(Action.RIGHT)


def test_reset_rejects_negative_episode():
    with pytest.raises(ValueError, match="episode"):
        Environment(EnvConfig()).reset(-1)


def test_sensor_noise_perturbs_observations():
    noisy = Environment(EnvConfig(sensor_noise_sigma=0.01, seed=8,
                                  init_range=0.0))
    clean = Environment(EnvConfig(seed=8, init_range=0.0))
    noisy.reset(0)
    clean.reset(0)
    noisy_obs, _, _ = noisy.step(Action.RIGHT)
    clean_obs, _, _ = clean.step(Action.RIGHT)
    assert noisy_obs != clean_obs


def test_config_validation():
    with pytest.raises(ValueError, match="max_steps"):
        EnvConfig(max_steps=0)
    with pytest.raises(ValueError, match="init_range"):
        EnvConfig(init_range=-0.1)
    with pytest.raises(ValueError, match="sigma"):
        EnvConfig(sensor_noise_sigma=-1.0)
    with pytest.raises(ValueError, match="one novelty event"):
        EnvConfig(novelty_schedule=(
            NoveltyEvent(episode=3, overrides={FluentName.GRAVITY: 12.0}),
            NoveltyEvent(episode=3, overrides={FluentName.X_LIMIT: 1.0})))


def test_novelty_event_validation():
    with pytest.raises(ValueError, match="episode"):
        NoveltyEvent(episode=-1, overrides={})
    with pytest.raises(ValueError, match="gravity"):
        NoveltyEvent(episode=0, overrides={FluentName.GRAVITY: -9.8})


def test_episode_reward_counts_transitions():
    s0 = Environment(EnvConfig(seed=1)).reset(0)
    assert episode_reward(Trajectory(s0)) == 0
    nxt = step_model(nominal_model(), s0, Action.RIGHT, DT)
    tau = Trajectory(s0, (Transition(s0, Action.RIGHT, nxt),))
    assert episode_reward(tau) == 1
