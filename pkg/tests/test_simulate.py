"""Monte Carlo harness: determinism, engines, and convergence."""

import random
from fractions import Fraction

import pytest

from zdgames.constructors import EqualizerParams, make_equalizer_imperfect
from zdgames.errors import InvalidInputError
from zdgames.games import make_game
from zdgames.simulate import (
    RNG_ID,
    EpisodeConfig,
    Xoshiro256StarStar,
    cdf_thresholds,
    run_batch,
    run_episode,
    trajectory_csv,
    uniform_initial,
)

from helpers import all_one_strategy, pd_game, random_profile, uniform_strategy

F = Fraction


def _equalizer_setup():
    game = pd_game(4, 1, F(9, 2), F(3, 2))
    bundle = make_equalizer_imperfect(game, F(1, 5), EqualizerParams(F(-3, 125), F(33, 500)))
    opponent = all_one_strategy(2, 2, bundle.monitoring.signals)
    return game, [bundle.strategy, opponent], bundle.monitoring


def test_rng_reference_values_are_stable():
    rng = Xoshiro256StarStar(1)
    first = [rng.next64() for _ in range(3)]
    rng2 = Xoshiro256StarStar(1)
    assert [rng2.next64() for _ in range(3)] == first
    assert all(0 <= x < 2 ** 64 for x in first)
    assert Xoshiro256StarStar(2).next64() != first[0]


def test_cdf_thresholds_exact():
    thr = cdf_thresholds([F(1, 3), F(1, 3), F(1, 3)])
    assert thr[-1] == 2 ** 53
    assert thr[0] == -((-(2 ** 53)) // 3)  # ceil(2^53 / 3)
    assert thr == sorted(thr)
    with pytest.raises(InvalidInputError):
        cdf_thresholds([F(1, 2), F(1, 4)])


def test_config_validation():
    with pytest.raises(InvalidInputError):
        EpisodeConfig(steps=0, seed=1, initial_state=(1, 1))
    with pytest.raises(InvalidInputError):
        EpisodeConfig(steps=10, seed=1, initial_state=(1, 1), record_every=3)
    with pytest.raises(InvalidInputError):
        EpisodeConfig(steps=10, seed=1)  # no initial condition
    with pytest.raises(InvalidInputError):
        EpisodeConfig(
            steps=10, seed=1, initial_state=(1, 1),
            initial_distributions=((F(1),), (F(1),)),
        )


def test_same_seed_is_bit_identical():
    game, strategies, monitoring = _equalizer_setup()
    cfg = EpisodeConfig(steps=2000, seed=99, initial_state=(1, 1), record_every=200)
    a = run_episode(game, strategies, monitoring, cfg)
    b = run_episode(game, strategies, monitoring, cfg)
    assert a == b
    assert trajectory_csv(a, 2) == trajectory_csv(b, 2)
    assert a.rng_id == RNG_ID


def test_engines_produce_identical_trajectories():
    game, strategies, monitoring = _equalizer_setup()
    for seed in (1, 2, 3):
        cfg = EpisodeConfig(steps=1500, seed=seed, initial_state=(1, 1), record_every=300)
        py = run_episode(game, strategies, monitoring, cfg, engine="python")
        nb = run_episode(game, strategies, monitoring, cfg, engine="numba")
        assert py.samples == nb.samples
        assert py.final_state == nb.final_state


def test_engines_identical_with_product_initial_and_three_actions():
    rng = random.Random(33)
    space, monitoring, strategies = random_profile(rng, (3, 2), n_signals=2)
    game = make_game((3, 2), [[rng.randint(-2, 2) for _ in range(6)] for _ in range(2)])
    cfg = EpisodeConfig(
        steps=1200, seed=5, record_every=400,
        initial_distributions=uniform_initial(game),
    )
    py = run_episode(game, strategies, monitoring, cfg, engine="python")
    nb = run_episode(game, strategies, monitoring, cfg, engine="numba")
    assert py == nb


def test_zero_payoffs_give_zero_averages():
    game = make_game((2, 2), [[0, 0, 0, 0], [0, 0, 0, 0]])
    _, strategies, monitoring = _equalizer_setup()
    cfg = EpisodeConfig(steps=1000, seed=4, initial_state=(2, 2), record_every=100)
    traj = run_episode(game, strategies, monitoring, cfg)
    assert all(avgs == (0.0, 0.0) for _, avgs in traj.samples)


def test_running_averages_respect_payoff_bounds():
    game, strategies, monitoring = _equalizer_setup()
    cfg = EpisodeConfig(steps=5000, seed=11, initial_state=(1, 1), record_every=250)
    traj = run_episode(game, strategies, monitoring, cfg)
    for n in (1, 2):
        lo = min(float(x) for x in game.payoffs[n - 1])
        hi = max(float(x) for x in game.payoffs[n - 1])
        for _, avgs in traj.samples:
            assert lo <= avgs[n - 1] <= hi


def test_batch_singleton_summary_equals_finals():
    game, strategies, monitoring = _equalizer_setup()
    cfg = EpisodeConfig(steps=1000, seed=8, initial_state=(1, 1), record_every=1000)
    batch = run_batch(game, strategies, monitoring, [cfg])
    assert batch.mean_final == batch.trajectories[0].final_averages
    assert batch.stddev_final == (0.0, 0.0)


def test_batch_is_deterministic_and_ordered():
    game, strategies, monitoring = _equalizer_setup()
    configs = [
        EpisodeConfig(steps=1000, seed=s, initial_state=(1, 1), record_every=500)
        for s in (1, 2, 3)
    ]
    b1 = run_batch(game, strategies, monitoring, configs)
    b2 = run_batch(game, strategies, monitoring, configs)
    assert b1 == b2
    assert [t.seed for t in b1.trajectories] == [1, 2, 3]
    with pytest.raises(InvalidInputError):
        run_batch(game, strategies, monitoring, [])


def test_csv_format():
    game, strategies, monitoring = _equalizer_setup()
    cfg = EpisodeConfig(steps=400, seed=21, initial_state=(1, 1), record_every=200)
    traj = run_episode(game, strategies, monitoring, cfg)
    lines = trajectory_csv(traj, 2).strip().split("\n")
    assert lines[0] == "t,avg_payoff_1,avg_payoff_2"
    assert len(lines) == 3
    assert lines[1].split(",")[0] == "200"


def test_equalizer_convergence_smoke():
    game, strategies, monitoring = _equalizer_setup()
    cfg = EpisodeConfig(steps=100_000, seed=77, initial_state=(1, 1), record_every=10_000)
    traj = run_episode(game, strategies, monitoring, cfg)
    assert abs(traj.final_averages[1] - 2.75) < 0.1


def test_uniform_opponent_three_action_runs():
    # random init through the per-player distributions exercises all tables
    rng = random.Random(34)
    space, monitoring, strategies = random_profile(rng, (3, 3), n_signals=2)
    game = make_game((3, 3), [[rng.randint(-1, 1) for _ in range(9)] for _ in range(2)])
    strategies[1] = uniform_strategy(2, 3, monitoring.signals)
    cfg = EpisodeConfig(
        steps=2000, seed=13, record_every=1000, initial_distributions=uniform_initial(game)
    )
    traj = run_episode(game, strategies, monitoring, cfg)
    assert len(traj.samples) == 2
