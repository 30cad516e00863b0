"""Shared builders for the test suite."""

from __future__ import annotations

from fractions import Fraction

from zdgames.games import Game, make_game
from zdgames.linalg import ONE, ZERO
from zdgames.markov import stationary_distribution
from zdgames.rand import random_monitoring, random_strategy
from zdgames.strategies import (
    MemoryOneStrategy,
    assemble_transition,
    make_strategy,
    perfect_monitoring,
    strategy_from_marginal_rows,
)


def pd_game(r=3, s=0, t=5, p=1) -> Game:
    """Prisoner's dilemma layout: s1 = (R,S,T,P), s2 = (R,T,S,P)."""
    r, s, t, p = (Fraction(x) for x in (r, s, t, p))
    return make_game((2, 2), [[r, s, t, p], [r, t, s, p]])


def rps_game() -> Game:
    s1 = [0, 1, -1, -1, 0, 1, 1, -1, 0]
    return make_game((3, 3), [s1, [-x for x in s1]])


def tft_strategy(player: int, game: Game) -> MemoryOneStrategy:
    """Perfect-monitoring tit-for-tat: copy the opponent's last action."""
    rows_by_state = []
    opponent = 2 if player == 1 else 1
    for state in game.space.states():
        copied = state[opponent - 1]
        rows_by_state.append([ONE if a == copied else ZERO for a in (1, 2)])
    rows = [[rows_by_state[j][a] for j in range(game.space.size)] for a in range(2)]
    return strategy_from_marginal_rows(player, game.space, rows)


def repeat_strategy(player: int, count: int, signals) -> MemoryOneStrategy:
    """Repeat the own previous action regardless of the signal."""
    table = [
        [[ONE if a == own else ZERO for a in range(count)] for _ in signals]
        for own in range(count)
    ]
    return make_strategy(player, count, signals, table)


def all_one_strategy(player: int, count: int, signals) -> MemoryOneStrategy:
    table = [
        [[ONE if a == 0 else ZERO for a in range(count)] for _ in signals]
        for _ in range(count)
    ]
    return make_strategy(player, count, signals, table)


def uniform_strategy(player: int, count: int, signals) -> MemoryOneStrategy:
    row = [Fraction(1, count)] * count
    table = [[list(row) for _ in signals] for _ in range(count)]
    return make_strategy(player, count, signals, table)


def uniform_state_distribution(m: int):
    return tuple(Fraction(1, m) for _ in range(m))


def delta_distribution(space, state):
    idx = space.index(state)
    return tuple(ONE if j == idx else ZERO for j in range(space.size))


def stationary_payoffs(game, strategies, monitoring, initial=None, method="auto"):
    transition = assemble_transition(strategies, monitoring, game.space)
    if initial is None:
        initial = uniform_state_distribution(game.space.size)
    return stationary_distribution(transition, initial, method=method).with_payoffs(game)


def random_profile(rng, action_counts, n_signals=None, positive=True):
    """Random (game-independent) monitoring + one strategy per player."""
    from zdgames.games import build_state_space

    space = build_state_space(action_counts)
    if n_signals is None:
        monitoring = perfect_monitoring(space)
    else:
        monitoring = random_monitoring(rng, space, n_signals)
    strategies = [
        random_strategy(rng, n, space, monitoring, positive=positive)
        for n in range(1, space.n_players + 1)
    ]
    return space, monitoring, strategies
