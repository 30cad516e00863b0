"""Seeded random instances for the property suites.

ZD strategies do not exist for generic (game, strategy) pairs, so the ZD
generator works backwards: draw the strategy first, take a nonzero vector
v from its strategy-vector span, and then build payoffs with v = s_n -
r_n * ones.  That plants v in the span of (ones, payoffs), which makes
player n zero-determinant enforcing e_n = r_n -- an exact oracle the
tests can check against the stationary solve.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .games import Game, StateSpace, build_state_space, make_game
from .linalg import ZERO, is_zero_vector, matvec
from .strategies import (
    MemoryOneStrategy,
    MonitoringStructure,
    PressDysonMatrix,
    make_monitoring,
    make_strategy,
    marginal_transition,
    perfect_monitoring,
    press_dyson,
)


def random_rational(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_distribution(rng: random.Random, k: int, *, positive: bool = True, scale: int = 6):
    """Exact random distribution; strictly positive entries by default."""
    low = 1 if positive else 0
    while True:
        weights = [rng.randint(low, scale) for _ in range(k)]
        total = sum(weights)
        if total > 0 and (not positive or all(w > 0 for w in weights)):
            return tuple(Fraction(w, total) for w in weights)


def random_monitoring(rng: random.Random, space: StateSpace, n_signals: int,
                      *, positive: bool = True) -> MonitoringStructure:
    signals = tuple(f"s{i}" for i in range(n_signals))
    law = [random_distribution(rng, n_signals, positive=positive) for _ in range(space.size)]
    return make_monitoring(signals, law)


def random_strategy(rng: random.Random, player: int, space: StateSpace,
                    monitoring: MonitoringStructure, *, positive: bool = True) -> MemoryOneStrategy:
    count = space.action_counts[player - 1]
    table = [
        [random_distribution(rng, count, positive=positive) for _ in monitoring.signals]
        for _ in range(count)
    ]
    return make_strategy(player, count, monitoring.signals, table)


def random_game(rng: random.Random, action_counts) -> Game:
    space = build_state_space(action_counts)
    payoffs = [
        [random_rational(rng) for _ in range(space.size)] for _ in range(space.n_players)
    ]
    return make_game(action_counts, payoffs)


def random_weakly_symmetric_game(rng: random.Random, actions: int,
                                 *, distinct_payoffs: bool = False) -> Game:
    """Two-player game symmetric under the swap: s2(i,j) = s1(j,i)."""
    space = build_state_space((actions, actions))
    if distinct_payoffs:
        values = rng.sample(range(-4 * space.size, 4 * space.size), space.size)
        s1 = [Fraction(v, 4) for v in values]
    else:
        s1 = [random_rational(rng) for _ in range(space.size)]
    s2 = [ZERO] * space.size
    for i in range(space.size):
        a, b = space.decode(i)
        s2[i] = s1[space.index((b, a))]
    return Game(space, (tuple(s1), tuple(s2)))


@dataclass(frozen=True)
class ZdInstance:
    """A random game in which the chosen players are ZD by construction."""

    game: Game
    monitoring: MonitoringStructure
    strategies: tuple[MemoryOneStrategy, ...]
    press_dyson: dict[int, PressDysonMatrix]
    zd_players: tuple[int, ...]
    enforced_values: dict[int, Fraction]  # player -> the pinned payoff e_n


def random_zd_instance(rng: random.Random, action_counts, zd_players,
                       *, n_signals: int | None = None) -> ZdInstance:
    """Random monitoring and strategies with planted ZD structure.

    Every strategy has strictly positive table entries, so the joint chain
    is irreducible and every strategy-vector entry is nonzero.
    """
    space = build_state_space(action_counts)
    if n_signals is None:
        monitoring = perfect_monitoring(space)
    else:
        monitoring = random_monitoring(rng, space, n_signals)
    strategies = tuple(
        random_strategy(rng, n, space, monitoring) for n in range(1, space.n_players + 1)
    )
    pd = {
        n: press_dyson(marginal_transition(strategies[n - 1], monitoring, space), space, n)
        for n in range(1, space.n_players + 1)
    }
    payoffs = [None] * space.n_players
    enforced = {}
    for n in zd_players:
        matrix = pd[n].matrix()
        count = space.action_counts[n - 1]
        while True:
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(count)]
            if len(set(coeffs)) > 1:
                v = matvec(matrix, coeffs)
                if not is_zero_vector(v):
                    break
        r_n = random_rational(rng)
        payoffs[n - 1] = tuple(x + r_n for x in v)  # v = s_n - r_n * ones
        enforced[n] = r_n
    for n in range(1, space.n_players + 1):
        if payoffs[n - 1] is None:
            payoffs[n - 1] = tuple(random_rational(rng) for _ in range(space.size))
    game = Game(space, tuple(payoffs))
    return ZdInstance(
        game=game,
        monitoring=monitoring,
        strategies=strategies,
        press_dyson=pd,
        zd_players=tuple(zd_players),
        enforced_values=enforced,
    )
