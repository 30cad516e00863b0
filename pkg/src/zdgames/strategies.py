"""Memory-one strategies under public monitoring.

A strategy of player n is the signal-conditioned table
T^(sigma_n | sigma'_n, tau): given her own previous action and the common
signal, a distribution over next actions.  Perfect monitoring is the
special case where the signal set is the state space itself and the
signal law is the Kronecker delta.

From the table we derive the marginal transition T_n(sigma_n | sigma'),
the Press-Dyson matrix (marginal minus the "Repeat" kernel), and the full
joint transition matrix of the induced Markov chain.  Everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError
from .games import StateSpace
from .linalg import ONE, ZERO
from .rational import as_fraction


def _check_distribution(row, what: str):
    total = ZERO
    for x in row:
        if x < 0 or x > 1:
            raise InvalidInputError(f"{what}: probability {x} outside [0, 1]")
        total += x
    if total != 1:
        raise InvalidInputError(f"{what}: probabilities sum to {total}, expected 1")


@dataclass(frozen=True)
class MonitoringStructure:
    """Signal labels and the exact signal law W(tau | sigma')."""

    signals: tuple[str, ...]
    law: tuple[tuple[Fraction, ...], ...]  # law[flat_state][signal_index]

    def __post_init__(self):
        if len(set(self.signals)) != len(self.signals):
            raise InvalidInputError("signal labels must be distinct")
        for i, row in enumerate(self.law):
            if len(row) != len(self.signals):
                raise InvalidInputError(f"signal law row {i} has wrong width")
            _check_distribution(row, f"signal law at state index {i}")

    @property
    def n_states(self) -> int:
        return len(self.law)


def state_label(state: tuple[int, ...]) -> str:
    return ",".join(str(a) for a in state)


def perfect_monitoring(space: StateSpace) -> MonitoringStructure:
    """B = Sigma with W(tau | sigma') = delta: players observe the state."""
    m = space.size
    signals = tuple(state_label(s) for s in space.states())
    law = tuple(
        tuple(ONE if j == i else ZERO for j in range(m)) for i in range(m)
    )
    return MonitoringStructure(signals, law)


def make_monitoring(signals, law_rows) -> MonitoringStructure:
    law = tuple(tuple(as_fraction(x) for x in row) for row in law_rows)
    return MonitoringStructure(tuple(str(s) for s in signals), law)


@dataclass(frozen=True)
class MemoryOneStrategy:
    """Signal-conditioned table of one player.

    ``table[own_prev - 1][signal_index]`` is the distribution over the
    player's next action.
    """

    player: int
    action_count: int
    signals: tuple[str, ...]
    table: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        if self.player < 1:
            raise InvalidInputError("player indices are 1-based")
        if len(self.table) != self.action_count:
            raise InvalidInputError(
                f"table has {len(self.table)} own-action rows, expected {self.action_count}"
            )
        for a, per_signal in enumerate(self.table, start=1):
            if len(per_signal) != len(self.signals):
                raise InvalidInputError(f"own action {a}: expected one row per signal")
            for s, row in zip(self.signals, per_signal):
                if len(row) != self.action_count:
                    raise InvalidInputError(
                        f"row for (own={a}, signal={s}) has wrong length"
                    )
                _check_distribution(row, f"strategy row (own={a}, signal={s})")

    def row(self, own_prev: int, signal_index: int) -> tuple[Fraction, ...]:
        return self.table[own_prev - 1][signal_index]


def make_strategy(player, action_count, signals, table_rows) -> MemoryOneStrategy:
    """Build a strategy from nested row data (any rational representation)."""
    table = tuple(
        tuple(tuple(as_fraction(x) for x in row) for row in per_signal)
        for per_signal in table_rows
    )
    return MemoryOneStrategy(int(player), int(action_count), tuple(str(s) for s in signals), table)


def strategy_from_marginal_rows(player, space: StateSpace, rows) -> MemoryOneStrategy:
    """Perfect-monitoring strategy with prescribed marginal vectors.

    ``rows[a-1][j]`` is T_n(a | state j).  Under perfect monitoring the
    signal determines the state, so the own-action slot is redundant and
    every slot gets the same per-state row.
    """
    m = space.size
    count = space.action_counts[player - 1]
    rows = [[as_fraction(x) for x in row] for row in rows]
    if len(rows) != count or any(len(r) != m for r in rows):
        raise InvalidInputError("marginal rows have wrong shape")
    signals = tuple(state_label(s) for s in space.states())
    per_state = tuple(tuple(rows[a][j] for a in range(count)) for j in range(m))
    table = tuple(per_state for _ in range(count))
    return MemoryOneStrategy(player, count, signals, table)


@dataclass(frozen=True)
class MarginalTransition:
    """T_n(sigma_n | sigma'): matrix[action - 1][flat_state]."""

    player: int
    matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def action_count(self) -> int:
        return len(self.matrix)


@dataclass(frozen=True)
class PressDysonMatrix:
    """Strategy vectors of one player: columns[a-1] is the length-M vector
    tilde-T_n(a | .) = T_n(a | .) - delta_{a, sigma'_n}."""

    player: int
    columns: tuple[tuple[Fraction, ...], ...]

    @property
    def action_count(self) -> int:
        return len(self.columns)

    def matrix(self):
        """M x M_n matrix with the strategy vectors as columns."""
        m = len(self.columns[0])
        return [[self.columns[a][i] for a in range(self.action_count)] for i in range(m)]


def _check_compat(strategy: MemoryOneStrategy, monitoring: MonitoringStructure, space: StateSpace):
    if not 1 <= strategy.player <= space.n_players:
        raise InvalidInputError(f"player {strategy.player} not in 1..{space.n_players}")
    if strategy.action_count != space.action_counts[strategy.player - 1]:
        raise InvalidInputError(
            f"player {strategy.player} strategy has {strategy.action_count} actions, "
            f"space expects {space.action_counts[strategy.player - 1]}"
        )
    if strategy.signals != monitoring.signals:
        raise InvalidInputError("strategy and monitoring signal sets differ")
    if monitoring.n_states != space.size:
        raise InvalidInputError("monitoring law does not cover the state space")


def marginal_transition(
    strategy: MemoryOneStrategy, monitoring: MonitoringStructure, space: StateSpace
) -> MarginalTransition:
    """T_n(sigma_n | sigma') = sum_tau W(tau | sigma') T^(sigma_n | sigma'_n, tau)."""
    _check_compat(strategy, monitoring, space)
    n = strategy.player
    count = strategy.action_count
    m = space.size
    matrix = []
    for action in range(1, count + 1):
        row = []
        for j in range(m):
            prev_own = space.decode(j)[n - 1]
            w_row = monitoring.law[j]
            total = ZERO
            for t, w in enumerate(w_row):
                if w != 0:
                    total += w * strategy.row(prev_own, t)[action - 1]
            row.append(total)
        matrix.append(tuple(row))
    return MarginalTransition(n, tuple(matrix))


def press_dyson(marginal: MarginalTransition, space: StateSpace, player: int) -> PressDysonMatrix:
    """Subtract the "Repeat" kernel delta_{sigma_n, sigma'_n} from the marginal."""
    if player != marginal.player:
        raise InvalidInputError("player index does not match the marginal")
    count = marginal.action_count
    m = space.size
    columns = []
    for action in range(1, count + 1):
        col = []
        for j in range(m):
            repeat = ONE if space.decode(j)[player - 1] == action else ZERO
            col.append(marginal.matrix[action - 1][j] - repeat)
        columns.append(tuple(col))
    return PressDysonMatrix(player, tuple(columns))


def assemble_transition(strategies, monitoring: MonitoringStructure, space: StateSpace):
    """Joint M x M column-stochastic transition matrix T(sigma | sigma').

    ``strategies`` must hold exactly one strategy per player.  Entry
    [i][j] is the probability of moving to state i from state j.
    """
    by_player = {s.player: s for s in strategies}
    if sorted(by_player) != list(range(1, space.n_players + 1)):
        raise InvalidInputError(
            f"need one strategy per player 1..{space.n_players}, got players {sorted(by_player)}"
        )
    for s in strategies:
        _check_compat(s, monitoring, space)
    m = space.size
    matrix = [[ZERO] * m for _ in range(m)]
    states = [space.decode(i) for i in range(m)]
    for j in range(m):
        prev = states[j]
        for t, w in enumerate(monitoring.law[j]):
            if w == 0:
                continue
            rows = [by_player[n].row(prev[n - 1], t) for n in range(1, space.n_players + 1)]
            for i in range(m):
                nxt = states[i]
                p = w
                for n in range(space.n_players):
                    p *= rows[n][nxt[n] - 1]
                    if p == 0:
                        break
                if p != 0:
                    matrix[i][j] += p
    return matrix
