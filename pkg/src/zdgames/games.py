"""Games, joint state spaces, payoff vectors, and symmetry structure.

States are tuples of 1-based actions, one per player.  Flat indices are
0-based and lexicographic with player 1 most significant, so a 2x2 game
enumerates (1,1),(1,2),(2,1),(2,2) -- the usual (R,S,T,P) layout.  That
ordering is part of the JSON format contract, not an implementation
detail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidGameError, InvalidInputError, SearchBoundExceededError
from .linalg import ONE
from .rational import as_fraction

DEFAULT_PERMUTATION_BOUND = 6


@dataclass(frozen=True)
class StateSpace:
    """Joint action space of N players with a fixed flat indexing."""

    action_counts: tuple[int, ...]
    strides: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        strides = []
        acc = 1
        for count in reversed(self.action_counts):
            strides.append(acc)
            acc *= count
        object.__setattr__(self, "strides", tuple(reversed(strides)))

    @property
    def n_players(self) -> int:
        return len(self.action_counts)

    @property
    def size(self) -> int:
        m = 1
        for count in self.action_counts:
            m *= count
        return m

    def index(self, state: tuple[int, ...]) -> int:
        if len(state) != self.n_players:
            raise InvalidInputError(f"state {state} has wrong length")
        flat = 0
        for action, count, stride in zip(state, self.action_counts, self.strides):
            if not 1 <= action <= count:
                raise InvalidInputError(f"action {action} out of range 1..{count}")
            flat += (action - 1) * stride
        return flat

    def decode(self, flat: int) -> tuple[int, ...]:
        if not 0 <= flat < self.size:
            raise InvalidInputError(f"flat index {flat} out of range 0..{self.size - 1}")
        state = []
        for count, stride in zip(self.action_counts, self.strides):
            q, flat = divmod(flat, stride)
            state.append(q + 1)
        return tuple(state)

    def states(self):
        """All states in flat-index order."""
        return (self.decode(i) for i in range(self.size))

    def indices_with(self, player: int, action: int):
        """Flat indices of states where ``player`` (1-based) plays ``action``."""
        return [i for i in range(self.size) if self.decode(i)[player - 1] == action]


def build_state_space(action_counts) -> StateSpace:
    counts = tuple(int(c) for c in action_counts)
    if not counts:
        raise InvalidGameError("a game needs at least one player")
    if any(c < 1 for c in counts):
        raise InvalidGameError(f"action counts must be >= 1, got {counts}")
    return StateSpace(counts)


@dataclass(frozen=True)
class Game:
    """Payoff data over a joint state space, stored as exact rationals."""

    space: StateSpace
    payoffs: tuple[tuple[Fraction, ...], ...]  # one length-M vector per player

    def __post_init__(self):
        if len(self.payoffs) != self.space.n_players:
            raise InvalidGameError(
                f"expected {self.space.n_players} payoff vectors, got {len(self.payoffs)}"
            )
        for n, vec in enumerate(self.payoffs, start=1):
            if len(vec) != self.space.size:
                raise InvalidGameError(
                    f"payoff vector of player {n} has length {len(vec)}, expected {self.space.size}"
                )

    @property
    def n_players(self) -> int:
        return self.space.n_players

    def payoff(self, player: int, state: tuple[int, ...]) -> Fraction:
        return self.payoffs[player - 1][self.space.index(state)]

    def payoff_matrix(self):
        """The M x (N+1) matrix (ones, s_1, ..., s_N), column 0 all ones."""
        m = self.space.size
        return [[ONE] + [self.payoffs[n][i] for n in range(self.n_players)] for i in range(m)]


def make_game(action_counts, payoffs) -> Game:
    space = build_state_space(action_counts)
    vectors = tuple(tuple(as_fraction(x) for x in vec) for vec in payoffs)
    return Game(space, vectors)


@dataclass(frozen=True)
class Permutation:
    """Bijection pi on players {1..N}; ``mapping[n-1] = pi(n)``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(1, n + 1)):
            raise InvalidInputError(f"{self.mapping} is not a permutation of 1..{n}")

    def __call__(self, player: int) -> int:
        return self.mapping[player - 1]

    def apply_to_state(self, state: tuple[int, ...]) -> tuple[int, ...]:
        """sigma_pi = (sigma_{pi(1)}, ..., sigma_{pi(N)})."""
        return tuple(state[self(n) - 1] for n in range(1, len(state) + 1))

    def compose(self, other: "Permutation") -> "Permutation":
        """(self o other)(n) = self(other(n))."""
        return Permutation(tuple(self(other(n)) for n in range(1, len(self.mapping) + 1)))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def all(cls, n: int):
        for perm in itertools.permutations(range(1, n + 1)):
            yield cls(perm)


def is_symmetric_under(game: Game, pi: Permutation) -> bool:
    """True iff pi preserves action counts and the payoff structure."""
    n = game.n_players
    if len(pi.mapping) != n:
        raise InvalidInputError("permutation size does not match the player count")
    counts = game.space.action_counts
    if any(counts[k - 1] != counts[pi(k) - 1] for k in range(1, n + 1)):
        return False
    for state in game.space.states():
        permuted = pi.apply_to_state(state)
        for k in range(1, n + 1):
            if game.payoff(pi(k), state) != game.payoff(k, permuted):
                return False
    return True


def weak_symmetry_witnesses(game: Game, bound: int = DEFAULT_PERMUTATION_BOUND):
    """Witness permutations per ordered player pair, or None.

    Returns a dict {(n, nbar): Permutation with pi(n) = nbar} covering every
    ordered pair when the game is weakly symmetric, else None.  The search
    is exhaustive over all N! permutations, so N is capped by ``bound``.
    """
    n = game.n_players
    if n > bound:
        raise SearchBoundExceededError(
            f"weak-symmetry search over {n}! permutations exceeds the bound {bound}"
        )
    symmetric = [pi for pi in Permutation.all(n) if is_symmetric_under(game, pi)]
    witnesses = {}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            pi = next((p for p in symmetric if p(a) == b), None)
            if pi is None:
                return None
            witnesses[(a, b)] = pi
    return witnesses


def is_weakly_symmetric(game: Game, bound: int = DEFAULT_PERMUTATION_BOUND) -> bool:
    return weak_symmetry_witnesses(game, bound=bound) is not None
