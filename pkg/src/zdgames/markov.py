"""Stationary distributions, expected payoffs, and Akin residuals.

The stationary distribution of the joint chain defines the players'
payoffs.  When the states reachable from the initial distribution contain
exactly one closed communicating class, the stationary distribution is
unique regardless of the initial split, and we solve for it exactly over
the rationals.  With two or more closed classes the limit genuinely
depends on the initial condition, so we return the Cesaro limit from it,
computed by iterating the lazy kernel (I+T)/2 in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from .errors import InvalidInputError, NonConvergenceError
from .games import Game
from .linalg import ONE, ZERO, nullspace
from .strategies import PressDysonMatrix

DEFAULT_MAX_ITERATIONS = 10_000_000
DEFAULT_CESARO_TOL = 1e-14

EXACT_SOLVE = "exact-solve"
CESARO_ITERATION = "cesaro-iteration"


@dataclass(frozen=True)
class StationaryResult:
    rho: tuple
    initial: tuple
    method: str
    residual: object  # Fraction 0 for exact solves, float sup-norm otherwise
    iterations: int | None = None
    expected_payoffs: tuple | None = None

    def with_payoffs(self, game: Game) -> "StationaryResult":
        return StationaryResult(
            rho=self.rho,
            initial=self.initial,
            method=self.method,
            residual=self.residual,
            iterations=self.iterations,
            expected_payoffs=expected_payoffs(self.rho, game),
        )


def _validate_transition(transition):
    m = len(transition)
    for row in transition:
        if len(row) != m:
            raise InvalidInputError("transition matrix must be square")
    for j in range(m):
        total = ZERO
        for i in range(m):
            x = transition[i][j]
            if x < 0:
                raise InvalidInputError(f"negative transition probability at ({i},{j})")
            total += x
        if total != 1:
            raise InvalidInputError(f"column {j} sums to {total}, expected exactly 1")


def _validate_distribution(vec, m):
    if len(vec) != m:
        raise InvalidInputError("initial distribution has wrong length")
    total = ZERO
    for x in vec:
        if x < 0:
            raise InvalidInputError("initial distribution has a negative entry")
        total += x
    if total != 1:
        raise InvalidInputError(f"initial distribution sums to {total}, expected exactly 1")


def _closed_classes(transition, reachable):
    """Closed communicating classes of the chain restricted to ``reachable``."""
    graph = nx.DiGraph()
    graph.add_nodes_from(reachable)
    for j in reachable:
        for i in reachable:
            if transition[i][j] != 0:
                graph.add_edge(j, i)
    closed = []
    for comp in nx.strongly_connected_components(graph):
        if all(transition[i][j] == 0 for j in comp for i in reachable if i not in comp):
            closed.append(sorted(comp))
    return closed


def _reachable_from(transition, support):
    m = len(transition)
    seen = set(support)
    frontier = list(support)
    while frontier:
        j = frontier.pop()
        for i in range(m):
            if transition[i][j] != 0 and i not in seen:
                seen.add(i)
                frontier.append(i)
    return sorted(seen)


def _solve_unique_class(transition, cls, m):
    """Exact stationary vector of the chain restricted to one closed class."""
    k = len(cls)
    # (T_C - I) rho = 0 on the class; nullspace is one-dimensional.
    sub = [[transition[cls[i]][cls[j]] - (ONE if i == j else ZERO) for j in range(k)] for i in range(k)]
    basis = nullspace(sub)
    if len(basis) != 1:
        raise InvalidInputError("closed class does not admit a unique stationary vector")
    vec = basis[0]
    total = sum(vec, ZERO)
    rho = [ZERO] * m
    for idx, j in enumerate(cls):
        rho[j] = vec[idx] / total
    return rho


def stationary_distribution(
    transition,
    initial,
    method: str = "auto",
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    tol: float = DEFAULT_CESARO_TOL,
) -> StationaryResult:
    """Stationary distribution of a column-stochastic chain from ``initial``.

    ``method`` is "auto", "exact", or "cesaro".  Auto solves exactly
    whenever the reachable part of the chain has a single closed class
    (which covers every irreducible chain) and falls back to Cesaro
    iteration otherwise.
    """
    _validate_transition(transition)
    m = len(transition)
    initial = tuple(initial)
    _validate_distribution(initial, m)

    if method not in ("auto", "exact", "cesaro"):
        raise InvalidInputError(f"unknown method {method!r}")

    if method != "cesaro":
        support = [j for j in range(m) if initial[j] != 0]
        reachable = _reachable_from(transition, support)
        closed = _closed_classes(transition, reachable)
        if len(closed) == 1:
            rho = _solve_unique_class(transition, closed[0], m)
            return StationaryResult(
                rho=tuple(rho), initial=initial, method=EXACT_SOLVE, residual=ZERO
            )
        if method == "exact":
            raise InvalidInputError(
                f"{len(closed)} closed classes reachable from the initial support; "
                "the exact method needs a unique one"
            )

    t_float = np.array([[float(x) for x in row] for row in transition], dtype=float)
    lazy = 0.5 * (np.eye(m) + t_float)
    x = np.array([float(v) for v in initial], dtype=float)
    iterations = 0
    diff = float("inf")
    while diff > tol:
        if iterations >= max_iterations:
            raise NonConvergenceError(
                f"Cesaro iteration did not converge within {max_iterations} steps",
                residual=diff,
                iterations=iterations,
            )
        x_next = lazy @ x
        x_next /= x_next.sum()
        diff = float(np.max(np.abs(x_next - x)))
        x = x_next
        iterations += 1
    residual = float(np.max(np.abs(t_float @ x - x)))
    return StationaryResult(
        rho=tuple(float(v) for v in x),
        initial=initial,
        method=CESARO_ITERATION,
        residual=residual,
        iterations=iterations,
    )


def expected_payoffs(rho, game: Game):
    """The vector (1, e_1, ..., e_N) with e_n the stationary payoff of player n.

    Component 0 is 1 by the normalization of ``rho``; the remaining
    components are plain dot products, exact when ``rho`` is exact.
    """
    m = game.space.size
    if len(rho) != m:
        raise InvalidInputError("distribution length does not match the game")
    exact = all(isinstance(x, (Fraction, int)) for x in rho)
    one = ONE if exact else 1.0
    values = [one]
    for n in range(game.n_players):
        payoff = game.payoffs[n]
        if exact:
            values.append(sum((rho[i] * payoff[i] for i in range(m)), ZERO))
        else:
            values.append(float(sum(rho[i] * float(payoff[i]) for i in range(m))))
    return tuple(values)


def akin_residuals(rho, pd: PressDysonMatrix):
    """rho^T tilde-T_n(a) for each action a of the player.

    Exactly zero whenever ``rho`` is an exact stationary distribution of a
    chain in which the player uses this strategy.
    """
    m = len(pd.columns[0])
    if len(rho) != m:
        raise InvalidInputError("distribution length does not match the strategy vectors")
    exact = all(isinstance(x, (Fraction, int)) for x in rho)
    out = []
    for col in pd.columns:
        if exact:
            out.append(sum((rho[i] * col[i] for i in range(m)), ZERO))
        else:
            out.append(float(sum(rho[i] * float(col[i]) for i in range(m))))
    return tuple(out)
