"""Monte Carlo episode runner with a pinned, reproducible PRNG.

Per step: draw the common signal from W(.|sigma'), then let every player
draw her next action from her table row, in player order.  All draws
invert exact rational CDFs against 53-bit uniforms, precomputed as integer
thresholds ceil(c * 2^53), so the strategy semantics stay exact and only
the uniform source is discrete.

The generator is xoshiro256** seeded through splitmix64; the identifier
travels with every trajectory so outputs stay replayable.  A numba-jitted
kernel runs long episodes; the pure-Python loop below is the reference
and produces bit-identical trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError
from .games import Game
from .rational import as_fraction
from .strategies import MemoryOneStrategy, MonitoringStructure

RNG_ID = "xoshiro256**-splitmix64-53bit-v1"

_MASK64 = (1 << 64) - 1
_U53 = 1 << 53


def _splitmix64_next(state: int):
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def seed_state(seed: int):
    """Expand a 64-bit seed into the four xoshiro256** state words."""
    state = seed & _MASK64
    words = []
    for _ in range(4):
        state, word = _splitmix64_next(state)
        words.append(word)
    return words


class Xoshiro256StarStar:
    """Reference implementation; the jitted kernel mirrors it exactly."""

    def __init__(self, seed: int):
        self.s = seed_state(seed)

    def next64(self) -> int:
        s0, s1, s2, s3 = self.s
        x = (s1 * 5) & _MASK64
        result = (((x << 7) | (x >> 57)) & _MASK64) * 9 & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self.s = [s0, s1, s2, s3]
        return result

    def next53(self) -> int:
        return self.next64() >> 11


def cdf_thresholds(probs) -> list[int]:
    """Integer thresholds ceil(C_j * 2^53) of the exact cumulative law."""
    acc = Fraction(0)
    out = []
    for p in probs:
        acc += Fraction(p)
        out.append(-((-acc.numerator * _U53) // acc.denominator))
    if acc != 1:
        raise InvalidInputError(f"probabilities sum to {acc}, expected 1")
    return out


def _pick(thresholds, u: int) -> int:
    for k, t in enumerate(thresholds):
        if u < t:
            return k
    return len(thresholds) - 1


@dataclass(frozen=True)
class EpisodeConfig:
    steps: int
    seed: int
    initial_state: tuple[int, ...] | None = None
    initial_distributions: tuple[tuple[Fraction, ...], ...] | None = None
    record_every: int = 1000

    def __post_init__(self):
        if self.steps < 1:
            raise InvalidInputError("steps must be >= 1")
        if self.record_every < 1:
            raise InvalidInputError("record_every must be >= 1")
        if self.steps % self.record_every != 0:
            raise InvalidInputError(
                f"record_every = {self.record_every} must divide steps = {self.steps}"
            )
        if (self.initial_state is None) == (self.initial_distributions is None):
            raise InvalidInputError(
                "exactly one of initial_state / initial_distributions is required"
            )
        if self.initial_distributions is not None:
            dists = tuple(
                tuple(as_fraction(x) for x in row) for row in self.initial_distributions
            )
            object.__setattr__(self, "initial_distributions", dists)


def uniform_initial(game: Game) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple(Fraction(1, count) for _ in range(count))
        for count in game.space.action_counts
    )


@dataclass(frozen=True)
class Trajectory:
    """Running-average payoffs at each recorded stride."""

    samples: tuple[tuple[int, tuple[float, ...]], ...]
    final_state: tuple[int, ...]
    seed: int
    rng_id: str = RNG_ID

    @property
    def final_averages(self) -> tuple[float, ...]:
        return self.samples[-1][1]


def _episode_tables(game: Game, strategies, monitoring: MonitoringStructure):
    space = game.space
    by_player = {s.player: s for s in strategies}
    if sorted(by_player) != list(range(1, space.n_players + 1)):
        raise InvalidInputError(f"need one strategy per player 1..{space.n_players}")
    for s in strategies:
        if s.signals != monitoring.signals:
            raise InvalidInputError("strategy and monitoring signal sets differ")
        if s.action_count != space.action_counts[s.player - 1]:
            raise InvalidInputError(f"player {s.player} strategy has wrong action count")
    if monitoring.n_states != space.size:
        raise InvalidInputError("monitoring law does not cover the state space")
    sig_thr = [cdf_thresholds(row) for row in monitoring.law]
    act_thr = []
    for n in range(1, space.n_players + 1):
        strat = by_player[n]
        act_thr.append(
            [
                [cdf_thresholds(strat.row(own, sig)) for sig in range(len(monitoring.signals))]
                for own in range(1, strat.action_count + 1)
            ]
        )
    payoffs = [[float(x) for x in vec] for vec in game.payoffs]
    return sig_thr, act_thr, payoffs


def _python_episode(space, sig_thr, act_thr, payoffs, actions, steps, record_every, rng):
    n_players = space.n_players
    strides = space.strides
    flat = sum((actions[n] - 1) * strides[n] for n in range(n_players))
    sums = [0.0] * n_players
    samples = []
    for t in range(1, steps + 1):
        tau = _pick(sig_thr[flat], rng.next53())
        for n in range(n_players):
            actions[n] = _pick(act_thr[n][actions[n] - 1][tau], rng.next53()) + 1
        flat = sum((actions[n] - 1) * strides[n] for n in range(n_players))
        for n in range(n_players):
            sums[n] += payoffs[n][flat]
        if t % record_every == 0:
            samples.append((t, tuple(s / t for s in sums)))
    return samples, tuple(actions)


_jit_kernel = None


def _get_jit_kernel():
    global _jit_kernel
    if _jit_kernel is None:
        import numpy as np
        from numba import njit

        @njit(cache=False)
        def kernel(state, sig_thr, act_thr, counts, strides, payoffs, actions,
                   steps, record_every, out):
            s0, s1, s2, s3 = state[0], state[1], state[2], state[3]
            n_players = actions.shape[0]
            flat = 0
            for n in range(n_players):
                flat += (actions[n] - 1) * strides[n]
            sums = np.zeros(n_players, dtype=np.float64)
            rec = 0
            for t in range(1, steps + 1):
                # xoshiro256** next, signal draw
                x = s1 * np.uint64(5)
                r = ((x << np.uint64(7)) | (x >> np.uint64(57))) * np.uint64(9)
                tt = s1 << np.uint64(17)
                s2 ^= s0
                s3 ^= s1
                s1 ^= s2
                s0 ^= s3
                s2 ^= tt
                s3 = (s3 << np.uint64(45)) | (s3 >> np.uint64(19))
                u = int(r >> np.uint64(11))
                tau = 0
                for k in range(sig_thr.shape[1]):
                    if u < sig_thr[flat, k]:
                        tau = k
                        break
                for n in range(n_players):
                    x = s1 * np.uint64(5)
                    r = ((x << np.uint64(7)) | (x >> np.uint64(57))) * np.uint64(9)
                    tt = s1 << np.uint64(17)
                    s2 ^= s0
                    s3 ^= s1
                    s1 ^= s2
                    s0 ^= s3
                    s2 ^= tt
                    s3 = (s3 << np.uint64(45)) | (s3 >> np.uint64(19))
                    u = int(r >> np.uint64(11))
                    own = actions[n] - 1
                    pick = counts[n] - 1
                    for k in range(counts[n]):
                        if u < act_thr[n, own, tau, k]:
                            pick = k
                            break
                    actions[n] = pick + 1
                flat = 0
                for n in range(n_players):
                    flat += (actions[n] - 1) * strides[n]
                for n in range(n_players):
                    sums[n] += payoffs[n, flat]
                if t % record_every == 0:
                    for n in range(n_players):
                        out[rec, n] = sums[n] / t
                    rec += 1
            state[0], state[1], state[2], state[3] = s0, s1, s2, s3

        _jit_kernel = kernel
    return _jit_kernel


def _numba_episode(space, sig_thr, act_thr, payoffs, actions, steps, record_every, rng):
    import numpy as np

    n_players = space.n_players
    counts = np.array(space.action_counts, dtype=np.int64)
    max_count = int(counts.max())
    n_signals = len(sig_thr[0])
    sig = np.array(sig_thr, dtype=np.int64)
    act = np.full((n_players, max_count, n_signals, max_count), _U53, dtype=np.int64)
    for n in range(n_players):
        for own in range(counts[n]):
            for tau in range(n_signals):
                act[n, own, tau, : counts[n]] = act_thr[n][own][tau]
    state = np.array(rng.s, dtype=np.uint64)
    acts = np.array(actions, dtype=np.int64)
    out = np.zeros((steps // record_every, n_players), dtype=np.float64)
    kernel = _get_jit_kernel()
    kernel(
        state,
        sig,
        act,
        counts,
        np.array(space.strides, dtype=np.int64),
        np.array(payoffs, dtype=np.float64),
        acts,
        steps,
        record_every,
        out,
    )
    rng.s = [int(x) for x in state]
    samples = [
        ((i + 1) * record_every, tuple(float(v) for v in out[i]))
        for i in range(out.shape[0])
    ]
    return samples, tuple(int(a) for a in acts)


def run_episode(game: Game, strategies, monitoring: MonitoringStructure,
                config: EpisodeConfig, engine: str = "auto") -> Trajectory:
    """Simulate one episode; identical config => bit-identical trajectory."""
    space = game.space
    sig_thr, act_thr, payoffs = _episode_tables(game, strategies, monitoring)
    rng = Xoshiro256StarStar(config.seed)
    if config.initial_state is not None:
        state = tuple(config.initial_state)
        if len(state) != space.n_players:
            raise InvalidInputError("initial state has wrong length")
        space.index(state)  # validates ranges
        actions = list(state)
    else:
        dists = config.initial_distributions
        if len(dists) != space.n_players:
            raise InvalidInputError("need one initial distribution per player")
        actions = []
        for n, dist in enumerate(dists):
            if len(dist) != space.action_counts[n]:
                raise InvalidInputError(f"initial distribution of player {n + 1} has wrong length")
            actions.append(_pick(cdf_thresholds(dist), rng.next53()) + 1)
    if engine == "auto":
        try:
            import numba  # noqa: F401

            engine = "numba"
        except ImportError:
            engine = "python"
    if engine == "numba":
        samples, final_state = _numba_episode(
            space, sig_thr, act_thr, payoffs, actions, config.steps, config.record_every, rng
        )
    elif engine == "python":
        samples, final_state = _python_episode(
            space, sig_thr, act_thr, payoffs, actions, config.steps, config.record_every, rng
        )
    else:
        raise InvalidInputError(f"unknown engine {engine!r}")
    return Trajectory(samples=tuple(samples), final_state=final_state, seed=config.seed)


@dataclass(frozen=True)
class BatchResult:
    trajectories: tuple[Trajectory, ...]
    mean_final: tuple[float, ...]
    stddev_final: tuple[float, ...]


def run_batch(game: Game, strategies, monitoring: MonitoringStructure,
              configs, engine: str = "auto") -> BatchResult:
    """Run independent episodes; results are ordered by config index."""
    configs = list(configs)
    if not configs:
        raise InvalidInputError("run_batch needs at least one config")
    trajectories = tuple(
        run_episode(game, strategies, monitoring, cfg, engine=engine) for cfg in configs
    )
    n_players = game.n_players
    finals = [traj.final_averages for traj in trajectories]
    mean = tuple(sum(f[n] for f in finals) / len(finals) for n in range(n_players))
    stddev = tuple(
        math.sqrt(sum((f[n] - mean[n]) ** 2 for f in finals) / len(finals))
        for n in range(n_players)
    )
    return BatchResult(trajectories=trajectories, mean_final=mean, stddev_final=stddev)


def trajectory_csv(trajectory: Trajectory, n_players: int) -> str:
    """CSV per the format contract: t plus one 12-significant-digit column per player."""
    lines = ["t," + ",".join(f"avg_payoff_{n}" for n in range(1, n_players + 1))]
    for t, avgs in trajectory.samples:
        lines.append(f"{t}," + ",".join(f"{v:.12g}" for v in avgs))
    return "\n".join(lines) + "\n"
