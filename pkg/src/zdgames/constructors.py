"""Closed-form constructors for the exhibited ZD strategies.

Each constructor builds the exact strategy table, the monitoring structure
it lives under, and a certificate stating the enforced payoff relations
with explicit witness coefficients.  Certificates are then re-verified
against the detector, so a transcription slip in a closed form cannot
survive construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .analysis import LinearRelation, ZdCertificate, canonical_relation_rows, detect_zd
from .errors import (
    DegenerateControllerError,
    DegeneratePayoffError,
    InfeasibleParametersError,
    InvalidInputError,
    SingularMonitoringError,
)
from .games import Game, make_game
from .linalg import ONE, ZERO, matvec, nullspace, row_space_basis
from .rational import as_fraction
from .strategies import (
    MemoryOneStrategy,
    MonitoringStructure,
    make_monitoring,
    marginal_transition,
    perfect_monitoring,
    press_dyson,
    strategy_from_marginal_rows,
)

FAMILIES = (
    "tft",
    "equalizer-imperfect",
    "controller",
    "controller-imperfect",
    "zero-sum-controller",
)


@dataclass(frozen=True)
class EqualizerParams:
    """Coefficients of the strategy vector beta*s_2 + gamma*1."""

    beta: Fraction
    gamma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "beta", as_fraction(self.beta))
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        if self.beta == 0:
            raise InvalidInputError("equalizer needs beta != 0")

    @property
    def target(self) -> Fraction:
        """The enforced opponent payoff -gamma/beta."""
        return -self.gamma / self.beta


@dataclass(frozen=True)
class ControllerParams:
    """The four transition parameters of the three-action controller."""

    p: Fraction
    q: Fraction
    p_prime: Fraction
    q_prime: Fraction

    def __post_init__(self):
        for name in ("p", "q", "p_prime", "q_prime"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        violations = []
        for name in ("p", "q", "p_prime", "q_prime"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                violations.append(f"{name} = {value} outside [0, 1]")
        if self.q > self.p:
            violations.append(f"q = {self.q} exceeds p = {self.p}")
        if self.p_prime > self.q_prime:
            violations.append(f"p_prime = {self.p_prime} exceeds q_prime = {self.q_prime}")
        if violations:
            raise InfeasibleParametersError(
                "controller parameters out of range: " + "; ".join(violations), violations
            )
        if self.p_prime * self.q == self.p * self.q_prime:
            raise DegenerateControllerError(
                f"p'q = pq' = {self.p * self.q_prime}: strategy span collapses"
            )

    @property
    def determinant(self) -> Fraction:
        return self.p_prime * self.q - self.p * self.q_prime

    def check_bound(self, w: Fraction):
        violations = [
            f"{name} = {value} exceeds the monitoring bound w = {w}"
            for name, value in (
                ("p", self.p),
                ("q", self.q),
                ("p_prime", self.p_prime),
                ("q_prime", self.q_prime),
            )
            if value > w
        ]
        if violations:
            raise InfeasibleParametersError(
                "parameters must lie in [0, w]: " + "; ".join(violations), violations
            )


@dataclass(frozen=True)
class ConstructedStrategy:
    """Bundle returned by every constructor."""

    family: str
    game: Game
    monitoring: MonitoringStructure
    strategy: MemoryOneStrategy
    certificate: ZdCertificate
    params: dict

    @property
    def equations(self):
        return [rel.equation() for rel in self.certificate.relations]


def _payoff_kernel(game: Game):
    return tuple(
        tuple(v) for v in row_space_basis(nullspace(game.payoff_matrix(), n_cols=game.n_players + 1))
    )


def _reverify(bundle: ConstructedStrategy):
    """Double-entry check: closed-form certificate vs the exact detector."""
    pd = press_dyson(
        marginal_transition(bundle.strategy, bundle.monitoring, bundle.game.space),
        bundle.game.space,
        bundle.strategy.player,
    )
    t_matrix = pd.matrix()
    s_matrix = bundle.game.payoff_matrix()
    cert = bundle.certificate
    for relation, u, c in zip(cert.relations, cert.basis, cert.witnesses):
        if matvec(s_matrix, list(relation.alpha)) != list(u):
            raise RuntimeError(f"{bundle.family}: basis vector does not match S*alpha")
        if matvec(t_matrix, list(c)) != list(u):
            raise RuntimeError(f"{bundle.family}: witness fails T_n*c = S*alpha")
    detected = detect_zd(pd, bundle.game)
    if detected is None or detected.dimension != cert.dimension:
        raise RuntimeError(f"{bundle.family}: detector disagrees with the certificate dimension")
    if row_space_basis([list(u) for u in cert.basis]) != row_space_basis(
        [list(u) for u in detected.basis]
    ):
        raise RuntimeError(f"{bundle.family}: certified subspace differs from the detected one")
    claimed = canonical_relation_rows(
        [list(r.alpha) for r in cert.relations], [list(k) for k in cert.kernel_relations]
    )
    found = canonical_relation_rows(
        [list(r.alpha) for r in detected.relations], [list(k) for k in detected.kernel_relations]
    )
    if claimed != found:
        raise RuntimeError(f"{bundle.family}: enforced relations differ from the detected ones")
    return bundle


def _require_symmetric_2x2(game: Game, family: str):
    if game.space.action_counts != (2, 2):
        raise InvalidInputError(f"{family} needs a 2-player, 2-action game")
    s1, s2 = game.payoffs
    if s2 != (s1[0], s1[2], s1[1], s1[3]):
        raise InvalidInputError(
            f"{family} needs the symmetric layout s2 = (R, T, S, P) matching s1 = (R, S, T, P)"
        )
    return s1  # (R, S, T, P)


def make_tit_for_tat(game: Game) -> ConstructedStrategy:
    """Player 1 repeats the opponent's previous action; enforces e1 = e2."""
    r, s, t, p = _require_symmetric_2x2(game, "tit-for-tat")
    if t == s:
        raise DegeneratePayoffError("tit-for-tat certificate divides by T - S, but T = S")
    monitoring = perfect_monitoring(game.space)
    rows = [
        [ONE, ZERO, ONE, ZERO],  # play 1 iff the opponent played 1
        [ZERO, ONE, ZERO, ONE],
    ]
    strategy = strategy_from_marginal_rows(1, game.space, rows)
    coeff = ONE / (t - s)
    relation = LinearRelation((ZERO, coeff, -coeff))
    basis = (ZERO, -ONE, ONE, ZERO)
    certificate = ZdCertificate(
        player=1,
        dimension=1,
        relations=(relation,),
        basis=(basis,),
        witnesses=((ONE, ZERO),),
        kernel_relations=_payoff_kernel(game),
    )
    bundle = ConstructedStrategy(
        family="tft",
        game=game,
        monitoring=monitoring,
        strategy=strategy,
        certificate=certificate,
        params={"payoffs": (r, s, t, p)},
    )
    return _reverify(bundle)


def winner_monitoring_2x2(w: Fraction) -> MonitoringStructure:
    """Two-signal law (1/2, w, 1-w, 1/2) for signal 1 over the 2x2 states."""
    w = as_fraction(w)
    if not 0 <= w <= 1:
        raise InvalidInputError(f"w = {w} is not a probability")
    half = Fraction(1, 2)
    rows = [(half, half), (w, 1 - w), (1 - w, w), (half, half)]
    return make_monitoring(("1", "2"), rows)


def make_equalizer_imperfect(game: Game, w, params: EqualizerParams) -> ConstructedStrategy:
    """Two-action equalizer under winner monitoring: fixes e2 = -gamma/beta.

    The table inverts the signal law, which is singular at w = 1/2.
    """
    r, s, t, p = _require_symmetric_2x2(game, "equalizer-imperfect")
    w = as_fraction(w)
    monitoring = winner_monitoring_2x2(w)
    if w == Fraction(1, 2):
        raise SingularMonitoringError("w = 1/2 makes every signal uninformative")
    beta, gamma = params.beta, params.gamma
    denom = 1 - 2 * w
    entries = {
        "T^(1|1,1)": (2 * (1 - w) * r - t) / denom * beta + gamma + 1,
        "T^(1|1,2)": (t - 2 * w * r) / denom * beta + gamma + 1,
        "T^(1|2,1)": (s - 2 * w * p) / denom * beta + gamma,
        "T^(1|2,2)": (2 * (1 - w) * p - s) / denom * beta + gamma,
    }
    violations = [
        f"{name} = {value} outside [0, 1]" for name, value in entries.items() if not 0 <= value <= 1
    ]
    if violations:
        raise InfeasibleParametersError(
            "equalizer table infeasible: " + "; ".join(violations), violations
        )
    a, b, c, d = entries.values()
    table = (
        ((a, 1 - a), (b, 1 - b)),
        ((c, 1 - c), (d, 1 - d)),
    )
    strategy = MemoryOneStrategy(1, 2, monitoring.signals, table)
    s2 = game.payoffs[1]
    basis = tuple(beta * x + gamma for x in s2)
    certificate = ZdCertificate(
        player=1,
        dimension=1,
        relations=(LinearRelation((gamma, ZERO, beta)),),
        basis=(basis,),
        witnesses=((ONE, ZERO),),
        kernel_relations=_payoff_kernel(game),
    )
    bundle = ConstructedStrategy(
        family="equalizer-imperfect",
        game=game,
        monitoring=monitoring,
        strategy=strategy,
        certificate=certificate,
        params={"w": w, "beta": beta, "gamma": gamma, "target": params.target},
    )
    return _reverify(bundle)


def controller_game(r1: Fraction, r2: Fraction) -> Game:
    """The 3x3 symmetric game with payoffs r1, r2 at (1,2) and (2,1)."""
    z = ZERO
    s1 = (z, r1, z, r2, z, z, z, z, z)
    s2 = (z, r2, z, r1, z, z, z, z, z)
    return make_game((3, 3), [s1, s2])


def controller_marginal_rows(params: ControllerParams):
    p, q, pp, qp = params.p, params.q, params.p_prime, params.q_prime
    z = ZERO
    return [
        [ONE, 1 - p, ONE, pp, z, z, z, z, z],
        [z, q, z, 1 - qp, ONE, ONE, z, z, z],
        [z, p - q, z, qp - pp, z, z, ONE, ONE, ONE],
    ]


def _controller_certificate(game: Game, r1, r2, params: ControllerParams) -> ZdCertificate:
    d = params.determinant
    s1, s2 = game.payoffs
    c1 = ((params.q_prime * r1 + params.q * r2) / d, (params.p_prime * r1 + params.p * r2) / d, ZERO)
    c2 = ((params.q_prime * r2 + params.q * r1) / d, (params.p_prime * r2 + params.p * r1) / d, ZERO)
    return ZdCertificate(
        player=1,
        dimension=2,
        relations=(LinearRelation((ZERO, ONE, ZERO)), LinearRelation((ZERO, ZERO, ONE))),
        basis=(tuple(s1), tuple(s2)),
        witnesses=(c1, c2),
        kernel_relations=_payoff_kernel(game),
    )


def make_simultaneous_controller(r1, r2, params: ControllerParams) -> ConstructedStrategy:
    """Perfect-monitoring 3x3 controller enforcing e1 = 0 and e2 = 0 at once."""
    r1, r2 = as_fraction(r1), as_fraction(r2)
    if r1 == r2 or r1 == -r2:
        raise DegeneratePayoffError(
            f"r1 = {r1}, r2 = {r2}: payoff vectors and the ones vector become dependent"
        )
    game = controller_game(r1, r2)
    strategy = strategy_from_marginal_rows(1, game.space, controller_marginal_rows(params))
    bundle = ConstructedStrategy(
        family="controller",
        game=game,
        monitoring=perfect_monitoring(game.space),
        strategy=strategy,
        certificate=_controller_certificate(game, r1, r2, params),
        params={"r1": r1, "r2": r2, "p": params.p, "q": params.q,
                "p_prime": params.p_prime, "q_prime": params.q_prime},
    )
    return _reverify(bundle)


def nonzero_payoff_monitoring_3x3(w: Fraction) -> MonitoringStructure:
    """Signal "y" with probability w exactly at the two paying states."""
    w = as_fraction(w)
    if not 0 < w <= 1:
        raise InvalidInputError(f"w = {w} must lie in (0, 1]")
    rows = []
    for idx in range(9):
        wy = w if idx in (1, 3) else ZERO  # states (1,2) and (2,1)
        rows.append((wy, 1 - wy))
    return make_monitoring(("y", "n"), rows)


def make_simultaneous_controller_imperfect(r1, r2, w, params: ControllerParams) -> ConstructedStrategy:
    """Signal-conditioned controller whose marginals match the perfect one.

    Players only see whether the last round paid out; the parameter box
    shrinks to [0, w].
    """
    r1, r2 = as_fraction(r1), as_fraction(r2)
    if r1 == r2 or r1 == -r2:
        raise DegeneratePayoffError(
            f"r1 = {r1}, r2 = {r2}: payoff vectors and the ones vector become dependent"
        )
    w = as_fraction(w)
    monitoring = nonzero_payoff_monitoring_3x3(w)
    params.check_bound(w)
    p, q, pp, qp = params.p, params.q, params.p_prime, params.q_prime
    z, one = ZERO, ONE
    # table[own-1][signal y, n][action]
    table = (
        (((w - p) / w, q / w, (p - q) / w), (one, z, z)),
        ((pp / w, (w - qp) / w, (qp - pp) / w), (z, one, z)),
        ((z, z, one), (z, z, one)),
    )
    strategy = MemoryOneStrategy(1, 3, monitoring.signals, table)
    game = controller_game(r1, r2)
    bundle = ConstructedStrategy(
        family="controller-imperfect",
        game=game,
        monitoring=monitoring,
        strategy=strategy,
        certificate=_controller_certificate(game, r1, r2, params),
        params={"r1": r1, "r2": r2, "w": w, "p": p, "q": q, "p_prime": pp, "q_prime": qp},
    )
    return _reverify(bundle)


def make_zero_sum_controller(r, params: ControllerParams) -> ConstructedStrategy:
    """Zero-sum 3x3 variant pinning e1 = 0 (and hence e2 = -e1 = 0)."""
    r = as_fraction(r)
    if r == 0:
        raise DegeneratePayoffError("r = 0 collapses the payoff vectors to zero")
    z = ZERO
    s1 = (z, r, z, -r, z, z, z, z, z)
    s2 = tuple(-x for x in s1)
    game = make_game((3, 3), [s1, s2])
    strategy = strategy_from_marginal_rows(1, game.space, controller_marginal_rows(params))
    d = params.determinant
    witness = (r * (params.q_prime - params.q) / d, r * (params.p_prime - params.p) / d, ZERO)
    certificate = ZdCertificate(
        player=1,
        dimension=1,
        relations=(LinearRelation((ZERO, ONE, ZERO)),),
        basis=(tuple(s1),),
        witnesses=(witness,),
        kernel_relations=_payoff_kernel(game),
    )
    bundle = ConstructedStrategy(
        family="zero-sum-controller",
        game=game,
        monitoring=perfect_monitoring(game.space),
        strategy=strategy,
        certificate=certificate,
        params={"r": r, "p": params.p, "q": params.q,
                "p_prime": params.p_prime, "q_prime": params.q_prime},
    )
    return _reverify(bundle)
