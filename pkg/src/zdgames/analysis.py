"""Zero-determinant strategy detection and the algebra of enforced relations.

A memory-one strategy is zero-determinant when the span of its strategy
vectors meets the span of (ones, payoff vectors) nontrivially.  Each
vector in that intersection enforces one linear relation on the players'
stationary payoffs.  This module finds the intersection exactly, solves
the enforced relation systems, decides independence, and runs the sign
check and existence search for candidate relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInputError, ResourceLimitError
from .games import Game, StateSpace, weak_symmetry_witnesses
from .linalg import (
    ONE,
    ZERO,
    eliminate_rows,
    hstack,
    is_zero_vector,
    matvec,
    nullspace,
    rank,
    row_space_basis,
    rref_last_pivot,
    solve,
)
from .lp import feasible_point
from .strategies import (
    MemoryOneStrategy,
    MonitoringStructure,
    PressDysonMatrix,
    marginal_transition,
    press_dyson,
)


@dataclass(frozen=True)
class LinearRelation:
    """Coefficients (a_0, a_1, ..., a_N) of the payoff relation e^T a = 0,
    i.e. a_1 e_1 + ... + a_N e_N = -a_0."""

    alpha: tuple[Fraction, ...]

    def __post_init__(self):
        if all(x == 0 for x in self.alpha):
            raise InvalidInputError("a linear relation must have a nonzero coefficient")

    @property
    def n_players(self) -> int:
        return len(self.alpha) - 1

    def normalized(self) -> "LinearRelation":
        lead = next(x for x in self.alpha if x != 0)
        return LinearRelation(tuple(x / lead for x in self.alpha))

    def equation(self) -> str:
        # Relations are projective; display with the first payoff
        # coefficient scaled to 1 so an equalizer reads "e2 = 11/4".
        lead = next((x for x in self.alpha[1:] if x != 0), None)
        alpha = self.alpha if lead is None else tuple(x / lead for x in self.alpha)
        terms = []
        for n in range(1, len(alpha)):
            c = alpha[n]
            if c == 0:
                continue
            if not terms:
                prefix = "-" if c < 0 else ""
            else:
                prefix = " - " if c < 0 else " + "
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag}*"
            terms.append(f"{prefix}{coef}e{n}")
        lhs = "".join(terms) if terms else "0"
        return f"{lhs} = {-alpha[0]}"


@dataclass(frozen=True)
class ZdCertificate:
    """Witnessed basis of V_n = span T_n  intersect  span S for one player.

    Each basis vector u_k = S alpha_k comes with coefficients c_k on the
    strategy vectors such that T_n c_k = u_k.  When the payoff matrix has
    dependent columns the relations are only determined modulo its kernel;
    ``kernel_relations`` carries a kernel basis and flags that.
    """

    player: int
    dimension: int
    relations: tuple[LinearRelation, ...]
    basis: tuple[tuple[Fraction, ...], ...]
    witnesses: tuple[tuple[Fraction, ...], ...]
    kernel_relations: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidInputError("a certificate needs dimension >= 1")
        if not (len(self.relations) == len(self.basis) == len(self.witnesses) == self.dimension):
            raise InvalidInputError("certificate fields disagree on the dimension")
        if rank([list(u) for u in self.basis]) != self.dimension:
            raise InvalidInputError("certificate basis vectors are not independent")

    @property
    def relations_nonunique(self) -> bool:
        return bool(self.kernel_relations)


def _relation_space(pd: PressDysonMatrix, game: Game):
    """All alpha with S alpha in span T_n, as a canonical row basis,
    together with a canonical basis of ker S."""
    s_matrix = game.payoff_matrix()
    t_matrix = pd.matrix()
    n_cols_t = pd.action_count
    joint = hstack(t_matrix, [[-x for x in row] for row in s_matrix])
    null = nullspace(joint, n_cols=n_cols_t + game.n_players + 1)
    alpha_rows = [v[n_cols_t:] for v in null]
    alpha_basis = row_space_basis(alpha_rows) if alpha_rows else []
    kernel = row_space_basis(nullspace(s_matrix, n_cols=game.n_players + 1))
    return alpha_basis, kernel


def canonical_relation_rows(alpha_rows, kernel_rows):
    """Canonical relation representatives modulo the payoff-matrix kernel.

    Kernel pivots are taken at the highest coordinate so the surviving
    representatives concentrate on low-index payoff coefficients (a
    zero-sum certificate reads "e1 = 0" rather than "e2 = 0").
    """
    if not alpha_rows:
        return []
    if kernel_rows:
        k_reduced, k_pivots = rref_last_pivot([list(r) for r in kernel_rows])
        reduced = eliminate_rows([list(r) for r in alpha_rows], k_reduced, k_pivots)
    else:
        reduced = [list(r) for r in alpha_rows]
    return row_space_basis(reduced)


def detect_zd(pd: PressDysonMatrix, game: Game) -> ZdCertificate | None:
    """Certificate of dim V_n >= 1, or None when the strategy is not ZD."""
    if len(pd.columns[0]) != game.space.size:
        raise InvalidInputError("strategy vectors and game have different state counts")
    alpha_basis, kernel = _relation_space(pd, game)
    relation_rows = canonical_relation_rows(alpha_basis, kernel)
    dimension = len(relation_rows)
    if dimension == 0:
        return None
    s_matrix = game.payoff_matrix()
    t_matrix = pd.matrix()
    relations = []
    basis = []
    witnesses = []
    for row in relation_rows:
        u = matvec(s_matrix, row)
        c = solve(t_matrix, u)
        if c is None or is_zero_vector(u):
            raise InvalidInputError("internal inconsistency extracting a witness")
        relations.append(LinearRelation(tuple(row)))
        basis.append(tuple(u))
        witnesses.append(tuple(c))
    return ZdCertificate(
        player=pd.player,
        dimension=dimension,
        relations=tuple(relations),
        basis=tuple(basis),
        witnesses=tuple(witnesses),
        kernel_relations=tuple(tuple(r) for r in kernel),
    )


def detect_zd_for(
    strategy: MemoryOneStrategy,
    monitoring: MonitoringStructure,
    space: StateSpace,
    game: Game,
):
    """Convenience: table -> marginal -> strategy vectors -> detection."""
    pd = press_dyson(marginal_transition(strategy, monitoring, space), space, strategy.player)
    return pd, detect_zd(pd, game)


@dataclass(frozen=True)
class ConsistencySystem:
    """The relation system in the layout b^T over A-bar, plus its solution set.

    ``particular``/``basis`` describe the affine set of payoff vectors
    e-bar = (e_1..e_N) satisfying every relation; ``particular`` is None
    exactly when the system has no solution.
    """

    relations: tuple[LinearRelation, ...]
    n_players: int
    rank_full: int
    rank_reduced: int
    particular: tuple[Fraction, ...] | None
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def is_consistent(self) -> bool:
        return self.particular is not None

    @property
    def solution_dimension(self) -> int | None:
        return len(self.basis) if self.is_consistent else None


def consistency_check(relations, n_players: int | None = None) -> ConsistencySystem:
    """Solve the stacked payoff relations; emptiness is a result, not an error."""
    relations = tuple(
        r if isinstance(r, LinearRelation) else LinearRelation(tuple(r)) for r in relations
    )
    if n_players is None:
        if not relations:
            raise InvalidInputError("n_players is required for an empty relation list")
        n_players = relations[0].n_players
    if any(r.n_players != n_players for r in relations):
        raise InvalidInputError("relations disagree on the player count")
    if not relations:
        return ConsistencySystem(
            relations=(),
            n_players=n_players,
            rank_full=0,
            rank_reduced=0,
            particular=tuple([ZERO] * n_players),
            basis=tuple(
                tuple(ONE if j == i else ZERO for j in range(n_players))
                for i in range(n_players)
            ),
        )
    # Columns of A are the relation vectors: top row b, remainder A-bar.
    k = len(relations)
    a_rows = [[relations[j].alpha[i] for j in range(k)] for i in range(n_players + 1)]
    b = a_rows[0]
    abar_rows = a_rows[1:]
    rank_full = rank(a_rows)
    rank_reduced = rank(abar_rows)
    # e-bar^T A-bar + b^T = 0  <=>  A-bar^T e-bar = -b.
    abar_t = [[abar_rows[i][j] for i in range(n_players)] for j in range(k)]
    particular = solve(abar_t, [-x for x in b])
    basis = nullspace(abar_t, n_cols=n_players) if particular is not None else []
    return ConsistencySystem(
        relations=relations,
        n_players=n_players,
        rank_full=rank_full,
        rank_reduced=rank_reduced,
        particular=tuple(particular) if particular is not None else None,
        basis=tuple(tuple(v) for v in basis),
    )


@dataclass(frozen=True)
class IndependenceResult:
    status: str  # "independent" | "dependent"
    # For a dependent set: one nonzero v_n per contributing player with
    # sum_n v_n = 0, plus the kernel coefficients over the stacked bases.
    witness: tuple[tuple[int, tuple[Fraction, ...]], ...] = ()
    combination: tuple[Fraction, ...] = ()

    @property
    def independent(self) -> bool:
        return self.status == "independent"


def independence_check(certificates) -> IndependenceResult:
    """Exact direct-sum test over the certified subspaces.

    A selection of one nonzero vector per V_n can be dependent iff the sum
    of the subspaces has dimension below the sum of their dimensions, so a
    single stacked rank decides every case.
    """
    certs = list(certificates)
    players = [c.player for c in certs]
    if len(set(players)) != len(players):
        raise InvalidInputError("certificates must belong to distinct players")
    if not certs:
        raise InvalidInputError("need at least one certificate")
    columns = []
    owners = []
    for cert in certs:
        for u in cert.basis:
            columns.append(list(u))
            owners.append(cert.player)
    total = len(columns)
    m = len(columns[0])
    if any(len(col) != m for col in columns):
        raise InvalidInputError("certificates live in different state spaces")
    stacked = [[columns[j][i] for j in range(total)] for i in range(m)]
    if rank(stacked) == total:
        return IndependenceResult(status="independent")
    kappa = nullspace(stacked, n_cols=total)[0]
    witness = []
    for cert in certs:
        combo = [ZERO] * m
        for j in range(total):
            if owners[j] == cert.player and kappa[j] != 0:
                offset = [kappa[j] * x for x in columns[j]]
                combo = [a + b for a, b in zip(combo, offset)]
        if not is_zero_vector(combo):
            witness.append((cert.player, tuple(combo)))
    return IndependenceResult(
        status="dependent", witness=tuple(witness), combination=tuple(kappa)
    )


def combined_span_dimension(certificates) -> int:
    """dim of the sum of the certified subspaces (at most N when consistent)."""
    columns = [list(u) for c in certificates for u in c.basis]
    if not columns:
        return 0
    m = len(columns[0])
    return rank([[col[i] for col in columns] for i in range(m)])


def check_nonzero_pd(pd: PressDysonMatrix) -> bool:
    """True iff every entry of every strategy vector is nonzero."""
    return all(x != 0 for col in pd.columns for x in col)


@dataclass(frozen=True)
class SignViolation:
    max_action: int
    min_action: int
    state: tuple[int, ...]
    value: Fraction
    side: str  # "max" (needed <= 0) or "min" (needed >= 0)


@dataclass(frozen=True)
class SignFeasibility:
    feasible: bool
    pair: tuple[int, int] | None = None
    violations: tuple[SignViolation, ...] = ()


def sign_feasibility(target, player: int, space: StateSpace) -> SignFeasibility:
    """Necessary sign condition for ``target`` to lie in span T_n.

    Membership forces two distinct actions a != b with target <= 0 on every
    state where the player plays a and target >= 0 where she plays b.  The
    zero vector passes vacuously (it is excluded upstream as a witness).
    """
    if len(target) != space.size:
        raise InvalidInputError("target vector length does not match the state space")
    if is_zero_vector(target):
        return SignFeasibility(feasible=True, pair=None)
    count = space.action_counts[player - 1]
    blocks = {a: space.indices_with(player, a) for a in range(1, count + 1)}
    violations = []
    for a, b in itertools.permutations(range(1, count + 1), 2):
        bad = None
        for i in blocks[a]:
            if target[i] > 0:
                bad = SignViolation(a, b, space.decode(i), target[i], "max")
                break
        if bad is None:
            for i in blocks[b]:
                if target[i] < 0:
                    bad = SignViolation(a, b, space.decode(i), target[i], "min")
                    break
        if bad is None:
            return SignFeasibility(feasible=True, pair=(a, b))
        violations.append(bad)
    return SignFeasibility(feasible=False, violations=tuple(violations))


def unit_difference_directions(action_count: int):
    """All e_i - e_j coefficient directions over the player's actions."""
    out = []
    for i, j in itertools.permutations(range(action_count), 2):
        c = [ZERO] * action_count
        c[i] = ONE
        c[j] = -ONE
        out.append(tuple(c))
    return out


def alpha_grid(
    n_players: int,
    *,
    max_numerator: int = 1,
    denominator: int = 1,
    zero_intercept: bool = False,
    max_candidates: int = 20_000,
):
    """Projectively deduplicated grid of candidate relation vectors."""
    values = [Fraction(p, denominator) for p in range(-max_numerator, max_numerator + 1)]
    intercepts = [ZERO] if zero_intercept else values
    seen = set()
    out = []
    for head in intercepts:
        for tail in itertools.product(values, repeat=n_players):
            alpha = (head,) + tail
            if all(x == 0 for x in alpha):
                continue
            lead = next(x for x in alpha if x != 0)
            canon = tuple(x / lead for x in alpha)
            if canon in seen:
                continue
            seen.add(canon)
            out.append(canon)
            if len(out) > max_candidates:
                raise ResourceLimitError(
                    f"alpha grid exceeds {max_candidates} candidates; shrink it"
                )
    return out


def equalizer_family(n_players: int, targets):
    """Relations e_k = target for every co-player index and target value."""
    out = []
    for k in range(1, n_players + 1):
        for target in targets:
            alpha = [ZERO] * (n_players + 1)
            alpha[0] = -Fraction(target)
            alpha[k] = ONE
            out.append(tuple(alpha))
    return out


@dataclass(frozen=True)
class PrunedCandidate:
    alpha: tuple[Fraction, ...]
    violations: tuple[SignViolation, ...]


@dataclass(frozen=True)
class SearchResult:
    status: str  # "found" | "pruned-nonexistence" | "inconclusive"
    player: int
    strategy: MemoryOneStrategy | None = None
    certificate: ZdCertificate | None = None
    alpha: tuple[Fraction, ...] | None = None
    pruned: tuple[PrunedCandidate, ...] = ()
    candidates_examined: int = 0
    vacuous_skipped: int = 0


def _strategy_feasibility_lp(game, monitoring, space, player, direction, target):
    """Exact LP for a table with T_n c = t * target, t >= 1, rows stochastic."""
    count = space.action_counts[player - 1]
    n_signals = len(monitoring.signals)
    m = space.size

    def var(own, sig, act):  # all zero-based
        return (own * n_signals + sig) * count + act

    n_vars = count * n_signals * count + 1  # + scale slack u, t = 1 + u
    u_var = n_vars - 1
    rows = []
    rhs = []
    for own in range(count):
        for sig in range(n_signals):
            row = [ZERO] * n_vars
            for act in range(count):
                row[var(own, sig, act)] = ONE
            rows.append(row)
            rhs.append(ONE)
    for j in range(m):
        own = space.decode(j)[player - 1] - 1
        row = [ZERO] * n_vars
        for sig, w in enumerate(monitoring.law[j]):
            if w == 0:
                continue
            for act in range(count):
                if direction[act] != 0:
                    row[var(own, sig, act)] += w * direction[act]
        row[u_var] = -target[j]
        rows.append(row)
        rhs.append(direction[own] + target[j])
    x = feasible_point(rows, rhs)
    if x is None:
        return None
    table = tuple(
        tuple(
            tuple(x[var(own, sig, act)] for act in range(count))
            for sig in range(n_signals)
        )
        for own in range(count)
    )
    return MemoryOneStrategy(player, count, monitoring.signals, table)


def existence_search(
    game: Game,
    monitoring: MonitoringStructure,
    player: int,
    alpha_family,
    *,
    directions=None,
    max_candidates: int = 20_000,
) -> SearchResult:
    """Search a finite relation family for a ZD strategy of ``player``.

    Sound but not complete: "pruned-nonexistence" certifies that every
    candidate relation fails the necessary sign condition, while finding
    nothing after passing it somewhere is only "inconclusive" (the joint
    problem in the strategy and the combination coefficients is bilinear;
    we scan a finite set of coefficient directions).
    """
    space = game.space
    count = space.action_counts[player - 1]
    family = [tuple(Fraction(x) for x in alpha) for alpha in alpha_family]
    if directions is None:
        directions = unit_difference_directions(count)
    if len(family) * max(1, len(directions)) > max_candidates:
        raise ResourceLimitError(
            f"{len(family)} relations x {len(directions)} directions exceeds {max_candidates}"
        )
    s_matrix = game.payoff_matrix()
    pruned = []
    examined = 0
    vacuous = 0
    all_pruned = True
    for alpha in family:
        if len(alpha) != game.n_players + 1:
            raise InvalidInputError("candidate relation has wrong length")
        target = matvec(s_matrix, list(alpha))
        if is_zero_vector(target):
            vacuous += 1
            continue
        examined += 1
        sf = sign_feasibility(target, player, space)
        if not sf.feasible:
            pruned.append(PrunedCandidate(alpha=alpha, violations=sf.violations))
            continue
        all_pruned = False
        for direction in directions:
            strategy = _strategy_feasibility_lp(game, monitoring, space, player, direction, target)
            if strategy is None:
                continue
            pd, cert = detect_zd_for(strategy, monitoring, space, game)
            if cert is not None:
                return SearchResult(
                    status="found",
                    player=player,
                    strategy=strategy,
                    certificate=cert,
                    alpha=alpha,
                    pruned=tuple(pruned),
                    candidates_examined=examined,
                    vacuous_skipped=vacuous,
                )
    if examined > 0 and all_pruned:
        return SearchResult(
            status="pruned-nonexistence",
            player=player,
            pruned=tuple(pruned),
            candidates_examined=examined,
            vacuous_skipped=vacuous,
        )
    return SearchResult(
        status="inconclusive",
        player=player,
        pruned=tuple(pruned),
        candidates_examined=examined,
        vacuous_skipped=vacuous,
    )


@dataclass(frozen=True)
class ImpossibilityReport:
    status: str  # "satisfied" | "violation"
    hypotheses: tuple[str, ...]
    dimension: int
    n_players: int
    certificate: ZdCertificate | None


def check_dimension_n_impossibility(game: Game, pd: PressDysonMatrix) -> ImpossibilityReport:
    """Check the dimension-N impossibility statements on one instance.

    In a weakly symmetric game, strategy vectors without zero entries (or
    all-distinct payoff entries for every player) rule out an enforced
    relation space of dimension N.  A ``violation`` result would falsify
    that; the property suites treat it as a failure.
    """
    if weak_symmetry_witnesses(game) is None:
        raise InvalidInputError("the game is not weakly symmetric")
    hypotheses = []
    if check_nonzero_pd(pd):
        hypotheses.append("nonzero-strategy-vectors")
    if all(len(set(vec)) == len(vec) for vec in game.payoffs):
        hypotheses.append("all-distinct-payoffs")
    cert = detect_zd(pd, game)
    dimension = cert.dimension if cert is not None else 0
    status = "satisfied"
    if hypotheses and dimension >= game.n_players:
        status = "violation"
    return ImpossibilityReport(
        status=status,
        hypotheses=tuple(hypotheses),
        dimension=dimension,
        n_players=game.n_players,
        certificate=cert,
    )
