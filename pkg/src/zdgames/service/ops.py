"""Request -> response operations behind the service endpoints.

The FastAPI routes and the CLI both call these functions; they raise the
package's error types, which the app maps to HTTP statuses and the CLI
maps to exit codes.
"""

from __future__ import annotations

from fractions import Fraction

from .. import __version__
from ..analysis import (
    LinearRelation,
    alpha_grid,
    combined_span_dimension,
    consistency_check,
    detect_zd,
    equalizer_family,
    existence_search,
    independence_check,
)
from ..constructors import (
    ControllerParams,
    EqualizerParams,
    make_equalizer_imperfect,
    make_simultaneous_controller,
    make_simultaneous_controller_imperfect,
    make_tit_for_tat,
    make_zero_sum_controller,
)
from ..errors import InvalidInputError
from ..games import make_game
from ..linalg import ONE, ZERO
from ..markov import EXACT_SOLVE, akin_residuals, stationary_distribution
from ..rational import as_fraction, frac_str
from ..simulate import EpisodeConfig, run_batch, uniform_initial
from ..specio import (
    certificate_from_obj,
    certificate_to_obj,
    game_from_obj,
    game_to_obj,
    monitoring_from_obj,
    monitoring_to_obj,
    strategy_from_obj,
    strategy_to_obj,
)
from ..strategies import (
    assemble_transition,
    marginal_transition,
    perfect_monitoring,
    press_dyson,
)
from . import models


def _load_game(req) -> tuple:
    game, embedded = game_from_obj(req.game.model_dump())
    if getattr(req, "monitoring", None) is not None:
        monitoring = monitoring_from_obj(req.monitoring.model_dump())
    elif embedded is not None:
        monitoring = embedded
    else:
        monitoring = perfect_monitoring(game.space)
    return game, monitoring


def _load_strategies(req):
    return [strategy_from_obj(s.model_dump()) for s in req.strategies]


def _exact_seq(values):
    return [frac_str(v) for v in values]


def _number_seq(values):
    if values and isinstance(values[0], (Fraction, int)):
        return _exact_seq(values)
    return [float(v) for v in values]


def analyze(req: models.AnalyzeRequest) -> models.AnalyzeResponse:
    game, monitoring = _load_game(req)
    strategies = _load_strategies(req)
    space = game.space
    transition = assemble_transition(strategies, monitoring, space)
    if req.initial_state is not None:
        idx = space.index(tuple(req.initial_state))
        initial = tuple(ONE if j == idx else ZERO for j in range(space.size))
    else:
        initial = tuple(Fraction(1, space.size) for _ in range(space.size))
    result = stationary_distribution(transition, initial).with_payoffs(game)
    reports = []
    certificates = []
    for strategy in sorted(strategies, key=lambda s: s.player):
        pd = press_dyson(
            marginal_transition(strategy, monitoring, space), space, strategy.player
        )
        cert = detect_zd(pd, game)
        if cert is not None:
            certificates.append(cert)
        residuals = akin_residuals(result.rho, pd)
        reports.append(
            models.PlayerReport(
                player=strategy.player,
                is_zd=cert is not None,
                certificate=(
                    models.CertificateModel(**certificate_to_obj(cert)) if cert else None
                ),
                akin_residuals=_number_seq(list(residuals)),
            )
        )
    exact = result.method == EXACT_SOLVE
    stationary = models.StationaryModel(
        method=result.method,
        rho=_number_seq(list(result.rho)),
        expected_payoffs=_number_seq(list(result.expected_payoffs)),
        residual=frac_str(result.residual) if exact else float(result.residual),
        iterations=result.iterations,
    )
    return models.AnalyzeResponse(
        players=reports,
        stationary=stationary,
        combined_span_dimension=combined_span_dimension(certificates),
    )


def check(req: models.CheckRequest) -> models.CheckResponse:
    if not req.certificates:
        raise InvalidInputError("check needs at least one certificate")
    certs = [certificate_from_obj(c.model_dump()) for c in req.certificates]
    relations = [rel for cert in certs for rel in cert.relations]
    system = consistency_check(relations)
    independence = independence_check(certs)
    return models.CheckResponse(
        consistent=system.is_consistent,
        consistency_status="consistent" if system.is_consistent else "empty",
        rank_full=system.rank_full,
        rank_reduced=system.rank_reduced,
        equations=[rel.equation() for rel in relations],
        solution_point=_exact_seq(system.particular) if system.is_consistent else None,
        solution_basis=[_exact_seq(v) for v in system.basis],
        solution_dimension=system.solution_dimension,
        independence_status=independence.status,
        dependence_witness=[
            models.DependenceWitness(player=player, vector=_exact_seq(vector))
            for player, vector in independence.witness
        ],
    )


def _need(req, names):
    missing = [name for name in names if getattr(req, name) is None]
    if missing:
        raise InvalidInputError(
            f"family {req.family!r} needs parameters: {', '.join(missing)}"
        )


def _symmetric_2x2_game(payoffs):
    if len(payoffs) != 4:
        raise InvalidInputError("payoffs must be the four values R, S, T, P")
    r, s, t, p = (as_fraction(x) for x in payoffs)
    return make_game((2, 2), [[r, s, t, p], [r, t, s, p]])


def construct(req: models.ConstructRequest) -> models.ConstructResponse:
    if req.family == "tft":
        _need(req, ["payoffs"])
        bundle = make_tit_for_tat(_symmetric_2x2_game(req.payoffs))
    elif req.family == "equalizer-imperfect":
        _need(req, ["payoffs", "w", "beta", "gamma"])
        bundle = make_equalizer_imperfect(
            _symmetric_2x2_game(req.payoffs),
            req.w,
            EqualizerParams(req.beta, req.gamma),
        )
    elif req.family == "controller":
        _need(req, ["r1", "r2", "p", "q", "p_prime", "q_prime"])
        bundle = make_simultaneous_controller(
            req.r1, req.r2, ControllerParams(req.p, req.q, req.p_prime, req.q_prime)
        )
    elif req.family == "controller-imperfect":
        _need(req, ["r1", "r2", "w", "p", "q", "p_prime", "q_prime"])
        bundle = make_simultaneous_controller_imperfect(
            req.r1, req.r2, req.w, ControllerParams(req.p, req.q, req.p_prime, req.q_prime)
        )
    else:  # zero-sum-controller
        _need(req, ["r", "p", "q", "p_prime", "q_prime"])
        bundle = make_zero_sum_controller(
            req.r, ControllerParams(req.p, req.q, req.p_prime, req.q_prime)
        )
    params = {
        key: frac_str(value) if isinstance(value, Fraction) else str(value)
        for key, value in bundle.params.items()
        if not isinstance(value, tuple)
    }
    if "payoffs" in bundle.params:
        params["payoffs"] = ",".join(frac_str(x) for x in bundle.params["payoffs"])
    return models.ConstructResponse(
        family=bundle.family,
        equations=bundle.equations,
        params=params,
        game=models.GameModel(**game_to_obj(bundle.game, bundle.monitoring)),
        monitoring=models.MonitoringModel(**monitoring_to_obj(bundle.monitoring)),
        strategy=models.StrategyModel(**strategy_to_obj(bundle.strategy)),
        certificate=models.CertificateModel(**certificate_to_obj(bundle.certificate)),
    )


def _resolve_record_every(steps: int, record_every) -> int:
    if record_every is not None:
        return record_every
    return steps // 100 if steps % 100 == 0 else steps


def simulate(req: models.SimulateRequest) -> models.SimulateResponse:
    game, monitoring = _load_game(req)
    strategies = _load_strategies(req)
    if not req.seeds:
        raise InvalidInputError("simulate needs at least one seed")
    record_every = _resolve_record_every(req.steps, req.record_every)
    if req.initial_state is not None and req.initial_distributions is not None:
        raise InvalidInputError("give initial_state or initial_distributions, not both")
    if req.initial_state is not None:
        initial = {"initial_state": tuple(req.initial_state)}
    elif req.initial_distributions is not None:
        initial = {
            "initial_distributions": tuple(
                tuple(as_fraction(x) for x in row) for row in req.initial_distributions
            )
        }
    else:
        initial = {"initial_distributions": uniform_initial(game)}
    configs = [
        EpisodeConfig(steps=req.steps, seed=seed, record_every=record_every, **initial)
        for seed in req.seeds
    ]
    batch = run_batch(game, strategies, monitoring, configs)
    trajectories = [
        models.TrajectoryModel(
            seed=traj.seed,
            t=[t for t, _ in traj.samples],
            averages=[list(avgs) for _, avgs in traj.samples],
            final_state=list(traj.final_state),
        )
        for traj in batch.trajectories
    ]
    return models.SimulateResponse(
        rng=batch.trajectories[0].rng_id,
        steps=req.steps,
        record_every=record_every,
        trajectories=trajectories,
        mean_final=list(batch.mean_final),
        stddev_final=list(batch.stddev_final),
    )


def search(req: models.SearchRequest) -> models.SearchResponse:
    game, monitoring = _load_game(req)
    if not 1 <= req.player <= game.n_players:
        raise InvalidInputError(f"player {req.player} not in 1..{game.n_players}")
    n = game.n_players
    if req.family == "equalizer":
        if req.equalizer_targets is not None:
            targets = [as_fraction(x) for x in req.equalizer_targets]
        else:
            targets = sorted(
                {
                    Fraction(p, req.grid_denominator)
                    for p in range(-req.grid_max_numerator, req.grid_max_numerator + 1)
                }
            )
        family = equalizer_family(n, targets)
    else:
        family = alpha_grid(
            n,
            max_numerator=req.grid_max_numerator,
            denominator=req.grid_denominator,
            zero_intercept=req.family == "zero-intercept",
            max_candidates=req.max_candidates,
        )
    result = existence_search(
        game, monitoring, req.player, family, max_candidates=req.max_candidates
    )
    return models.SearchResponse(
        status=result.status,
        player=result.player,
        alpha=_exact_seq(result.alpha) if result.alpha is not None else None,
        equation=(
            LinearRelation(result.alpha).equation() if result.alpha is not None else None
        ),
        strategy=(
            models.StrategyModel(**strategy_to_obj(result.strategy))
            if result.strategy is not None
            else None
        ),
        certificate=(
            models.CertificateModel(**certificate_to_obj(result.certificate))
            if result.certificate is not None
            else None
        ),
        pruned=[
            models.PrunedCandidateModel(
                alpha=_exact_seq(cand.alpha),
                violations=[
                    models.SignViolationModel(
                        max_action=v.max_action,
                        min_action=v.min_action,
                        state=list(v.state),
                        value=frac_str(v.value),
                        side=v.side,
                    )
                    for v in cand.violations
                ],
            )
            for cand in result.pruned
        ],
        candidates_examined=result.candidates_examined,
        vacuous_skipped=result.vacuous_skipped,
    )


def version() -> models.VersionResponse:
    from ..simulate import RNG_ID

    return models.VersionResponse(name="zdgames", version=__version__, rng=RNG_ID)
