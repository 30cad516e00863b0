"""Pydantic request/response models for the service and the CLI client.

Rationals travel as strings ("p/q" or decimal literals) or ints; binary
floats are rejected at validation time so the exact-arithmetic contract
holds across the wire.  Simulation output is genuinely floating point and
uses plain floats.
"""

from __future__ import annotations

from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict

from ..errors import ZdError
from ..rational import as_fraction, frac_str


def _rational_str(value):
    try:
        return frac_str(as_fraction(value))
    except ZdError as exc:
        raise ValueError(str(exc)) from None


Rational = Annotated[str, BeforeValidator(_rational_str)]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MonitoringModel(StrictModel):
    signals: list[str]
    law: list[list[Rational]]


class GameModel(StrictModel):
    players: int
    action_counts: list[int]
    payoffs: list[list[Rational]]
    monitoring: Optional[MonitoringModel] = None


class StrategyModel(StrictModel):
    player: int
    action_count: Optional[int] = None
    signals: list[str]
    table: dict[str, dict[str, list[Rational]]]


class CertificateModel(StrictModel):
    player: int
    dimension: int
    relations: list[list[Rational]]
    equations: list[str] = []
    basis: list[list[Rational]]
    witnesses: list[list[Rational]]
    kernel_relations: list[list[Rational]] = []


class AnalyzeRequest(StrictModel):
    game: GameModel
    strategies: list[StrategyModel]
    monitoring: Optional[MonitoringModel] = None
    initial_state: Optional[list[int]] = None


class StationaryModel(StrictModel):
    method: str
    rho: Union[list[Rational], list[float]]
    expected_payoffs: Union[list[Rational], list[float]]
    residual: Union[Rational, float]
    iterations: Optional[int] = None


class PlayerReport(StrictModel):
    player: int
    is_zd: bool
    certificate: Optional[CertificateModel] = None
    akin_residuals: Union[list[Rational], list[float]]


class AnalyzeResponse(StrictModel):
    players: list[PlayerReport]
    stationary: StationaryModel
    combined_span_dimension: int


class CheckRequest(StrictModel):
    certificates: list[CertificateModel]


class DependenceWitness(StrictModel):
    player: int
    vector: list[Rational]


class CheckResponse(StrictModel):
    consistent: bool
    consistency_status: str  # "consistent" | "empty"
    rank_full: int
    rank_reduced: int
    equations: list[str]
    solution_point: Optional[list[Rational]] = None
    solution_basis: list[list[Rational]] = []
    solution_dimension: Optional[int] = None
    independence_status: str
    dependence_witness: list[DependenceWitness] = []


class ConstructRequest(StrictModel):
    family: Literal[
        "tft",
        "equalizer-imperfect",
        "controller",
        "controller-imperfect",
        "zero-sum-controller",
    ]
    payoffs: Optional[list[Rational]] = None  # (R, S, T, P) for the 2x2 families
    r1: Optional[Rational] = None
    r2: Optional[Rational] = None
    r: Optional[Rational] = None
    w: Optional[Rational] = None
    beta: Optional[Rational] = None
    gamma: Optional[Rational] = None
    p: Optional[Rational] = None
    q: Optional[Rational] = None
    p_prime: Optional[Rational] = None
    q_prime: Optional[Rational] = None


class ConstructResponse(StrictModel):
    family: str
    equations: list[str]
    params: dict[str, str]
    game: GameModel
    monitoring: MonitoringModel
    strategy: StrategyModel
    certificate: CertificateModel


class SimulateRequest(StrictModel):
    game: GameModel
    strategies: list[StrategyModel]
    monitoring: Optional[MonitoringModel] = None
    steps: int
    seeds: list[int]
    record_every: Optional[int] = None
    initial_state: Optional[list[int]] = None
    initial_distributions: Optional[list[list[Rational]]] = None


class TrajectoryModel(StrictModel):
    seed: int
    t: list[int]
    averages: list[list[float]]  # one row of per-player running averages per t
    final_state: list[int]


class SimulateResponse(StrictModel):
    rng: str
    steps: int
    record_every: int
    trajectories: list[TrajectoryModel]
    mean_final: list[float]
    stddev_final: list[float]


class SignViolationModel(StrictModel):
    max_action: int
    min_action: int
    state: list[int]
    value: Rational
    side: str


class PrunedCandidateModel(StrictModel):
    alpha: list[Rational]
    violations: list[SignViolationModel]


class SearchRequest(StrictModel):
    game: GameModel
    monitoring: Optional[MonitoringModel] = None
    player: int
    family: Literal["grid", "zero-intercept", "equalizer"] = "grid"
    grid_max_numerator: int = 1
    grid_denominator: int = 1
    equalizer_targets: Optional[list[Rational]] = None
    max_candidates: int = 20_000


class SearchResponse(StrictModel):
    status: str
    player: int
    alpha: Optional[list[Rational]] = None
    equation: Optional[str] = None
    strategy: Optional[StrategyModel] = None
    certificate: Optional[CertificateModel] = None
    pruned: list[PrunedCandidateModel] = []
    candidates_examined: int
    vacuous_skipped: int


class VersionResponse(StrictModel):
    name: str
    version: str
    rng: str
