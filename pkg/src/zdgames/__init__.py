"""Zero-determinant strategies in multi-player repeated games.

Exact detection and construction of memory-one strategies that
unilaterally enforce linear relations between stationary payoffs, under
perfect or public monitoring, plus the Markov machinery and Monte Carlo
harness to validate every enforced relation.
"""

from .analysis import (
    ConsistencySystem,
    IndependenceResult,
    LinearRelation,
    SearchResult,
    ZdCertificate,
    check_dimension_n_impossibility,
    check_nonzero_pd,
    consistency_check,
    detect_zd,
    detect_zd_for,
    existence_search,
    independence_check,
    sign_feasibility,
)
from .constructors import (
    ControllerParams,
    EqualizerParams,
    make_equalizer_imperfect,
    make_simultaneous_controller,
    make_simultaneous_controller_imperfect,
    make_tit_for_tat,
    make_zero_sum_controller,
)
from .games import (
    Game,
    Permutation,
    StateSpace,
    build_state_space,
    is_symmetric_under,
    is_weakly_symmetric,
    make_game,
    weak_symmetry_witnesses,
)
from .markov import StationaryResult, akin_residuals, expected_payoffs, stationary_distribution
from .simulate import EpisodeConfig, Trajectory, run_batch, run_episode
from .strategies import (
    MemoryOneStrategy,
    MonitoringStructure,
    PressDysonMatrix,
    assemble_transition,
    marginal_transition,
    perfect_monitoring,
    press_dyson,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencySystem",
    "ControllerParams",
    "EpisodeConfig",
    "EqualizerParams",
    "Game",
    "IndependenceResult",
    "LinearRelation",
    "MemoryOneStrategy",
    "MonitoringStructure",
    "Permutation",
    "PressDysonMatrix",
    "SearchResult",
    "StateSpace",
    "StationaryResult",
    "Trajectory",
    "ZdCertificate",
    "akin_residuals",
    "assemble_transition",
    "build_state_space",
    "check_dimension_n_impossibility",
    "check_nonzero_pd",
    "consistency_check",
    "detect_zd",
    "detect_zd_for",
    "existence_search",
    "expected_payoffs",
    "independence_check",
    "is_symmetric_under",
    "is_weakly_symmetric",
    "make_equalizer_imperfect",
    "make_game",
    "make_simultaneous_controller",
    "make_simultaneous_controller_imperfect",
    "make_tit_for_tat",
    "make_zero_sum_controller",
    "marginal_transition",
    "perfect_monitoring",
    "press_dyson",
    "run_batch",
    "run_episode",
    "sign_feasibility",
    "stationary_distribution",
    "weak_symmetry_witnesses",
    "__version__",
]
