"""JSON spec round-trips and exact number parsing."""

import random
from fractions import Fraction

import pytest

from zdgames.constructors import ControllerParams, make_simultaneous_controller_imperfect
from zdgames.errors import InvalidInputError
from zdgames.rational import as_fraction, frac_str
from zdgames.specio import (
    certificate_from_obj,
    certificate_to_obj,
    game_from_obj,
    game_to_obj,
    loads_exact,
    monitoring_from_obj,
    monitoring_to_obj,
    strategy_from_obj,
    strategy_to_obj,
)

from helpers import pd_game, random_profile

F = Fraction


def test_loads_exact_keeps_decimals():
    obj = loads_exact('{"a": 0.2, "b": 3, "c": "7/3", "d": 1e-3}')
    assert obj["a"] == F(1, 5)
    assert obj["b"] == 3
    assert as_fraction(obj["c"]) == F(7, 3)
    assert obj["d"] == F(1, 1000)


def test_as_fraction_rejects_floats():
    with pytest.raises(InvalidInputError):
        as_fraction(0.2)
    with pytest.raises(InvalidInputError):
        as_fraction("nonsense")


def test_frac_str_round_trip():
    for value in (F(0), F(3), F(-3, 125), F(11, 4)):
        assert as_fraction(frac_str(value)) == value


def test_game_round_trip_with_monitoring():
    rng = random.Random(36)
    space, monitoring, _ = random_profile(rng, (2, 3), n_signals=2)
    game = pd_game()
    obj = game_to_obj(game)
    back, mon = game_from_obj(obj)
    assert back.payoffs == game.payoffs and mon is None

    from zdgames.games import make_game

    game2 = make_game((2, 3), [[F(1, 3)] * 6, [F(-2, 7)] * 6])
    obj2 = game_to_obj(game2, monitoring)
    back2, mon2 = game_from_obj(obj2)
    assert back2.payoffs == game2.payoffs
    assert mon2 == monitoring


def test_game_spec_validation():
    with pytest.raises(InvalidInputError):
        game_from_obj({"players": 2, "action_counts": [2]})
    with pytest.raises(InvalidInputError):
        game_from_obj({"players": 2, "action_counts": [2, 2], "payoffs": [[0] * 4]})


def test_strategy_and_monitoring_round_trip():
    rng = random.Random(37)
    space, monitoring, strategies = random_profile(rng, (3, 2), n_signals=3)
    assert monitoring_from_obj(monitoring_to_obj(monitoring)) == monitoring
    for strategy in strategies:
        assert strategy_from_obj(strategy_to_obj(strategy)) == strategy


def test_strategy_spec_missing_row_rejected():
    obj = {
        "player": 1,
        "signals": ["a", "b"],
        "table": {"1": {"a": ["1", "0"]}, "2": {"a": ["0", "1"], "b": ["0", "1"]}},
    }
    with pytest.raises(InvalidInputError):
        strategy_from_obj(obj)


def test_certificate_round_trip():
    bundle = make_simultaneous_controller_imperfect(
        2, 1, F(9, 10), ControllerParams(F(1, 5), F(1, 10), F(1, 4), F(3, 10))
    )
    cert = bundle.certificate
    back = certificate_from_obj(certificate_to_obj(cert))
    assert back.player == cert.player
    assert back.dimension == cert.dimension
    assert back.relations == cert.relations
    assert back.basis == cert.basis
    assert back.witnesses == cert.witnesses
