"""JSON file formats for games, monitoring, strategies, and certificates.

Rationals serialize as strings ("3/4"); on input both "p/q" and decimal
strings are accepted, and JSON number literals are captured before float
conversion so "0.2" in a file really means 1/5.  Flat payoff order is the
lexicographic state indexing (player 1 most significant) -- part of the
format contract.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .analysis import LinearRelation, ZdCertificate
from .errors import InvalidInputError
from .games import Game, make_game
from .rational import as_fraction, frac_str
from .strategies import MemoryOneStrategy, MonitoringStructure, make_monitoring, make_strategy


def loads_exact(text: str):
    """Parse JSON with number literals captured as exact rationals."""
    try:
        return json.loads(text, parse_float=Fraction, parse_int=int)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed JSON: {exc}") from None


def load_json_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads_exact(fh.read())


def dump_json_file(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InvalidInputError(f"{where}: missing field {key!r}")
    return obj[key]


def game_to_obj(game: Game, monitoring: MonitoringStructure | None = None) -> dict:
    obj = {
        "players": game.n_players,
        "action_counts": list(game.space.action_counts),
        "payoffs": [[frac_str(x) for x in vec] for vec in game.payoffs],
    }
    if monitoring is not None:
        obj["monitoring"] = monitoring_to_obj(monitoring)
    return obj


def game_from_obj(obj) -> tuple[Game, MonitoringStructure | None]:
    players = _require(obj, "players", "game spec")
    counts = _require(obj, "action_counts", "game spec")
    payoffs = _require(obj, "payoffs", "game spec")
    if len(counts) != players:
        raise InvalidInputError(
            f"game spec: players = {players} but {len(counts)} action counts"
        )
    if len(payoffs) != players:
        raise InvalidInputError(
            f"game spec: players = {players} but {len(payoffs)} payoff vectors"
        )
    game = make_game(counts, payoffs)
    monitoring = None
    if obj.get("monitoring") is not None:
        monitoring = monitoring_from_obj(obj["monitoring"])
        if monitoring.n_states != game.space.size:
            raise InvalidInputError("game spec: monitoring law does not match the state count")
    return game, monitoring


def monitoring_to_obj(monitoring: MonitoringStructure) -> dict:
    return {
        "signals": list(monitoring.signals),
        "law": [[frac_str(x) for x in row] for row in monitoring.law],
    }


def monitoring_from_obj(obj) -> MonitoringStructure:
    signals = _require(obj, "signals", "monitoring spec")
    law = _require(obj, "law", "monitoring spec")
    return make_monitoring(signals, law)


def strategy_to_obj(strategy: MemoryOneStrategy) -> dict:
    table = {}
    for own in range(1, strategy.action_count + 1):
        table[str(own)] = {
            signal: [frac_str(x) for x in strategy.row(own, t)]
            for t, signal in enumerate(strategy.signals)
        }
    return {
        "player": strategy.player,
        "action_count": strategy.action_count,
        "signals": list(strategy.signals),
        "table": table,
    }


def strategy_from_obj(obj) -> MemoryOneStrategy:
    player = _require(obj, "player", "strategy spec")
    signals = [str(s) for s in _require(obj, "signals", "strategy spec")]
    table_obj = _require(obj, "table", "strategy spec")
    try:
        own_keys = sorted(table_obj, key=int)
    except ValueError:
        raise InvalidInputError("strategy spec: table keys must be integer own actions") from None
    action_count = int(obj.get("action_count") or len(own_keys))
    if own_keys != [str(i) for i in range(1, action_count + 1)]:
        raise InvalidInputError("strategy spec: table must have one entry per own action 1..M_n")
    rows = []
    for own in own_keys:
        per_signal_obj = table_obj[own]
        per_signal = []
        for signal in signals:
            if signal not in per_signal_obj:
                raise InvalidInputError(
                    f"strategy spec: missing row for own action {own}, signal {signal!r}"
                )
            per_signal.append(per_signal_obj[signal])
        rows.append(per_signal)
    return make_strategy(player, action_count, signals, rows)


def certificate_to_obj(cert: ZdCertificate) -> dict:
    return {
        "player": cert.player,
        "dimension": cert.dimension,
        "relations": [[frac_str(x) for x in rel.alpha] for rel in cert.relations],
        "equations": [rel.equation() for rel in cert.relations],
        "basis": [[frac_str(x) for x in u] for u in cert.basis],
        "witnesses": [[frac_str(x) for x in c] for c in cert.witnesses],
        "kernel_relations": [[frac_str(x) for x in k] for k in cert.kernel_relations],
    }


def certificate_from_obj(obj) -> ZdCertificate:
    relations = tuple(
        LinearRelation(tuple(as_fraction(x) for x in row))
        for row in _require(obj, "relations", "certificate")
    )
    basis = tuple(
        tuple(as_fraction(x) for x in row) for row in _require(obj, "basis", "certificate")
    )
    witnesses = tuple(
        tuple(as_fraction(x) for x in row) for row in _require(obj, "witnesses", "certificate")
    )
    kernel = tuple(
        tuple(as_fraction(x) for x in row) for row in obj.get("kernel_relations", [])
    )
    return ZdCertificate(
        player=int(_require(obj, "player", "certificate")),
        dimension=int(_require(obj, "dimension", "certificate")),
        relations=relations,
        basis=basis,
        witnesses=witnesses,
        kernel_relations=kernel,
    )
