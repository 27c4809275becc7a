"""JSON schemas for games, outcomes, and reports.

Game files look like::

    {
      "players": ["p1", "p2"],
      "states": ["s1", "s2"],
      "prior": {"s1": "1/2", "s2": "1/2"},
      "actions": {"p1": ["a", "b"], "p2": ["a", "b"]},
      "utilities": {"p1": {"a,b|s1": "3/2", ...}, "p2": {...}}
    }

Profile keys join the actions in player order with commas, then "|state".
Rationals are "num/den" strings or bare integers; outcomes mirror the layout
under an "outcome" key with zero cells omitted.
"""

import json

from .errors import SchemaViolation
from .games import BaseGame, Outcome, make_outcome, validate_game
from .rational import parse_rational, rational_to_json


def _profile_key(profile, state):
    return ",".join(str(a) for a in profile) + "|" + str(state)


def _parse_profile_key(key, game: BaseGame):
    if "|" not in key:
        raise SchemaViolation(f"cell key {key!r} lacks the |state separator")
    left, state = key.rsplit("|", 1)
    actions = tuple(left.split(","))
    if len(actions) != len(game.players):
        raise SchemaViolation(f"cell key {key!r} names {len(actions)} actions")
    state_map = {str(s): s for s in game.states}
    if state not in state_map:
        raise SchemaViolation(f"cell key {key!r} names unknown state {state!r}")
    resolved = []
    for i, a in zip(game.players, actions):
        amap = {str(x): x for x in game.actions[i]}
        if a not in amap:
            raise SchemaViolation(f"cell key {key!r}: {a!r} is not an action of {i!r}")
        resolved.append(amap[a])
    return tuple(resolved), state_map[state]


def game_from_dict(data: dict) -> BaseGame:
    try:
        players = tuple(data["players"])
        states = tuple(data["states"])
        prior = {s: parse_rational(data["prior"][str(s)]) for s in states}
        actions = {i: tuple(data["actions"][str(i)]) for i in players}
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"malformed game header: {exc}") from exc
    stub = BaseGame(
        players=players, states=states, prior=prior, actions=actions, utilities={}
    )
    utilities = {}
    for i in players:
        raw = data.get("utilities", {}).get(str(i))
        if raw is None:
            raise SchemaViolation(f"missing utilities for player {i!r}")
        table = {}
        for key, value in raw.items():
            cell = _parse_profile_key(key, stub)
            try:
                table[cell] = parse_rational(value)
            except ValueError as exc:
                raise SchemaViolation(f"utility {key!r}: {exc}") from exc
        utilities[i] = table
    game = BaseGame(
        players=players, states=states, prior=prior, actions=actions, utilities=utilities
    )
    validate_game(game)
    return game


def game_to_dict(game: BaseGame) -> dict:
    return {
        "players": [str(i) for i in game.players],
        "states": [str(s) for s in game.states],
        "prior": {str(s): rational_to_json(game.prior[s]) for s in game.states},
        "actions": {str(i): [str(a) for a in game.actions[i]] for i in game.players},
        "utilities": {
            str(i): {
                _profile_key(profile, state): rational_to_json(game.u(i, profile, state))
                for (profile, state) in game.cells()
            }
            for i in game.players
        },
    }


def outcome_from_dict(game: BaseGame, data: dict) -> Outcome:
    raw = data.get("outcome")
    if raw is None:
        raise SchemaViolation('outcome files carry their map under an "outcome" key')
    entries = {}
    for key, value in raw.items():
        cell = _parse_profile_key(key, game)
        try:
            entries[cell] = parse_rational(value)
        except ValueError as exc:
            raise SchemaViolation(f"outcome {key!r}: {exc}") from exc
    return make_outcome(game, entries)


def outcome_to_dict(outcome: Outcome) -> dict:
    return {
        "outcome": {
            _profile_key(profile, state): rational_to_json(q)
            for (profile, state), q in sorted(outcome.p.items(), key=str)
            if q
        }
    }


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"{path}: {exc}") from exc


def load_game(path) -> BaseGame:
    return game_from_dict(load_json(path))


def load_outcome(path, game: BaseGame) -> Outcome:
    return outcome_from_dict(game, load_json(path))
