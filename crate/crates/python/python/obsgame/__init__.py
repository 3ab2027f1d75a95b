"""Equilibria and translations for Boolean observation games.

Games and profiles are plain dicts in the JSON file formats of the
``obsgame`` command-line tool; strings holding that JSON are accepted too.
"""

import json

from . import _native
from ._native import BudgetExceeded

__all__ = [
    "BudgetExceeded",
    "classify",
    "construct",
    "enumerate_equilibria",
    "evaluate",
    "exists",
    "load_game",
    "selftest",
    "translate",
    "verify",
]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def load_game(path):
    """Read and normalize a game file."""
    with open(path, encoding="utf-8") as f:
        return json.loads(_native.normalize_game(f.read()))


def evaluate(game, formula, true_vars=(), profile=None):
    return _native.evaluate(
        _text(game), formula, list(true_vars), None if profile is None else _text(profile)
    )


def classify(game):
    return json.loads(_native.classify(_text(game)))


def verify(game, profile, relation):
    return _native.verify(_text(game), _text(profile), relation)


def exists(game, relation, budget=None):
    """A witness profile, or None when no uniform equilibrium exists."""
    found = _native.exists(_text(game), relation, budget)
    return None if found is None else json.loads(found)


def enumerate_equilibria(game, relation, limit=100, budget=None):
    return [json.loads(p) for p in _native.enumerate(_text(game), relation, limit, budget)]


def construct(game, algorithm, budget=None):
    return json.loads(_native.construct(_text(game), algorithm, budget))


def translate(game, direction, variant="next"):
    """The translated game and its provenance map."""
    g, prov = _native.translate_game(_text(game), direction, variant)
    return json.loads(g), json.loads(prov)


def selftest(filter=None, seed=0):
    return _native.run_selftest(filter, seed)
