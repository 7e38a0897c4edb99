"""Enabled moves ``sigma(s)``, conformance ``mu, s |=_i sigma`` and spec equivalence.

Two readings of the restriction operator are supported:

``set-minus`` (default)
    ``(sigma!a)(s) = sigma(s) - {a}``.
``axiom``
    ``c in (sigma!a)(s)`` iff ``turn_i`` holds, ``a not in sigma(s)`` and
    ``c in sigma(s)``.  This is the reading under which the RSL axiom is
    valid; it differs from ``set-minus`` at opponent states and wherever
    ``a in sigma(s)``.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Optional

from . import checker
from .errors import CapacityError, SpecError, UnknownStateError
from .game import GameTree, Strategy, restrict_strategy
from .syntax import Both, Either, IfThen, Restrict, Spec, spec_player

SET_MINUS = "set-minus"
AXIOM = "axiom"
SEMANTICS = (SET_MINUS, AXIOM)

DEFAULT_SEED = 20240601
DEFAULT_CAP = 4096
DEFAULT_SAMPLES = 256


def _check_semantics(semantics):
    if semantics not in SEMANTICS:
        raise ValueError(f"restriction semantics must be one of {SEMANTICS}, got {semantics!r}")


def enabled_moves(model: GameTree, spec: Spec, s, semantics: str = SET_MINUS) -> frozenset:
    if s not in model.states:
        raise UnknownStateError(s)
    _check_semantics(semantics)
    return _enabled(model, spec, s, semantics)


def _enabled(model, spec, s, semantics):
    if isinstance(spec, IfThen):
        if model.turn.get(s) == spec.player and checker.check(model, s, spec.condition):
            if spec.action in model.children.get(s, {}):
                return frozenset({spec.action})
            return frozenset()
        return model.actions
    if isinstance(spec, Either):
        return _enabled(model, spec.left, s, semantics) | _enabled(model, spec.right, s, semantics)
    if isinstance(spec, Both):
        return _enabled(model, spec.left, s, semantics) & _enabled(model, spec.right, s, semantics)
    if isinstance(spec, Restrict):
        inner = _enabled(model, spec.spec, s, semantics)
        if semantics == SET_MINUS:
            return inner - {spec.action}
        if model.turn.get(s) == spec.player and spec.action not in inner:
            return inner
        return frozenset()
    raise SpecError(f"not a specification: {spec!r}")


def conforms(model: GameTree, mu: Strategy, s, spec: Spec) -> bool:
    """Local conformance of ``mu`` to ``spec`` at ``s``.

    ``[psi -> a]`` is vacuously satisfied at states the strategizing player
    does not own.  Restriction checks ``a`` is not returned at ``s`` and
    recurses with ``mu!a``.
    """
    if s not in model.states:
        raise UnknownStateError(s)
    if mu.player != spec_player(spec):
        raise SpecError(f"strategy of player {mu.player} checked against a spec for player {spec_player(spec)}")
    return _conforms(model, mu, s, spec)


def _outr(model, mu, s):
    if model.turn.get(s) != mu.player:
        return mu.assignment.get(s, frozenset())
    return mu.outr(s)


def _conforms(model, mu, s, spec):
    if isinstance(spec, IfThen):
        if model.turn.get(s) != spec.player:
            return True
        if not checker.check(model, s, spec.condition):
            return True
        return spec.action in _outr(model, mu, s)
    if isinstance(spec, Either):
        return _conforms(model, mu, s, spec.left) or _conforms(model, mu, s, spec.right)
    if isinstance(spec, Both):
        return _conforms(model, mu, s, spec.left) and _conforms(model, mu, s, spec.right)
    if isinstance(spec, Restrict):
        if spec.action in _outr(model, mu, s):
            return False
        return _conforms(model, restrict_strategy(mu, spec.action), s, spec.spec)
    raise SpecError(f"not a specification: {spec!r}")


def strategy_count(model: GameTree, player) -> int:
    n = 1
    for s, p in model.turn.items():
        if p == player:
            n *= 2 ** len(model.children.get(s, {}))
    return n


def all_strategies(model: GameTree, player, singleton: bool = False):
    """Every strategy of ``player`` whose values are subsets of the available moves."""
    own = sorted(s for s, p in model.turn.items() if p == player)
    choices = []
    for s in own:
        acts = sorted(model.children.get(s, {}))
        if singleton:
            choices.append([frozenset({a}) for a in acts])
        else:
            choices.append([frozenset(c) for r in range(len(acts) + 1)
                            for c in itertools.combinations(acts, r)])
    for combo in itertools.product(*choices):
        yield Strategy(player, dict(zip(own, combo)))


def sample_strategies(model: GameTree, player, n: int, rng: random.Random, singleton: bool = False):
    own = sorted(s for s, p in model.turn.items() if p == player)
    for _ in range(n):
        assignment = {}
        for s in own:
            acts = sorted(model.children.get(s, {}))
            if singleton:
                assignment[s] = frozenset({rng.choice(acts)})
            else:
                assignment[s] = frozenset(a for a in acts if rng.random() < 0.5)
        yield Strategy(player, assignment)


def strategies_for(model, player, cap=DEFAULT_CAP, samples=DEFAULT_SAMPLES,
                   seed=DEFAULT_SEED, allow_sampling=True, singleton=False):
    total = 1
    if singleton:
        for s, p in model.turn.items():
            if p == player:
                total *= len(model.children.get(s, {}))
    else:
        total = strategy_count(model, player)
    if total <= cap:
        return list(all_strategies(model, player, singleton=singleton))
    if not allow_sampling:
        raise CapacityError(f"{total} strategies exceed the cap of {cap} and sampling is disabled")
    return list(sample_strategies(model, player, samples, random.Random(seed), singleton=singleton))


def spec_equiv(models: Iterable[GameTree], sigma1: Spec, sigma2: Spec, *,
               cap: int = DEFAULT_CAP, samples: int = DEFAULT_SAMPLES,
               seed: int = DEFAULT_SEED, allow_sampling: bool = True,
               witness: Optional[list] = None) -> bool:
    """Bounded equivalence of two specs with respect to conformance.

    Compares ``conforms`` on every state of every model for every strategy of
    the specs' player (exhaustively when there are at most ``cap`` of them,
    otherwise ``samples`` strategies drawn with ``seed``).  The first
    disagreement found is appended to ``witness`` when a list is given.
    """
    player = spec_player(sigma1)
    if spec_player(sigma2) != player:
        raise SpecError("specifications belong to different players")
    for model in models:
        for mu in strategies_for(model, player, cap, samples, seed, allow_sampling):
            for s in model.ordered_states():
                left = _conforms(model, mu, s, sigma1)
                right = _conforms(model, mu, s, sigma2)
                if left != right:
                    if witness is not None:
                        witness.append((model, mu, s, left, right))
                    return False
    return True
