"""Truth of SL/RSL formulas at a state of a finite game tree."""

from __future__ import annotations

from . import specs
from .errors import SpecError, UnknownActionError, UnknownStateError
from .game import GameTree, subtree
from .syntax import And, Const, Diamond, Ensures, Formula, Not, Prop, Spec, Suggests

_TURN_PROPS = {"turn_1": 1, "turn_2": 2}


def check(model: GameTree, s, phi: Formula, semantics: str = "set-minus") -> bool:
    if s not in model.states:
        raise UnknownStateError(s)
    return _holds(model, s, phi, semantics)


def _holds(model, s, phi, semantics):
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Prop):
        if phi.name in _TURN_PROPS:
            return model.turn.get(s) == _TURN_PROPS[phi.name]
        return phi.name in model.props_at(s)
    if isinstance(phi, Not):
        return not _holds(model, s, phi.sub, semantics)
    if isinstance(phi, And):
        return _holds(model, s, phi.left, semantics) and _holds(model, s, phi.right, semantics)
    if isinstance(phi, Diamond):
        if phi.action not in model.actions:
            raise UnknownActionError(phi.action)
        t = model.edges.get((s, phi.action))
        return t is not None and _holds(model, t, phi.sub, semantics)
    if isinstance(phi, Suggests):
        return phi.action in specs._enabled(model, phi.spec, s, semantics)
    if isinstance(phi, Ensures):
        return all(_ensured_at(model, t, phi, semantics)
                   for t in strategy_reach(model, s, phi.spec, phi.player, semantics))
    raise SpecError(f"not a formula: {phi!r}")


def _ensured_at(model, t, phi, semantics):
    if not _holds(model, t, phi.goal, semantics):
        return False
    if model.turn.get(t) != phi.player:
        return True
    sigma = specs._enabled(model, phi.spec, t, semantics)
    return any(a in sigma for a in model.children.get(t, {}))


def _kept_moves(model, t, spec, player, semantics):
    kids = model.children.get(t, {})
    if model.turn.get(t) != player:
        return list(kids)
    sigma = specs._enabled(model, spec, t, semantics)
    return [a for a in kids if a in sigma]


def strategy_reach(model: GameTree, s, spec: Spec, player, semantics: str = "set-minus") -> list:
    """States ``t`` with ``s =>*_sigma t``: reflexive-transitive closure inside ``T_s|sigma``."""
    out, stack = [], [s]
    while stack:
        t = stack.pop()
        out.append(t)
        kids = model.children.get(t, {})
        stack.extend(kids[a] for a in _kept_moves(model, t, spec, player, semantics))
    return out


def pruned_tree(model: GameTree, s, spec: Spec, player, semantics: str = "set-minus") -> GameTree:
    """``T_s|sigma``: the root-to-``s`` path plus, below ``s``, only sigma-enabled moves at ``player`` nodes."""
    if s not in model.states:
        raise UnknownStateError(s)
    path = model.path_from_root(s)
    kept = [model.parent[t] for t in path[1:]]
    for t in strategy_reach(model, s, spec, player, semantics):
        kept.extend((t, a) for a in _kept_moves(model, t, spec, player, semantics))
    return subtree(model, model.root, kept)
