"""Rewriting RSL formulas into SL formulas (no restriction operator left).

Suggestions over a restricted spec use the rewrite

    (sigma!a)_i : c   ~~>   turn_i & ~(sigma)_i:a & (sigma)_i:c

applied recursively to ``sigma`` until no restriction remains; suggestions
over ``+``/``.`` that contain a restriction are first split into ``|``/``&``.

``sigma ~>_i psi`` over a restricted spec has no finite axiomatic rewrite, so
it is unfolded against a concrete model of height ``H``:

    U_0     = true
    U_{k+1} = psi & (turn_i -> OR_a(<a>true & sug(a)))
                  & AND_a((~turn_i | sug(a)) -> [a]U_k)

and replaced by ``U_{H+1}`` where ``sug(a)`` is the rewritten suggestion.
Each ``U_k`` is shared between the ``[a]`` conjuncts, so the result is a DAG
in memory even though it prints as a tree.
"""

from __future__ import annotations

from typing import Optional

from . import checker, specs
from .errors import ReductionError
from .game import GameTree
from .syntax import (
    TRUE, And, Both, Const, Diamond, Either, Ensures, Formula, Not, Prop,
    Restrict, Suggests, box, conj, disj, has_restrict, implies, turn,
)


def reduce_suggests(spec, player, action) -> Formula:
    if not has_restrict(spec):
        return Suggests(spec, player, action)
    if isinstance(spec, Restrict):
        return conj(
            turn(player),
            Not(reduce_suggests(spec.spec, player, spec.action)),
            reduce_suggests(spec.spec, player, action),
        )
    if isinstance(spec, Either):
        return disj(reduce_suggests(spec.left, player, action), reduce_suggests(spec.right, player, action))
    if isinstance(spec, Both):
        return And(reduce_suggests(spec.left, player, action), reduce_suggests(spec.right, player, action))
    raise ReductionError(f"not a specification: {spec!r}")


def _unfold_ensures(phi: Ensures, model: GameTree) -> Formula:
    actions = sorted(model.actions)
    sug = {a: reduce_suggests(phi.spec, phi.player, a) for a in actions}
    mine = turn(phi.player)
    enabled = disj(*(And(Diamond(a, TRUE), sug[a]) for a in actions))
    local = And(phi.goal, implies(mine, enabled))
    guards = {a: disj(Not(mine), sug[a]) for a in actions}
    u = TRUE
    for _ in range(model.height + 1):
        u = And(local, conj(*(implies(guards[a], box(a, u)) for a in actions)))
    return u


def reduce(phi: Formula, model: Optional[GameTree] = None) -> Formula:
    """Return an SL formula equivalent to ``phi`` under the ``axiom`` restriction semantics.

    ``model`` is needed only when an ensures-formula ranges over a restricted
    spec; its height and action alphabet bound the unfolding.
    """
    if isinstance(phi, (Const, Prop)):
        return phi
    if isinstance(phi, Not):
        sub = reduce(phi.sub, model)
        return phi if sub is phi.sub else Not(sub)
    if isinstance(phi, And):
        left, right = reduce(phi.left, model), reduce(phi.right, model)
        return phi if (left is phi.left and right is phi.right) else And(left, right)
    if isinstance(phi, Diamond):
        sub = reduce(phi.sub, model)
        return phi if sub is phi.sub else Diamond(phi.action, sub)
    if isinstance(phi, Suggests):
        if not has_restrict(phi.spec):
            return phi
        return reduce_suggests(phi.spec, phi.player, phi.action)
    if isinstance(phi, Ensures):
        if not has_restrict(phi.spec):
            return phi
        if model is None:
            raise ReductionError("an ensures-formula over a restricted spec can only be reduced against a model")
        return _unfold_ensures(phi, model)
    raise ReductionError(f"not a formula: {phi!r}")


def _restrict_nodes(spec):
    if isinstance(spec, Restrict):
        yield spec
        yield from _restrict_nodes(spec.spec)
    elif isinstance(spec, (Either, Both)):
        yield from _restrict_nodes(spec.left)
        yield from _restrict_nodes(spec.right)


def spec_guarded(model: GameTree, spec, player, s) -> bool:
    """Both restriction readings give ``spec`` the same enabled set at ``s``.

    Holds when it is ``player``'s turn and every restricted action is absent
    from the enabled set of the spec it restricts.
    """
    nodes = list(_restrict_nodes(spec))
    if not nodes:
        return True
    if model.turn.get(s) != player:
        return False
    return all(r.action not in specs._enabled(model, r.spec, s, specs.SET_MINUS) for r in nodes)


def guarded(model: GameTree, s, phi: Formula) -> bool:
    """Every restricted spec that ``phi`` consults from ``s`` is read the same by both semantics."""
    if isinstance(phi, (Const, Prop)):
        return True
    if isinstance(phi, Not):
        return guarded(model, s, phi.sub)
    if isinstance(phi, And):
        return guarded(model, s, phi.left) and guarded(model, s, phi.right)
    if isinstance(phi, Diamond):
        t = model.edges.get((s, phi.action))
        return t is None or guarded(model, t, phi.sub)
    if isinstance(phi, Suggests):
        return spec_guarded(model, phi.spec, phi.player, s)
    if isinstance(phi, Ensures):
        if not has_restrict(phi.spec):
            return True
        for t in checker.strategy_reach(model, s, phi.spec, phi.player, specs.SET_MINUS):
            if model.turn.get(t) == phi.player and not spec_guarded(model, phi.spec, phi.player, t):
                return False
        return True
    return False


__all__ = ["reduce", "reduce_suggests", "guarded", "spec_guarded"]
