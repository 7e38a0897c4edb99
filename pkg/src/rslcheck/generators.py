"""Seeded random game trees, strategies, formulas and specifications for property tests."""

from __future__ import annotations

import random
from typing import Sequence

from .game import GameTree, Strategy
from .syntax import (
    FALSE, TRUE, And, Both, Diamond, Either, Ensures, IfThen, Not, Prop, Restrict,
    Suggests, size,
)

ACTIONS = ("a", "b", "c")
PROPS = ("p", "q")


def random_tree(rng: random.Random, max_depth: int = 5, max_actions: int = 3,
                max_states: int = 24, props: Sequence[str] = PROPS,
                leaf_bias: float = 0.35, payoffs: bool = False) -> GameTree:
    """A random well-formed game tree of height at most ``max_depth``."""
    alphabet = list(ACTIONS[:rng.randint(1, max_actions)])
    edges, turn, labels = [], {}, {}
    frontier = [("s0", 0)]
    count = 1
    while frontier:
        s, d = frontier.pop(0)
        labels[s] = {p for p in props if rng.random() < 0.5}
        room = max_states - count
        if d >= max_depth or room <= 0 or (d > 0 and rng.random() < leaf_bias):
            continue
        k = rng.randint(1, min(len(alphabet), room))
        turn[s] = rng.choice((1, 2))
        for act in sorted(rng.sample(alphabet, k)):
            t = f"s{count}"
            count += 1
            edges.append((s, act, t))
            frontier.append((t, d + 1))
    tree = GameTree.build("s0", edges, turn=turn, props=labels, actions=alphabet)
    if payoffs:
        tree = with_payoffs(tree, rng)
    return tree


def with_payoffs(tree: GameTree, rng: random.Random, tie_free: bool = True) -> GameTree:
    leaves = sorted(tree.leaves)
    if tie_free:
        first = rng.sample(range(len(leaves) * 3), len(leaves))
        second = rng.sample(range(len(leaves) * 3), len(leaves))
    else:
        first = [rng.randint(0, 3) for _ in leaves]
        second = [rng.randint(0, 3) for _ in leaves]
    pay = {s: (u, v) for s, u, v in zip(leaves, first, second)}
    return GameTree(tree.states, tree.root, tree.edges, tree.turn, tree.actions, tree.valuation, pay)


def random_binary_payoff_tree(rng: random.Random, max_depth: int = 6) -> GameTree:
    """Binary tree (moves ``l``/``r``) with pairwise distinct leaf payoffs for each player."""
    edges, turn = [], {}
    frontier = [("s0", 0)]
    count = 1
    while frontier:
        s, d = frontier.pop(0)
        if d >= max_depth or (d > 0 and rng.random() < 0.3):
            continue
        turn[s] = rng.choice((1, 2))
        for act in ("l", "r"):
            t = f"s{count}"
            count += 1
            edges.append((s, act, t))
            frontier.append((t, d + 1))
    if not edges:
        edges = [("s0", "l", "s1"), ("s0", "r", "s2")]
        turn = {"s0": 1}
    tree = GameTree.build("s0", edges, turn=turn)
    return with_payoffs(tree, rng, tie_free=True)


def random_strategy(rng: random.Random, tree: GameTree, player: int, singleton: bool = False) -> Strategy:
    assignment = {}
    for s, p in tree.turn.items():
        if p != player:
            continue
        acts = sorted(tree.children.get(s, {}))
        if singleton:
            assignment[s] = frozenset({rng.choice(acts)})
        else:
            assignment[s] = frozenset(a for a in acts if rng.random() < 0.5)
    return Strategy(player, assignment)


def random_basic(rng: random.Random, depth: int = 2, actions: Sequence[str] = ACTIONS,
                 props: Sequence[str] = PROPS):
    """A random formula built from propositions, constants, ``~``, ``&`` and diamonds."""
    if depth <= 0 or rng.random() < 0.35:
        r = rng.random()
        if r < 0.1:
            return TRUE if rng.random() < 0.5 else FALSE
        if r < 0.25:
            return Prop(f"turn_{rng.choice((1, 2))}")
        return Prop(rng.choice(props))
    kind = rng.choice(("not", "and", "dia", "dia"))
    if kind == "not":
        return Not(random_basic(rng, depth - 1, actions, props))
    if kind == "and":
        return And(random_basic(rng, depth - 1, actions, props), random_basic(rng, depth - 1, actions, props))
    return Diamond(rng.choice(actions), random_basic(rng, depth - 1, actions, props))


def random_spec(rng: random.Random, player: int, depth: int = 2, actions: Sequence[str] = ACTIONS,
                props: Sequence[str] = PROPS, restrict: bool = True, cond_depth: int = 1):
    if depth <= 0 or rng.random() < 0.4:
        return IfThen(random_basic(rng, cond_depth, actions, props), rng.choice(actions), player)
    kinds = ["either", "both"] + (["restrict", "restrict"] if restrict else [])
    kind = rng.choice(kinds)
    sub = lambda: random_spec(rng, player, depth - 1, actions, props, restrict, cond_depth)  # noqa: E731
    if kind == "either":
        return Either(sub(), sub())
    if kind == "both":
        return Both(sub(), sub())
    return Restrict(sub(), rng.choice(actions), player)


def random_formula(rng: random.Random, max_size: int = 12, actions: Sequence[str] = ACTIONS,
                   props: Sequence[str] = PROPS, restrict: bool = False, ensures: bool = True,
                   require_spec: bool = False):
    """A random well-formed formula of size at most ``max_size`` (rejection sampled)."""
    while True:
        f = _formula(rng, 3, actions, props, restrict, ensures)
        if size(f) > max_size:
            continue
        if require_spec and not _mentions_spec(f):
            continue
        return f


def _mentions_spec(f):
    if isinstance(f, (Suggests, Ensures)):
        return True
    if isinstance(f, (Not, Diamond)):
        return _mentions_spec(f.sub)
    if isinstance(f, And):
        return _mentions_spec(f.left) or _mentions_spec(f.right)
    return False


def _formula(rng, depth, actions, props, restrict, ensures):
    r = rng.random()
    if depth <= 0 or r < 0.2:
        return random_basic(rng, 0, actions, props)
    player = rng.choice((1, 2))
    if r < 0.45:
        spec = random_spec(rng, player, 1, actions, props, restrict, cond_depth=0)
        return Suggests(spec, player, rng.choice(actions))
    if ensures and r < 0.6:
        spec = random_spec(rng, player, 1, actions, props, restrict, cond_depth=0)
        return Ensures(spec, player, random_basic(rng, 1, actions, props))
    kind = rng.choice(("not", "and", "dia"))
    if kind == "not":
        return Not(_formula(rng, depth - 1, actions, props, restrict, ensures))
    if kind == "and":
        return And(_formula(rng, depth - 1, actions, props, restrict, ensures),
                   _formula(rng, depth - 1, actions, props, restrict, ensures))
    return Diamond(rng.choice(actions), _formula(rng, depth - 1, actions, props, restrict, ensures))


def corpus(seed: int, n: int, **kwargs) -> list:
    rng = random.Random(seed)
    return [random_tree(rng, **kwargs) for _ in range(n)]
