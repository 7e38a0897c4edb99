"""Finite two-player extensive-form game trees and set-valued strategies.

A :class:`GameTree` is an immutable value.  Nothing here validates on
construction; :func:`validate_model` reports invariant violations as a list of
:class:`Diagnostic` so that callers (the parser, tests) decide what to do.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .errors import EmptyComponentError, IncompleteStrategyError, UnknownStateError

PLAYERS = (1, 2)
RESERVED_PROPS = frozenset({"turn_1", "turn_2"})


def opponent(player: int) -> int:
    return 3 - player


@dataclass(frozen=True)
class GameTree:
    states: frozenset
    root: str
    edges: Mapping[tuple, str]
    turn: Mapping[str, int]
    actions: frozenset
    valuation: Mapping[str, frozenset]
    payoffs: Optional[Mapping[str, tuple]] = None

    @classmethod
    def build(cls, root, edges=(), turn=None, props=None, payoffs=None,
              states=None, actions=None):
        """Convenience constructor.

        ``edges`` is an iterable of ``(src, action, dst)`` triples, ``props`` a
        mapping from state to an iterable of proposition names.  ``states`` and
        ``actions`` default to whatever the edges mention.
        """
        edge_map = {}
        seen = [root]
        for src, act, dst in edges:
            edge_map[(src, act)] = dst
            seen.extend((src, dst))
        if states is not None:
            seen.extend(states)
        all_states = frozenset(seen)
        alphabet = frozenset(a for (_, a) in edge_map) if actions is None else frozenset(actions)
        props = props or {}
        valuation = {s: frozenset(props.get(s, ())) for s in all_states}
        return cls(
            states=all_states,
            root=root,
            edges=edge_map,
            turn=dict(turn or {}),
            actions=alphabet,
            valuation=valuation,
            payoffs=None if payoffs is None else {s: tuple(v) for s, v in payoffs.items()},
        )

    # derived structure, computed lazily and cached on the instance

    @cached_property
    def children(self) -> dict:
        out = {s: {} for s in self.states}
        for (src, act), dst in self.edges.items():
            out.setdefault(src, {})[act] = dst
        return out

    @cached_property
    def parent(self) -> dict:
        """Map child -> (parent, action).  Only meaningful on a well-formed tree."""
        return {dst: (src, act) for (src, act), dst in self.edges.items()}

    @cached_property
    def depth(self) -> dict:
        depth = {self.root: 0}
        queue = deque([self.root])
        while queue:
            s = queue.popleft()
            for t in self.children.get(s, {}).values():
                if t not in depth:
                    depth[t] = depth[s] + 1
                    queue.append(t)
        return depth

    @cached_property
    def height(self) -> int:
        return max(self.depth.values(), default=0)

    def is_leaf(self, s) -> bool:
        return not self.children.get(s)

    @cached_property
    def leaves(self) -> frozenset:
        return frozenset(s for s in self.states if not self.children.get(s))

    def successor(self, s, action):
        return self.edges.get((s, action))

    def props_at(self, s) -> frozenset:
        return self.valuation.get(s, frozenset())

    def ordered_states(self) -> list:
        """States in breadth-first order from the root, then any stragglers."""
        order = sorted(self.depth, key=lambda s: (self.depth[s], natural_key(s)))
        rest = sorted(self.states - set(order), key=natural_key)
        return order + rest

    def descendants(self, s) -> list:
        """``s`` and every state below it (pre-order)."""
        out, stack = [], [s]
        while stack:
            t = stack.pop()
            out.append(t)
            stack.extend(self.children.get(t, {}).values())
        return out

    def path_from_root(self, s) -> list:
        path = [s]
        while path[-1] != self.root:
            if path[-1] not in self.parent:
                break
            path.append(self.parent[path[-1]][0])
        return path[::-1]


def natural_key(name):
    """Sort key that orders ``s2`` before ``s10``."""
    import re

    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", str(name))]


@dataclass(frozen=True)
class Strategy:
    """Set-valued strategy ``mu : S^i -> 2^Sigma``.

    Functional (SL) strategies are the singleton-valued special case.
    """

    player: int
    assignment: Mapping[str, frozenset] = field(default_factory=dict)

    @classmethod
    def of(cls, player, assignment):
        return cls(player, {s: frozenset(acts) for s, acts in assignment.items()})

    def outr(self, s) -> frozenset:
        """Moves returned at ``s``; raises if ``s`` is not in the domain."""
        try:
            return self.assignment[s]
        except KeyError:
            raise IncompleteStrategyError(s, self.player) from None

    def is_functional(self) -> bool:
        return all(len(v) == 1 for v in self.assignment.values())


def _require_state(tree: GameTree, s):
    if s not in tree.states:
        raise UnknownStateError(s)


def moves(tree: GameTree, s) -> frozenset:
    _require_state(tree, s)
    return frozenset(tree.children.get(s, {}))


def restrict_strategy(mu: Strategy, action) -> Strategy:
    """The updated strategy ``mu!a``: ``a`` removed from every value."""
    return Strategy(mu.player, {s: acts - {action} for s, acts in mu.assignment.items()})


def subtree(tree: GameTree, root, kept_edges: Iterable[tuple]) -> GameTree:
    """Tree rooted at ``root`` made of the given ``(src, action)`` edges reachable from it.

    Turn, valuation and payoffs are restricted to the surviving states; the
    turn of a state that lost all its edges is dropped too, so leaves never
    carry a turn.
    """
    kept = set(kept_edges)
    edges = {}
    states = {root}
    stack = [root]
    while stack:
        s = stack.pop()
        for act, t in tree.children.get(s, {}).items():
            if (s, act) in kept:
                edges[(s, act)] = t
                states.add(t)
                stack.append(t)
    internal = {src for (src, _) in edges}
    return GameTree(
        states=frozenset(states),
        root=root,
        edges=edges,
        turn={s: p for s, p in tree.turn.items() if s in internal},
        actions=tree.actions,
        valuation={s: tree.props_at(s) for s in states},
        payoffs=None if tree.payoffs is None else
        {s: v for s, v in tree.payoffs.items() if s in states},
    )


def strategy_tree(tree: GameTree, mu: Strategy) -> GameTree:
    """The least subtree containing the root that follows ``mu`` at its player's states."""
    kept = []
    stack = [tree.root]
    while stack:
        s = stack.pop()
        kids = tree.children.get(s, {})
        if not kids:
            continue
        if tree.turn.get(s) == mu.player:
            allowed = mu.outr(s)
            chosen = [a for a in kids if a in allowed]
        else:
            chosen = list(kids)
        for a in chosen:
            kept.append((s, a))
            stack.append(kids[a])
    return subtree(tree, tree.root, kept)


def restricted_strategy_tree(tree: GameTree, mu: Strategy, action, s) -> GameTree:
    """Connected component containing ``s`` of ``T_mu`` with the player's ``action`` edges cut.

    Only the restricted player's edges labelled ``action`` are removed;
    opponent edges with the same label stay.  The component is returned as a
    tree rooted at its topmost state.
    """
    _require_state(tree, s)
    base = strategy_tree(tree, mu)
    if s not in base.states:
        raise EmptyComponentError(f"state {s!r} is not in the strategy tree of player {mu.player}")

    def kept(src, act):
        return (src, act) in base.edges and not (act == action and base.turn.get(src) == mu.player)

    top = s
    while top != base.root:
        src, act = base.parent[top]
        if not kept(src, act):
            break
        top = src
    edges = [(src, act) for (src, act) in base.edges if kept(src, act)]
    return subtree(base, top, edges)


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    state: Optional[str] = None

    def __str__(self):
        return f"{self.kind}: {self.message}"


def validate_model(tree: GameTree, strategies: Iterable[Strategy] = ()) -> list:
    """Every invariant violation of ``tree``; empty iff it is a well-formed game tree.

    Strategies passed along are checked against the tree too: moves must be
    available where assigned and the domain must lie in the player's states.
    """
    diags = []
    for mu in strategies:
        diags.extend(validate_strategy(tree, mu))
    if tree.root not in tree.states:
        diags.append(Diagnostic("unknown-root", f"root {tree.root!r} is not a declared state", tree.root))
    for (src, act), dst in tree.edges.items():
        for end in (src, dst):
            if end not in tree.states:
                diags.append(Diagnostic("unknown-state", f"edge {src} {act} {dst} mentions undeclared {end!r}", end))
        if act not in tree.actions:
            diags.append(Diagnostic("unknown-action", f"edge label {act!r} is not in the alphabet", src))

    incoming = {}
    for (src, _), dst in tree.edges.items():
        incoming.setdefault(dst, []).append(src)

    # cycles: depth-first search from the root looking for back edges
    colour = {}
    cycles = set()
    if tree.root in tree.states:
        stack = [(tree.root, iter(sorted(tree.children.get(tree.root, {}).items())))]
        colour[tree.root] = "grey"
        while stack:
            s, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[s] = "black"
                stack.pop()
                continue
            act, t = nxt
            if colour.get(t) == "grey":
                cycles.add((s, act, t))
            elif t not in colour:
                colour[t] = "grey"
                stack.append((t, iter(sorted(tree.children.get(t, {}).items()))))
    for src, act, dst in sorted(cycles):
        diags.append(Diagnostic("cycle", f"edge {src} {act} {dst} closes a cycle", dst))

    for dst, srcs in sorted(incoming.items(), key=lambda kv: natural_key(kv[0])):
        cyclic_srcs = {src for (src, _, d) in cycles if d == dst}
        if dst == tree.root:
            extra = [src for src in srcs if src not in cyclic_srcs]
            if extra:
                diags.append(Diagnostic("root-parent", f"root {dst!r} has an incoming edge from {extra[0]!r}", dst))
        elif len(srcs) > 1:
            diags.append(Diagnostic("multiple-parents", f"state {dst!r} has {len(srcs)} incoming edges", dst))

    for s in sorted(tree.states - set(colour), key=natural_key):
        diags.append(Diagnostic("unreachable", f"state {s!r} is not reachable from the root", s))

    for s in sorted(tree.states, key=natural_key):
        has_moves = bool(tree.children.get(s))
        if s in tree.turn:
            if tree.turn[s] not in PLAYERS:
                diags.append(Diagnostic("bad-player", f"turn at {s!r} is {tree.turn[s]!r}, expected 1 or 2", s))
            if not has_moves:
                diags.append(Diagnostic("turn-on-leaf", f"leaf {s!r} has a turn assignment", s))
        elif has_moves:
            diags.append(Diagnostic("missing-turn", f"internal state {s!r} has no turn assignment", s))
        reserved = tree.props_at(s) & RESERVED_PROPS
        if reserved:
            diags.append(Diagnostic("reserved-prop", f"state {s!r} is labelled with reserved {sorted(reserved)}", s))
    for s in tree.turn:
        if s not in tree.states:
            diags.append(Diagnostic("unknown-state", f"turn assigned to undeclared {s!r}", s))
    for s in tree.valuation:
        if s not in tree.states:
            diags.append(Diagnostic("unknown-state", f"propositions attached to undeclared {s!r}", s))

    if tree.payoffs is not None:
        for s, value in sorted(tree.payoffs.items(), key=lambda kv: natural_key(kv[0])):
            if s not in tree.states:
                diags.append(Diagnostic("unknown-state", f"payoff attached to undeclared {s!r}", s))
            elif tree.children.get(s):
                diags.append(Diagnostic("misplaced-payoff", f"payoff attached to internal state {s!r}", s))
            if len(value) != 2 or not all(isinstance(v, int) for v in value):
                diags.append(Diagnostic("bad-payoff", f"payoff at {s!r} must be two integers", s))
        for s in sorted(tree.states, key=natural_key):
            if not tree.children.get(s) and s not in tree.payoffs:
                diags.append(Diagnostic("missing-payoff", f"leaf {s!r} has no payoff", s))
    return diags


def validate_strategy(tree: GameTree, mu: Strategy) -> list:
    diags = []
    for s in sorted(mu.assignment, key=natural_key):
        if s not in tree.states:
            diags.append(Diagnostic("unknown-state", f"strategy assigns moves at undeclared {s!r}", s))
            continue
        if tree.turn.get(s) != mu.player:
            diags.append(Diagnostic("foreign-state", f"player {mu.player} does not move at {s!r}", s))
        extra = mu.assignment[s] - set(tree.children.get(s, {}))
        if extra:
            diags.append(Diagnostic("unavailable-move",
                                    f"moves {sorted(extra)} assigned at {s!r} are not available there", s))
    return diags


def remove_player_moves(tree: GameTree, player, action) -> GameTree:
    """Copy of ``tree`` with every ``action`` edge at ``player``'s states deleted (subtrees go too)."""
    kept = [(s, a) for (s, a) in tree.edges if not (a == action and tree.turn.get(s) == player)]
    return subtree(tree, tree.root, kept)
