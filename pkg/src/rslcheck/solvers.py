"""Backward induction, the centipede game and the rationality specifications."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import SolverError, DeadEndError
from .game import GameTree, Strategy, natural_key, opponent
from .syntax import Diamond, IfThen, Prop, conj, disj


@dataclass(frozen=True)
class Restriction:
    player: int
    action: str
    from_state: str = None  # None: from the root down

    @classmethod
    def coerce(cls, r):
        if isinstance(r, Restriction):
            return r
        return cls(*r)


@dataclass(frozen=True)
class BIResult:
    profile: tuple          # (Strategy for player 1, Strategy for player 2)
    outcome: tuple          # payoff pair at the reached leaf
    leaf: str
    choices: dict           # state -> frozenset of maximizing moves
    values: dict            # state -> payoff pair propagated upward

    def path(self, model: GameTree) -> list:
        """States visited when every owner plays the first chosen move."""
        out = [model.root]
        while out[-1] in self.choices:
            act = min(self.choices[out[-1]], key=natural_key)
            out.append(model.edges[(out[-1], act)])
        return out

    def as_dict(self, model: GameTree):
        return {
            "choices": {s: sorted(self.choices[s], key=natural_key)
                        for s in sorted(self.choices, key=natural_key)},
            "owners": {s: model.turn[s] for s in sorted(self.choices, key=natural_key)},
            "path": self.path(model),
            "leaf": self.leaf,
            "outcome": list(self.outcome),
        }


def _banned(model, restrictions, s):
    owner = model.turn.get(s)
    out = set()
    for r in restrictions:
        if r.player != owner:
            continue
        if r.from_state is None or r.from_state in model.path_from_root(s):
            out.add(r.action)
    return out


def backward_induction(model: GameTree, restrictions: Iterable = ()) -> BIResult:
    """Solve ``model`` bottom-up.

    Each owner keeps every legal move that maximizes their own component of
    the child's value (ties keep all of them).  The value passed upward is
    the one of the first maximizer in natural action order.
    """
    rs = [Restriction.coerce(r) for r in restrictions]
    for r in rs:
        if r.from_state is not None and r.from_state not in model.states:
            raise SolverError(f"restriction refers to unknown state {r.from_state!r}")
    payoffs = model.payoffs or {}
    missing = sorted((s for s in model.leaves if s not in payoffs), key=natural_key)
    if missing:
        raise SolverError(f"leaf {missing[0]!r} has no payoff")

    # only states reachable through legal moves take part
    order, legal_at, stack = [], {}, [model.root]
    while stack:
        s = stack.pop()
        order.append(s)
        kids = model.children.get(s, {})
        if kids:
            banned = _banned(model, rs, s)
            legal_at[s] = sorted((a for a in kids if a not in banned), key=natural_key)
            if not legal_at[s]:
                raise DeadEndError(s)
            stack.extend(kids[a] for a in legal_at[s])

    values, leaf_of, choices = {}, {}, {}
    for s in reversed(order):
        kids = model.children.get(s, {})
        if not kids:
            values[s], leaf_of[s] = tuple(payoffs[s]), s
            continue
        owner = model.turn[s]
        legal = legal_at[s]
        best = max(values[kids[a]][owner - 1] for a in legal)
        top = [a for a in legal if values[kids[a]][owner - 1] == best]
        choices[s] = frozenset(top)
        values[s], leaf_of[s] = values[kids[top[0]]], leaf_of[kids[top[0]]]

    profile = tuple(
        Strategy(p, {s: acts for s, acts in choices.items() if model.turn[s] == p})
        for p in (1, 2)
    )
    return BIResult(profile, values[model.root], leaf_of[model.root], choices, values)


CENTIPEDE_PAYOFFS = {
    "s6": (1, 0), "s7": (0, 2), "s8": (3, 1), "s9": (2, 4), "s10": (5, 2), "s5": (4, 6),
}


def centipede() -> GameTree:
    """The five-move centipede game: ``s_k -a-> s_{k+1}``, ``s_k -d-> s_{6+k}``."""
    edges, turn, props = [], {}, {}
    for k in range(5):
        s = f"s{k}"
        edges.append((s, "a", f"s{k + 1}"))
        edges.append((s, "d", f"s{6 + k}"))
        turn[s] = 1 if k % 2 == 0 else 2
        props[s] = {f"r{turn[s]}"}
    return GameTree.build("s0", edges, turn=turn, props=props, payoffs=CENTIPEDE_PAYOFFS)


def rationality_condition(player: int, k: int):
    """``r_i`` nested ``k`` times with the opponent's condition one move ahead."""
    if k < 0:
        raise ValueError("depth must be non-negative")
    cond = Prop(f"r{player if k % 2 == 0 else opponent(player)}")
    for level in range(1, k + 1):
        who = player if (k - level) % 2 == 0 else opponent(player)
        cond = conj(Prop(f"r{who}"), disj(Diamond("a", cond), Diamond("d", cond)))
    return cond


def rationality_spec(model: GameTree, player: int, k: int) -> IfThen:
    if set(model.actions) != {"a", "d"}:
        raise SolverError(f"rationality specs need the alphabet {{a, d}}, got {sorted(model.actions)}")
    return IfThen(rationality_condition(player, k), "d", player)
