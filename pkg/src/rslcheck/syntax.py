"""Abstract syntax for strategy specifications and SL/RSL formulas.

Primitive formula constructors are dataclasses; the derived connectives
(``disj``, ``implies``, ``box``, ...) are plain functions that expand into
primitives, so the checker only ever sees the six core cases plus constants.

Canonical concrete syntax (what ``str()`` prints and the parser reads)::

    formula := true | false | ident | ~formula | (formula & formula)
             | (formula | formula) | <act>formula | [act]formula
             | sug spec : player : act | spec ~> player : formula
    spec    := [formula -> act]^player | (spec + spec) | (spec . spec)
             | (spec ! act)^player
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import SpecError


class Formula:
    __slots__ = ()

    def __str__(self):
        return format_formula(self)


class Spec:
    __slots__ = ()

    def __str__(self):
        return format_spec(self)


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool

    def __repr__(self):
        return "TRUE" if self.value else "FALSE"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    action: str
    sub: Formula


@dataclass(frozen=True)
class Suggests(Formula):
    """``(sigma)_i : a`` -- the specification enables ``a`` here."""

    spec: Spec
    player: int
    action: str


@dataclass(frozen=True)
class Ensures(Formula):
    """``sigma ~>_i psi`` -- following ``sigma``, player ``i`` can ensure ``psi``."""

    spec: Spec
    player: int
    goal: Formula


@dataclass(frozen=True)
class IfThen(Spec):
    condition: Formula
    action: str
    player: int


@dataclass(frozen=True)
class Either(Spec):
    """``sigma + sigma'``."""

    left: Spec
    right: Spec


@dataclass(frozen=True)
class Both(Spec):
    """``sigma . sigma'``."""

    left: Spec
    right: Spec


@dataclass(frozen=True)
class Restrict(Spec):
    """``[sigma ! a]^i``."""

    spec: Spec
    action: str
    player: int


# -- derived connectives -----------------------------------------------------

def neg(f: Formula) -> Formula:
    return Not(f)


def conj(*fs: Formula) -> Formula:
    if not fs:
        return TRUE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Not(And(Not(f), Not(out)))
    return out


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def box(action, f: Formula) -> Formula:
    return Not(Diamond(action, Not(f)))


def some_next(f: Formula, actions: Iterable[str]) -> Formula:
    """``O f``: some move leads to a state satisfying ``f``."""
    return disj(*(Diamond(a, f) for a in sorted(actions)))


def all_next(f: Formula, actions: Iterable[str]) -> Formula:
    return Not(some_next(Not(f), actions))


def turn(player: int) -> Prop:
    return Prop(f"turn_{player}")


def enabled(spec: Spec, player: int, actions: Iterable[str]) -> Formula:
    """``enabled_sigma``: some available move is suggested by ``spec``."""
    return disj(*(And(Diamond(a, TRUE), Suggests(spec, player, a)) for a in sorted(actions)))


def restrict_n(spec: Spec, action, n: int, player=None) -> Spec:
    player = spec_player(spec) if player is None else player
    for _ in range(n):
        spec = Restrict(spec, action, player)
    return spec


# -- structural queries ------------------------------------------------------

def spec_player(spec: Spec) -> int:
    if isinstance(spec, (IfThen, Restrict)):
        return spec.player
    if isinstance(spec, (Either, Both)):
        return spec_player(spec.left)
    raise TypeError(f"not a specification: {spec!r}")


def is_basic(f: Formula) -> bool:
    """True iff ``f`` lies in BF: constants, propositions, negation, conjunction, diamonds."""
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Const, Prop)):
            continue
        if isinstance(g, Not):
            stack.append(g.sub)
        elif isinstance(g, And):
            stack.extend((g.left, g.right))
        elif isinstance(g, Diamond):
            stack.append(g.sub)
        else:
            return False
    return True


def has_restrict(x) -> bool:
    if isinstance(x, Restrict):
        return True
    if isinstance(x, (Either, Both)):
        return has_restrict(x.left) or has_restrict(x.right)
    if isinstance(x, IfThen):
        return False
    if isinstance(x, (Suggests, Ensures)):
        return has_restrict(x.spec) or (isinstance(x, Ensures) and has_restrict(x.goal))
    if isinstance(x, Not):
        return has_restrict(x.sub)
    if isinstance(x, And):
        return has_restrict(x.left) or has_restrict(x.right)
    if isinstance(x, Diamond):
        return has_restrict(x.sub)
    return False


def check_spec(spec: Spec) -> int:
    """Structural invariants of a specification; returns its player."""
    player = spec_player(spec)
    stack = [spec]
    while stack:
        s = stack.pop()
        if isinstance(s, IfThen):
            if s.player != player:
                raise SpecError(f"player annotation mismatch: {s.player} inside a spec for player {player}")
            if not is_basic(s.condition):
                raise SpecError(f"condition {format_formula(s.condition)} is not a basic formula")
        elif isinstance(s, Restrict):
            if s.player != player:
                raise SpecError(f"player annotation mismatch: {s.player} inside a spec for player {player}")
            stack.append(s.spec)
        elif isinstance(s, (Either, Both)):
            stack.extend((s.left, s.right))
        else:
            raise SpecError(f"not a specification: {s!r}")
    return player


def check_formula(f: Formula) -> None:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Const, Prop)):
            continue
        if isinstance(g, Not):
            stack.append(g.sub)
        elif isinstance(g, And):
            stack.extend((g.left, g.right))
        elif isinstance(g, Diamond):
            stack.append(g.sub)
        elif isinstance(g, (Suggests, Ensures)):
            if check_spec(g.spec) != g.player:
                raise SpecError(f"formula annotated with player {g.player} uses a spec for player {spec_player(g.spec)}")
            if isinstance(g, Ensures) and not is_basic(g.goal):
                raise SpecError(f"ensured goal {format_formula(g.goal)} is not a basic formula")
        else:
            raise SpecError(f"not a formula: {g!r}")


def specs_in(f: Formula) -> list:
    """Specifications occurring at formula level (not inside spec conditions), in order."""
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Not):
            stack.append(g.sub)
        elif isinstance(g, And):
            stack.extend((g.right, g.left))
        elif isinstance(g, Diamond):
            stack.append(g.sub)
        elif isinstance(g, (Suggests, Ensures)):
            out.append(g.spec)
    return out


# -- printing and size -------------------------------------------------------

def format_formula(f: Formula) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Not):
        return "~" + format_formula(f.sub)
    if isinstance(f, And):
        return f"({format_formula(f.left)} & {format_formula(f.right)})"
    if isinstance(f, Diamond):
        return f"<{f.action}>{format_formula(f.sub)}"
    if isinstance(f, Suggests):
        return f"sug {format_spec(f.spec)} : {f.player} : {f.action}"
    if isinstance(f, Ensures):
        return f"{format_spec(f.spec)} ~> {f.player} : {format_formula(f.goal)}"
    raise TypeError(f"not a formula: {f!r}")


def format_spec(s: Spec) -> str:
    if isinstance(s, IfThen):
        return f"[{format_formula(s.condition)} -> {s.action}]^{s.player}"
    if isinstance(s, Either):
        return f"({format_spec(s.left)} + {format_spec(s.right)})"
    if isinstance(s, Both):
        return f"({format_spec(s.left)} . {format_spec(s.right)})"
    if isinstance(s, Restrict):
        return f"({format_spec(s.spec)} ! {s.action})^{s.player}"
    raise TypeError(f"not a specification: {s!r}")


def size(x, _memo=None) -> int:
    """Length of a formula or spec: one per constructor plus one per bracket pair printed.

    Shared subterms are counted once per occurrence (tree size), but computed
    once, so this stays cheap on heavily shared reduction output.
    """
    memo = {} if _memo is None else _memo
    key = id(x)
    if key in memo:
        return memo[key]
    if isinstance(x, (Const, Prop)):
        n = 1
    elif isinstance(x, Not):
        n = 1 + size(x.sub, memo)
    elif isinstance(x, And):
        n = 2 + size(x.left, memo) + size(x.right, memo)
    elif isinstance(x, Diamond):
        n = 2 + size(x.sub, memo)
    elif isinstance(x, Suggests):
        n = 1 + size(x.spec, memo)
    elif isinstance(x, Ensures):
        n = 1 + size(x.spec, memo) + size(x.goal, memo)
    elif isinstance(x, IfThen):
        n = 2 + size(x.condition, memo)
    elif isinstance(x, (Either, Both)):
        n = 2 + size(x.left, memo) + size(x.right, memo)
    elif isinstance(x, Restrict):
        n = 2 + size(x.spec, memo)
    else:
        raise TypeError(f"cannot measure {x!r}")
    memo[key] = n
    return n
