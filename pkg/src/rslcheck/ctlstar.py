"""Multi-modal CTL* over finite trees and the translation of SL/RSL into it.

Paths are maximal branches of the tree.  On a branch ``pi``:

* ``X:a f`` holds iff the branch continues with an ``a`` edge and ``f`` holds
  on the remaining suffix (false at the last state);
* ``G f`` holds iff ``f`` holds on every suffix, the final single-state suffix
  included;
* a state formula holds iff it holds at the first state.

At state level ``E f`` asks for some maximal branch from the state.  A bare
path operator written at state level (``X:a f`` or ``G f`` not under ``E``)
is read existentially, i.e. as ``E X:a f`` / ``E G f``; on a tree ``X:a`` has
at most one successor, so this is the PDL reading of ``<a>``.

Translation notes (``literal=False``, the default):

* ``<a>phi`` becomes ``X:a`` at state level and ``E X:a`` inside a path
  context, so a modal subformula keeps its state reading under ``G``.
* ``(sigma)_i:c`` becomes ``X:c true`` when ``c`` is enabled and available,
  ``true`` when enabled but not available at ``s``, ``false`` otherwise.
* ``sigma ~>_i psi`` becomes ``~E~G(strategy -> (psi & (turn_i -> enabled)))``
  with ``strategy`` labelling ``T_s|sigma``: every state reachable under the
  spec, not just one branch.
* ``tr([psi -> a]^i)`` is ``(turn_i & psi) -> E(strategy & X:a strategy)``.

``literal=True`` emits the textbook forms instead (``X:a`` everywhere,
``X:c true`` for every enabled ``c``, ``E G(strategy & ...)``,
``psi -> E(strategy & X:a true)``); :func:`xcheck` reports where they
disagree with the SL checker.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

from . import checker, specs
from .errors import TranslationError, UnknownStateError
from .game import GameTree, Strategy, natural_key, strategy_tree
from .syntax import (
    And, Both, Const, Diamond, Either, Ensures, Formula, IfThen, Not, Prop, Restrict,
    Spec, Suggests, has_restrict, spec_player, specs_in,
)


class CtlFormula:
    __slots__ = ()

    def __str__(self):
        return format_ctl(self)


@dataclass(frozen=True, repr=False)
class CConst(CtlFormula):
    value: bool

    def __repr__(self):
        return "CTOP" if self.value else "CBOT"


CTOP = CConst(True)
CBOT = CConst(False)


@dataclass(frozen=True)
class CProp(CtlFormula):
    name: str


@dataclass(frozen=True)
class CNot(CtlFormula):
    sub: CtlFormula


@dataclass(frozen=True)
class CAnd(CtlFormula):
    left: CtlFormula
    right: CtlFormula


@dataclass(frozen=True)
class NextAct(CtlFormula):
    action: str
    sub: CtlFormula


@dataclass(frozen=True)
class PathExists(CtlFormula):
    sub: CtlFormula


@dataclass(frozen=True)
class Always(CtlFormula):
    sub: CtlFormula


def c_or(a, b):
    return CNot(CAnd(CNot(a), CNot(b)))


def c_implies(a, b):
    return CNot(CAnd(a, CNot(b)))


def format_ctl(f: CtlFormula) -> str:
    if isinstance(f, CConst):
        return "true" if f.value else "false"
    if isinstance(f, CProp):
        return f.name
    if isinstance(f, CNot):
        return "~" + format_ctl(f.sub)
    if isinstance(f, CAnd):
        return f"({format_ctl(f.left)} & {format_ctl(f.right)})"
    if isinstance(f, NextAct):
        return f"X:{f.action} {format_ctl(f.sub)}"
    if isinstance(f, PathExists):
        return f"E {format_ctl(f.sub)}"
    if isinstance(f, Always):
        return f"G {format_ctl(f.sub)}"
    raise TypeError(f"not a CTL* formula: {f!r}")


def ctl_size(f: CtlFormula) -> int:
    """Constructors plus parenthesis pairs, as printed by :func:`format_ctl`."""
    if isinstance(f, (CConst, CProp)):
        return 1
    if isinstance(f, CAnd):
        return 2 + ctl_size(f.left) + ctl_size(f.right)
    if isinstance(f, (CNot, NextAct, PathExists, Always)):
        return 1 + ctl_size(f.sub)
    raise TypeError(f"not a CTL* formula: {f!r}")


def ctl_depth(f: CtlFormula) -> int:
    if isinstance(f, (CConst, CProp)):
        return 1
    if isinstance(f, CAnd):
        return 1 + max(ctl_depth(f.left), ctl_depth(f.right))
    return 1 + ctl_depth(f.sub)


# -- models -----------------------------------------------------------------------

@dataclass(frozen=True)
class CtlStarModel:
    states: frozenset
    root: str
    relations: Mapping[str, Mapping[str, str]]
    valuation: Mapping[str, frozenset]

    @cached_property
    def succ(self) -> dict:
        out = {s: [] for s in self.states}
        for act in sorted(self.relations, key=natural_key):
            for src, dst in self.relations[act].items():
                out[src].append((act, dst))
        return out

    def union_edges(self) -> set:
        return {(src, act, dst) for act, rel in self.relations.items() for src, dst in rel.items()}


def to_ctlstar_model(model: GameTree, tagged: Iterable = (), atoms: Optional[Mapping] = None) -> CtlStarModel:
    """Curry the edge function into one relation per action and add the generated labels.

    ``tagged`` is a sequence of ``(tag, subtree)`` pairs; ``strategy_<tag>``
    is made true exactly on each subtree's states.  ``atoms`` maps further
    generated proposition names to the state sets they hold on.
    """
    relations = {a: {} for a in model.actions}
    for (src, act), dst in model.edges.items():
        relations.setdefault(act, {})[src] = dst
    labels = {s: set(model.props_at(s)) for s in model.states}
    for s, p in model.turn.items():
        if model.children.get(s):
            labels[s].add(f"turn_{p}")
    existing = set().union(*labels.values()) if labels else set()
    generated = set()

    def claim(name):
        if name in existing or name in generated:
            raise TranslationError(f"generated proposition {name!r} collides with an existing one")
        generated.add(name)

    for tag, sub in tagged:
        name = f"strategy_{tag}"
        claim(name)
        if not sub.states <= model.states or not set(sub.edges.items()) <= set(model.edges.items()):
            raise TranslationError(f"tagged tree {tag!r} is not a subtree of the model")
        for s in sub.states:
            labels[s].add(name)
    for name, where in (atoms or {}).items():
        claim(name)
        for s in where:
            labels[s].add(name)
    return CtlStarModel(
        states=model.states,
        root=model.root,
        relations=relations,
        valuation={s: frozenset(v) for s, v in labels.items()},
    )


def format_ctl_model(m: CtlStarModel) -> str:
    order = sorted(m.states, key=natural_key)
    out = [f"state {s}" for s in order]
    out.append(f"root {m.root}")
    for act in sorted(m.relations, key=natural_key):
        for src in sorted(m.relations[act], key=natural_key):
            out.append(f"rel {act} {src} {m.relations[act][src]}")
    for s in order:
        if m.valuation.get(s):
            out.append(f"label {s} " + " ".join(sorted(m.valuation[s])))
    return "\n".join(out) + "\n"


# -- evaluation -------------------------------------------------------------------

class _Evaluator:
    def __init__(self, m: CtlStarModel):
        self.m = m
        self._branches = {}
        self._state_cache = {}
        self.depth = 0
        self.max_depth = 0
        self.max_branch = 0

    def branches(self, s):
        if s not in self._branches:
            out = []
            stack = [((s,), ())]
            while stack:
                states, labels = stack.pop()
                nxt = self.m.succ[states[-1]]
                if not nxt:
                    out.append((states, labels))
                    continue
                for act, t in reversed(nxt):
                    stack.append((states + (t,), labels + (act,)))
            self._branches[s] = out
            self.max_branch = max(self.max_branch, max(len(b[0]) for b in out))
        return self._branches[s]

    def _enter(self):
        self.depth += 1
        self.max_depth = max(self.max_depth, self.depth)

    def state(self, s, f):
        key = (id(f), s)
        if key in self._state_cache:
            return self._state_cache[key][1]
        self._enter()
        try:
            value = self._state(s, f)
        finally:
            self.depth -= 1
        self._state_cache[key] = (f, value)  # keep f alive so its id stays unique
        return value

    def _state(self, s, f):
        if isinstance(f, CConst):
            return f.value
        if isinstance(f, CProp):
            return f.name in self.m.valuation.get(s, ())
        if isinstance(f, CNot):
            return not self.state(s, f.sub)
        if isinstance(f, CAnd):
            return self.state(s, f.left) and self.state(s, f.right)
        if isinstance(f, PathExists):
            return any(self.path(b, 0, f.sub) for b in self.branches(s))
        if isinstance(f, (NextAct, Always)):
            return any(self._path(b, 0, f) for b in self.branches(s))
        raise TypeError(f"not a CTL* formula: {f!r}")

    def path(self, branch, k, f):
        if isinstance(f, (CConst, CProp, PathExists)):
            return self.state(branch[0][k], f)
        self._enter()
        try:
            return self._path(branch, k, f)
        finally:
            self.depth -= 1

    def _path(self, branch, k, f):
        states, labels = branch
        if isinstance(f, CNot):
            return not self.path(branch, k, f.sub)
        if isinstance(f, CAnd):
            return self.path(branch, k, f.left) and self.path(branch, k, f.right)
        if isinstance(f, NextAct):
            return k < len(labels) and labels[k] == f.action and self.path(branch, k + 1, f.sub)
        if isinstance(f, Always):
            return all(self.path(branch, j, f.sub) for j in range(k, len(states)))
        raise TypeError(f"not a CTL* formula: {f!r}")


def ctlstar_check(m: CtlStarModel, s, f: CtlFormula, stats: Optional[dict] = None) -> bool:
    if s not in m.states:
        raise UnknownStateError(s)
    ev = _Evaluator(m)
    value = ev.state(s, f)
    if stats is not None:
        stats["max_depth"] = ev.max_depth
        stats["max_branch"] = ev.max_branch
    return value


# -- translations -----------------------------------------------------------------

@dataclass(frozen=True)
class Translation:
    formula: CtlFormula
    tagged: tuple = ()
    atoms: Mapping[str, frozenset] = field(default_factory=dict)

    def model(self, model: GameTree) -> CtlStarModel:
        return to_ctlstar_model(model, self.tagged, self.atoms)


class _Translator:
    def __init__(self, model, tag, semantics, literal):
        self.model = model
        self.tag = tag
        self.semantics = semantics
        self.literal = literal
        self.tagged = []
        self.atoms = {}
        self._plain = None

    def fresh(self):
        return f"{self.tag}{len(self.tagged)}"

    def tr(self, phi, s, path_ctx=False):
        if isinstance(phi, Const):
            return CTOP if phi.value else CBOT
        if isinstance(phi, Prop):
            return CProp(phi.name)
        if isinstance(phi, Not):
            return CNot(self.tr(phi.sub, s, path_ctx))
        if isinstance(phi, And):
            return CAnd(self.tr(phi.left, s, path_ctx), self.tr(phi.right, s, path_ctx))
        if isinstance(phi, Diamond):
            t = None if s is None else self.model.edges.get((s, phi.action))
            if self.literal:
                return NextAct(phi.action, self.tr(phi.sub, t))
            step = NextAct(phi.action, self.tr(phi.sub, t, path_ctx=True))
            return PathExists(step) if path_ctx else step
        if isinstance(phi, Suggests):
            return self.suggests(phi, s, path_ctx)
        if isinstance(phi, Ensures):
            return self.ensures(phi, s)
        raise TranslationError(f"cannot translate {phi!r}")

    def suggests(self, phi, s, path_ctx=False):
        if s is None:
            return CBOT
        sigma = specs._enabled(self.model, phi.spec, s, self.semantics)
        c = phi.action
        if c not in sigma:
            return CBOT
        if self.literal:
            return NextAct(c, CTOP)
        if c in self.model.children.get(s, {}):
            step = NextAct(c, CTOP)
            return PathExists(step) if path_ctx else step
        return CTOP

    def enabled_states(self, spec, player):
        m = self.plain_model()
        out = set()
        for u in self.model.states:
            for a in sorted(self.model.actions):
                probe = CAnd(NextAct(a, CTOP), self.suggests(Suggests(spec, player, a), u))
                if ctlstar_check(m, u, probe):
                    out.add(u)
                    break
        return frozenset(out)

    def plain_model(self):
        if self._plain is None:
            self._plain = to_ctlstar_model(self.model)
        return self._plain

    def ensures(self, phi, s):
        if s is None:
            return CBOT
        name = self.fresh()
        pruned = checker.pruned_tree(self.model, s, phi.spec, phi.player, self.semantics)
        self.tagged.append((name, pruned))
        self.atoms[f"enabled_{name}"] = self.enabled_states(phi.spec, phi.player)
        strategy = CProp(f"strategy_{name}")
        guard = c_implies(CProp(f"turn_{phi.player}"), CProp(f"enabled_{name}"))
        if self.literal:
            goal = self.tr(phi.goal, None)
            return PathExists(Always(CAnd(strategy, CAnd(goal, guard))))
        goal = self.tr(phi.goal, None, path_ctx=True)
        return CNot(PathExists(CNot(Always(c_implies(strategy, CAnd(goal, guard))))))


def tr_formula(model: GameTree, s, phi: Formula, tag: str = "sigma", *,
               semantics: str = specs.SET_MINUS, literal: bool = False) -> Translation:
    """Per-state translation ``Tr`` of ``phi`` at ``s``, with the labels it needs."""
    if s not in model.states:
        raise UnknownStateError(s)
    t = _Translator(model, tag, semantics, literal)
    f = t.tr(phi, s)
    return Translation(f, tuple(t.tagged), dict(t.atoms))


def tr_basic(phi: Formula, literal: bool = False) -> CtlFormula:
    """Model-free translation of a basic formula (no suggestions, no ensures)."""
    t = _Translator(None, "_", specs.SET_MINUS, literal)
    return t.tr(phi, None)


def tr_spec(spec: Spec, tag: str = "mu", literal: bool = False) -> CtlFormula:
    if isinstance(spec, IfThen):
        strategy = CProp(f"strategy_{tag}")
        cond = tr_basic(spec.condition, literal)
        if literal:
            return c_implies(cond, PathExists(CAnd(strategy, NextAct(spec.action, CTOP))))
        premise = CAnd(CProp(f"turn_{spec.player}"), cond)
        return c_implies(premise, PathExists(CAnd(strategy, NextAct(spec.action, strategy))))
    if isinstance(spec, Either):
        return c_or(tr_spec(spec.left, tag, literal), tr_spec(spec.right, tag, literal))
    if isinstance(spec, Both):
        return CAnd(tr_spec(spec.left, tag, literal), tr_spec(spec.right, tag, literal))
    if isinstance(spec, Restrict):
        raise TranslationError("tr is defined for SL specifications only; reduce restrictions first")
    raise TranslationError(f"not a specification: {spec!r}")


# -- cross-validation -------------------------------------------------------------

@dataclass
class XcheckReport:
    formula: str
    agree: int = 0
    disagree: list = field(default_factory=list)
    spec_agree: int = 0
    spec_disagree: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagree and not self.spec_disagree

    def as_dict(self):
        return {
            "formula": self.formula,
            "agree": self.agree,
            "disagree": [{"state": s, "checker": a, "ctlstar": b} for s, a, b in self.disagree],
            "spec_agree": self.spec_agree,
            "spec_disagree": [
                {"spec": sp, "strategy": st, "state": s, "conforms": a, "ctlstar": b}
                for sp, st, s, a, b in self.spec_disagree
            ],
            "ok": self.ok,
        }


def spec_translation_agrees(model: GameTree, mu: Strategy, spec: Spec, literal: bool = False):
    """Compare ``conforms`` with ``tr(spec)`` on the mu-tagged model at every state of ``T_mu``.

    Returns ``(agreements, [(state, conforms, ctlstar), ...])``.
    """
    t_mu = strategy_tree(model, mu)
    m = to_ctlstar_model(model, [("mu", t_mu)])
    f = tr_spec(spec, "mu", literal)
    agree, bad = 0, []
    ev = _Evaluator(m)
    for s in sorted(t_mu.states, key=natural_key):
        lhs = specs.conforms(model, mu, s, spec)
        rhs = ev.state(s, f)
        if lhs == rhs:
            agree += 1
        else:
            bad.append((s, lhs, rhs))
    return agree, bad


def xcheck(model: GameTree, phi: Formula, *, semantics: str = specs.SET_MINUS,
           literal: bool = False, max_strategies: int = 8, seed: int = specs.DEFAULT_SEED) -> XcheckReport:
    """Compare the SL checker with the CTL* oracle at every state of ``model``."""
    report = XcheckReport(str(phi))
    for s in model.ordered_states():
        lhs = checker.check(model, s, phi, semantics)
        tr = tr_formula(model, s, phi, semantics=semantics, literal=literal)
        rhs = ctlstar_check(tr.model(model), s, tr.formula)
        if lhs == rhs:
            report.agree += 1
        else:
            report.disagree.append((s, lhs, rhs))

    rng = random.Random(seed)
    for spec in specs_in(phi):
        if has_restrict(spec):
            continue
        player = spec_player(spec)
        pool = specs.strategies_for(model, player, cap=max_strategies, samples=max_strategies,
                                    seed=rng.randrange(2**31), singleton=True)
        for mu in pool:
            agree, bad = spec_translation_agrees(model, mu, spec, literal)
            report.spec_agree += agree
            for s, a, b in bad:
                report.spec_disagree.append((str(spec), dict(sorted(
                    (k, sorted(v)) for k, v in mu.assignment.items())), s, a, b))
    return report
