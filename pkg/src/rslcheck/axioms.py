"""Model-level validity checks for the SL axiom schemas and the restriction axiom.

Each schema is instantiated with random basic formulas, specifications and
actions and evaluated at every state of every model.  The report counts
instances and counterexamples per schema.  Two schemas are checked in two
forms:

``ite-other``
    ``turn_i & ([psi->a]^i)_i:c <-> ~psi`` (``c != a``) read with the
    implication scoping ``turn_i -> (([psi->a]^i)_i:c <-> ~psi)``; the
    literal bracketing is reported separately as ``ite-other-literal``, which
    is expected to fail wherever ``turn_i`` is false and ``psi`` is false.
``ensures-unfold``
    ``sigma ~>_i psi -> psi & inv_i & inv_-i & (turn_i -> enabled)`` with
    ``inv_-i = turn_-i -> [*](sigma ~>_i psi)``; the verbatim form (``turn_i``
    guard on ``inv_-i`` and an unguarded ``enabled``) is reported as
    ``ensures-unfold-verbatim``.

The restriction axiom ``(sigma!a)_i:c <-> turn_i & ~(sigma)_i:a & (sigma)_i:c``
is valid under the ``axiom`` reading.  Under ``set-minus`` it fails exactly
where ``c in sigma(s) - {a}`` and (``turn != i`` or ``a in sigma(s)``); the
report checks that localisation in both directions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from . import checker, specs
from .game import GameTree, opponent
from .generators import random_basic, random_spec
from .syntax import (
    TRUE, And, Both, Diamond, Either, Ensures, IfThen, Not, Restrict, Suggests,
    all_next, box, conj, enabled, iff, implies, turn,
)


@dataclass
class AxiomResult:
    name: str
    instances: int = 0
    checks: int = 0
    failures: int = 0
    expected_divergence: bool = False
    localized: bool = True
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        if self.expected_divergence:
            return self.localized
        return self.failures == 0

    def as_dict(self):
        return {
            "name": self.name, "instances": self.instances, "checks": self.checks,
            "failures": self.failures, "expected_divergence": self.expected_divergence,
            "localized": self.localized, "ok": self.ok, "witnesses": self.witnesses[:5],
        }


@dataclass
class AxiomReport:
    semantics: str
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def result(self, name, expected=False) -> AxiomResult:
        if name not in self.results:
            self.results[name] = AxiomResult(name, expected_divergence=expected)
        return self.results[name]

    def as_dict(self):
        return {"semantics": self.semantics, "ok": self.ok,
                "axioms": [r.as_dict() for r in self.results.values()]}


def _validity(report, name, model, formula, semantics, expected=False):
    res = report.result(name, expected)
    res.instances += 1
    for s in model.ordered_states():
        res.checks += 1
        if not checker.check(model, s, formula, semantics):
            res.failures += 1
            if len(res.witnesses) < 20:
                res.witnesses.append({"state": s, "formula": str(formula)})


def ensures_unfold(spec, player, goal, actions, verbatim=False):
    ens = Ensures(spec, player, goal)
    inv_i = conj(*(implies(And(turn(player), Suggests(spec, player, a)), box(a, ens))
                   for a in sorted(actions)))
    guard = turn(player) if verbatim else turn(opponent(player))
    inv_opp = implies(guard, all_next(ens, actions))
    en = enabled(spec, player, actions)
    if not verbatim:
        en = implies(turn(player), en)
    return implies(ens, conj(goal, inv_i, inv_opp, en))


def _instance_pool(rng, model, per_model):
    acts = sorted(model.actions)
    for _ in range(per_model):
        i = rng.choice((1, 2))
        yield (
            i,
            random_basic(rng, 2, acts),
            random_basic(rng, 2, acts),
            random_spec(rng, i, 2, acts, restrict=False),
            random_spec(rng, i, 2, acts, restrict=False),
            rng.choice(acts),
            rng.choice(acts),
        )


def sl_axioms(report, model, rng, per_model, semantics):
    acts = sorted(model.actions)
    for i, phi, psi, sigma, sigma2, a, c in _instance_pool(rng, model, per_model):
        # propositional tautologies under substitution
        _validity(report, "taut-excluded-middle", model, Not(And(Not(phi), Not(Not(phi)))), semantics)
        _validity(report, "taut-and-elim", model, implies(And(phi, psi), phi), semantics)
        _validity(report, "taut-contraposition", model,
                  iff(implies(phi, psi), implies(Not(psi), Not(phi))), semantics)
        _validity(report, "K", model,
                  implies(box(a, implies(phi, psi)), implies(box(a, phi), box(a, psi))), semantics)
        _validity(report, "determinism", model, implies(Diamond(a, phi), box(a, phi)), semantics)
        ite = IfThen(psi, a, i)
        cond = psi
        _validity(report, "ite-available", model,
                  implies(Diamond(a, TRUE), Suggests(ite, i, a)), semantics)
        _validity(report, "ite-enabled", model,
                  implies(conj(turn(i), cond, Suggests(ite, i, a)), Diamond(a, TRUE)), semantics)
        for other in acts:
            if other == a:
                continue
            _validity(report, "ite-other", model,
                      implies(turn(i), iff(Suggests(ite, i, other), Not(cond))), semantics)
            _validity(report, "ite-other-literal", model,
                      iff(And(turn(i), Suggests(ite, i, other)), Not(cond)), semantics, expected=True)
        _validity(report, "either", model,
                  iff(Suggests(Either(sigma, sigma2), i, c),
                      Not(And(Not(Suggests(sigma, i, c)), Not(Suggests(sigma2, i, c))))), semantics)
        _validity(report, "both", model,
                  iff(Suggests(Both(sigma, sigma2), i, c),
                      And(Suggests(sigma, i, c), Suggests(sigma2, i, c))), semantics)
        _validity(report, "ensures-unfold", model,
                  ensures_unfold(sigma, i, psi, model.actions), semantics)
        _validity(report, "ensures-unfold-verbatim", model,
                  ensures_unfold(sigma, i, psi, model.actions, verbatim=True), semantics, expected=True)
        _induction(report, model, sigma, i, phi, psi, semantics)


def _induction(report, model, sigma, i, phi, psi, semantics):
    """Model-level soundness of the induction rule.

    If the three premises hold at every state of ``model`` then so does
    ``phi -> sigma ~>_i psi``.  Instances whose premises fail somewhere are
    counted but impose nothing.
    """
    res = report.result("induction-rule")
    res.instances += 1
    acts = sorted(model.actions)
    premises = [
        conj(*(implies(And(phi, And(turn(i), Suggests(sigma, i, a))), box(a, phi)) for a in acts)),
        implies(And(phi, turn(opponent(i))), all_next(phi, acts)),
        implies(phi, And(psi, enabled(sigma, i, acts))),
    ]
    states = model.ordered_states()
    if not all(checker.check(model, s, p, semantics) for p in premises for s in states):
        return
    conclusion = implies(phi, Ensures(sigma, i, psi))
    for s in states:
        res.checks += 1
        if not checker.check(model, s, conclusion, semantics):
            res.failures += 1
            res.witnesses.append({"state": s, "formula": str(conclusion)})


def rsl_axiom(report, model, rng, per_model, semantics):
    acts = sorted(model.actions)
    expected = semantics == specs.SET_MINUS
    res = report.result("rsl-restriction", expected)
    for _ in range(per_model):
        i = rng.choice((1, 2))
        sigma = random_spec(rng, i, 2, acts, restrict=True)
        a = rng.choice(acts)
        res.instances += 1
        for c in acts:
            axiom = iff(Suggests(Restrict(sigma, a, i), i, c),
                        conj(turn(i), Not(Suggests(sigma, i, a)), Suggests(sigma, i, c)))
            for s in model.ordered_states():
                res.checks += 1
                holds = checker.check(model, s, axiom, semantics)
                inner = specs._enabled(model, sigma, s, semantics)
                predicted = not (c in inner and c != a and
                                 (model.turn.get(s) != i or a in inner))
                if not holds:
                    res.failures += 1
                    if len(res.witnesses) < 20:
                        res.witnesses.append({"state": s, "spec": str(sigma), "a": a, "c": c,
                                              "turn": model.turn.get(s)})
                if expected and holds != predicted:
                    res.localized = False
    if not expected:
        res.localized = res.failures == 0


def axiom_suite(models: Iterable[GameTree], seed: int = specs.DEFAULT_SEED,
                semantics: str = specs.SET_MINUS, per_model: int = 4) -> AxiomReport:
    rng = random.Random(seed)
    report = AxiomReport(semantics)
    for model in models:
        sl_axioms(report, model, rng, per_model, semantics)
        rsl_axiom(report, model, rng, per_model, semantics)
    rsl = report.results.get("rsl-restriction")
    if rsl is not None and rsl.expected_divergence and rsl.failures == 0:
        rsl.localized = False  # the divergence must actually show up on the corpus
    return report
