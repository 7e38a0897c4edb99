import random

import pytest
from hypothesis import given, settings

from rslcheck import (
    GameTree, Strategy, TranslationError, UnknownStateError, check, conforms, ctlstar_check,
    parse_formula, strategy_tree, to_ctlstar_model, tr_formula, tr_spec, xcheck,
)
from rslcheck.ctlstar import (
    CAnd, CBOT, CNot, CProp, CTOP, Always, NextAct, PathExists, c_implies, c_or, ctl_depth,
    ctl_size, format_ctl, spec_translation_agrees, tr_basic,
)
from rslcheck.generators import random_basic, random_formula, random_spec, random_strategy
from rslcheck.syntax import TRUE, Diamond, Either, IfThen, Not, Prop, Restrict, Suggests

from conftest import seeds, trees

ALL_D_P1 = Strategy.of(1, {"s0": "d", "s2": "d", "s4": "d"})


@pytest.fixture
def linear():
    # r -x-> t with p at t
    g = GameTree.build("r", [("r", "x", "t")], turn={"r": 1}, props={"t": {"p"}}, actions={"x", "y"})
    return to_ctlstar_model(g)


class TestModel:
    def test_strategy_labels(self, cent):
        m = to_ctlstar_model(cent, [("mu", strategy_tree(cent, ALL_D_P1))])
        assert {s for s in m.states if "strategy_mu" in m.valuation[s]} == {"s0", "s6"}

    def test_only_turn_added(self, cent):
        m = to_ctlstar_model(cent)
        for s in cent.states:
            extra = m.valuation[s] - cent.props_at(s)
            assert extra == ({f"turn_{cent.turn[s]}"} if s in cent.turn else set())
        assert m.union_edges() == {(s, a, t) for (s, a), t in cent.edges.items()}

    def test_nested_tags(self, cent):
        outer = strategy_tree(cent, Strategy.of(1, {"s0": "ad", "s2": "d", "s4": "d"}))
        inner = strategy_tree(cent, ALL_D_P1)
        m = to_ctlstar_model(cent, [("outer", outer), ("inner", inner)])
        ins = {s for s in m.states if "strategy_inner" in m.valuation[s]}
        outs = {s for s in m.states if "strategy_outer" in m.valuation[s]}
        assert ins <= outs and ins == {"s0", "s6"}

    def test_collision(self, cent):
        g = GameTree.build("r", [("r", "x", "t")], turn={"r": 1}, props={"r": {"strategy_mu"}})
        with pytest.raises(TranslationError, match="strategy_mu"):
            to_ctlstar_model(g, [("mu", g)])
        t = strategy_tree(cent, ALL_D_P1)
        with pytest.raises(TranslationError):
            to_ctlstar_model(cent, [("mu", t), ("mu", t)])


class TestEvaluator:
    def test_next(self, linear):
        assert ctlstar_check(linear, "r", PathExists(NextAct("x", CProp("p"))))

    def test_missing_edge(self, linear):
        assert not ctlstar_check(linear, "r", PathExists(NextAct("y", CProp("p"))))

    def test_always_true(self, linear):
        for s in linear.states:
            assert ctlstar_check(linear, s, PathExists(Always(CTOP)))

    def test_next_false_at_branch_end(self, linear):
        assert not ctlstar_check(linear, "t", PathExists(NextAct("x", CTOP)))

    def test_always_includes_last_state(self, linear):
        assert not ctlstar_check(linear, "r", PathExists(Always(CNot(CProp("p")))))
        assert ctlstar_check(linear, "t", PathExists(Always(CProp("p"))))

    def test_unknown_state(self, linear):
        with pytest.raises(UnknownStateError):
            ctlstar_check(linear, "zz", CTOP)

    def test_propositional_agreement(self, cent):
        m = to_ctlstar_model(cent)
        f = c_implies(CProp("r1"), c_or(CProp("turn_1"), CBOT))
        for s in cent.states:
            assert ctlstar_check(m, s, f) == (("r1" not in cent.props_at(s)) or cent.turn.get(s) == 1)

    def test_printer(self):
        f = PathExists(Always(CAnd(CProp("p"), NextAct("a", CTOP))))
        assert format_ctl(f) == "E G (p & X:a true)"
        assert ctl_size(f) == 7 and ctl_depth(f) == 5


class TestTranslation:
    def test_diamond(self, cent):
        assert tr_formula(cent, "s0", parse_formula("<a>r2")).formula == NextAct("a", CProp("r2"))
        assert tr_formula(cent, "s0", parse_formula("~<a>r2")).formula == CNot(NextAct("a", CProp("r2")))

    def test_suggests(self, cent):
        f = Suggests(IfThen(Prop("r1"), "d", 1), 1, "d")
        assert tr_formula(cent, "s0", f).formula == NextAct("d", CTOP)
        g = Suggests(IfThen(Prop("r1"), "d", 1), 1, "a")
        assert tr_formula(cent, "s0", g).formula == CBOT
        # enabled but unavailable at a leaf
        assert tr_formula(cent, "s5", f).formula == CTOP
        assert tr_formula(cent, "s5", f, literal=True).formula == NextAct("d", CTOP)

    def test_tr_spec(self):
        spec = IfThen(Prop("p"), "a", 1)
        lit = tr_spec(spec, "mu", literal=True)
        assert lit == c_implies(CProp("p"), PathExists(CAnd(CProp("strategy_mu"), NextAct("a", CTOP))))
        top = tr_spec(IfThen(TRUE, "a", 1), literal=True)
        assert top == c_implies(CTOP, PathExists(CAnd(CProp("strategy_mu"), NextAct("a", CTOP))))
        other = IfThen(Prop("q"), "b", 1)
        assert tr_spec(Either(spec, other)) == c_or(tr_spec(spec), tr_spec(other))

    def test_tr_spec_refuses_restrict(self):
        with pytest.raises(TranslationError, match="reduce"):
            tr_spec(Restrict(IfThen(TRUE, "a", 1), "a", 1))

    def test_ensures_labels(self, cent):
        tr = tr_formula(cent, "s0", parse_formula("[r1 -> d]^1 ~> 1 : true"), tag="sig")
        (name, tree), = tr.tagged
        assert name == "sig0" and tree.states == {"s0", "s6"}
        assert tr.atoms["enabled_sig0"] == {"s0", "s1", "s2", "s3", "s4"}
        m = tr.model(cent)
        assert ctlstar_check(m, "s0", tr.formula)

    def test_basic_needs_no_model(self):
        assert tr_basic(Diamond("a", Diamond("b", Prop("p")))) == \
            NextAct("a", PathExists(NextAct("b", CProp("p"))))


class TestXcheck:
    def test_double_move_on_centipede(self, cent):
        rep = xcheck(cent, parse_formula("<a><a>true"))
        assert rep.ok and rep.agree == 11

    def test_suggests_on_centipede(self, cent):
        rep = xcheck(cent, parse_formula("sug [r1 -> d]^1 : 1 : d"))
        assert rep.ok and rep.agree == 11 and rep.spec_agree > 0

    def test_restricted_spec_inside(self, cent):
        rep = xcheck(cent, parse_formula("(sug ([r1 -> d]^1 ! d)^1 : 1 : a & ([true -> a]^1 ! d)^1 ~> 1 : true)"))
        assert rep.ok

    def test_literal_forms_disagree(self, cent):
        # the existential E G reading misses branches that leave the goal
        f = parse_formula("[false -> d]^1 ~> 1 : ~r2")
        assert xcheck(cent, f).ok
        assert not xcheck(cent, f, literal=True).ok

    def test_conformance_translation_on_centipede(self, cent):
        agree, bad = spec_translation_agrees(cent, ALL_D_P1, IfThen(Prop("r1"), "d", 1))
        assert not bad and agree == 2


@given(trees(), seeds())
@settings(max_examples=80, deadline=None)
def test_formula_translation_agrees(tree, seed):
    rng = random.Random(seed)
    f = random_formula(rng, 12, sorted(tree.actions))
    for s in tree.states:
        tr = tr_formula(tree, s, f)
        assert ctlstar_check(tr.model(tree), s, tr.formula) == check(tree, s, f)


@given(trees(), seeds())
@settings(max_examples=80, deadline=None)
def test_spec_translation_agrees(tree, seed):
    rng = random.Random(seed)
    i = rng.choice((1, 2))
    spec = random_spec(rng, i, 2, sorted(tree.actions), restrict=False)
    mu = random_strategy(rng, tree, i, singleton=True)
    agree, bad = spec_translation_agrees(tree, mu, spec)
    assert not bad


@given(trees(), seeds())
@settings(max_examples=60, deadline=None)
def test_evaluator_depth_bounded(tree, seed):
    rng = random.Random(seed)
    f = random_formula(rng, 12, sorted(tree.actions))
    for s in tree.states:
        tr = tr_formula(tree, s, f)
        stats = {}
        ctlstar_check(tr.model(tree), s, tr.formula, stats)
        assert stats["max_depth"] <= ctl_depth(tr.formula)
        assert stats["max_branch"] <= tree.height + 1


@given(trees(), seeds())
@settings(max_examples=40, deadline=None)
def test_basic_formulas_without_modalities(tree, seed):
    rng = random.Random(seed)
    f = random_basic(rng, 3, ["zz"])  # never picks a diamond over a real edge
    f = Not(f) if rng.random() < 0.5 else f
    if "zz" in str(f):
        return
    m = to_ctlstar_model(tree)
    for s in tree.states:
        assert ctlstar_check(m, s, tr_basic(f)) == check(tree, s, f)
