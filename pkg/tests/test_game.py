import random

import pytest
from hypothesis import given, settings

from rslcheck import (
    EmptyComponentError, GameTree, IncompleteStrategyError, Strategy, UnknownStateError, moves,
    restrict_strategy, restricted_strategy_tree, strategy_tree, validate_model, validate_strategy,
)
from rslcheck.game import remove_player_moves
from rslcheck.generators import random_strategy

from conftest import seeds, trees

ALL_P1 = Strategy.of(1, {"s0": "ad", "s2": "ad", "s4": "ad"})
ALL_D_P1 = Strategy.of(1, {"s0": "d", "s2": "d", "s4": "d"})


def kinds(diags):
    return sorted(d.kind for d in diags)


class TestMoves:
    def test_root(self, cent):
        assert moves(cent, "s0") == {"a", "d"}

    def test_leaf(self, cent):
        assert moves(cent, "s5") == frozenset()

    def test_single_edge(self, line):
        assert moves(line, "r") == {"x"}

    def test_unknown_state(self, cent):
        with pytest.raises(UnknownStateError, match="s99"):
            moves(cent, "s99")


class TestStrategyTree:
    def test_all_down(self, cent):
        t = strategy_tree(cent, ALL_D_P1)
        assert t.states == {"s0", "s6"}
        assert dict(t.edges) == {("s0", "d"): "s6"}

    def test_all_moves_keeps_everything(self, cent):
        t = strategy_tree(cent, ALL_P1)
        assert t.states == cent.states
        assert dict(t.edges) == dict(cent.edges)

    def test_opponent_root_keeps_all(self):
        g = GameTree.build("r", [("r", "x", "u"), ("r", "y", "v"), ("u", "z", "w")],
                           turn={"r": 2, "u": 1})
        t = strategy_tree(g, Strategy.of(1, {"u": ""}))
        assert set(t.edges) == {("r", "x"), ("r", "y")}
        # u lost its moves, so it is a leaf without a turn now
        assert "u" not in t.turn

    def test_incomplete(self, cent):
        with pytest.raises(IncompleteStrategyError, match="s2"):
            strategy_tree(cent, Strategy.of(1, {"s0": "a"}))

    def test_unreached_own_state_may_be_undefined(self, cent):
        t = strategy_tree(cent, Strategy.of(1, {"s0": "d"}))
        assert t.states == {"s0", "s6"}

    @given(trees(), seeds())
    @settings(max_examples=60, deadline=None)
    def test_out_degree(self, tree, seed):
        rng = random.Random(seed)
        player = rng.choice((1, 2))
        mu = random_strategy(rng, tree, player)
        t = strategy_tree(tree, mu)
        assert tree.root in t.states
        assert set(t.edges.items()) <= set(tree.edges.items())
        for s in t.states:
            kids = t.children.get(s, {})
            if tree.turn.get(s) == player:
                assert len(kids) == len(mu.assignment[s] & moves(tree, s))
            elif tree.children.get(s):
                assert len(kids) == len(tree.children[s])


class TestRestrictStrategy:
    def test_down_removed(self):
        assert restrict_strategy(ALL_D_P1, "d").assignment == {"s0": set(), "s2": set(), "s4": set()}

    def test_single_state(self):
        assert restrict_strategy(Strategy.of(1, {"s0": "ad"}), "d").assignment == {"s0": {"a"}}

    def test_absent_action(self):
        assert restrict_strategy(ALL_D_P1, "zz") == ALL_D_P1

    @given(trees(), seeds())
    @settings(max_examples=40, deadline=None)
    def test_idempotent_and_commutes(self, tree, seed):
        rng = random.Random(seed)
        mu = random_strategy(rng, tree, rng.choice((1, 2)))
        acts = sorted(tree.actions)
        a, b = rng.choice(acts), rng.choice(acts)
        once = restrict_strategy(mu, a)
        assert restrict_strategy(once, a) == once
        assert restrict_strategy(once, b) == restrict_strategy(restrict_strategy(mu, b), a)
        assert all(a not in v for v in once.assignment.values())


class TestRestrictedStrategyTree:
    def test_restricted_centipede(self, cent):
        t = restricted_strategy_tree(cent, ALL_P1, "d", "s0")
        assert t.root == "s0"
        # P1's d-edges gone, P2's stay
        assert set(t.edges) == {("s0", "a"), ("s1", "a"), ("s1", "d"), ("s2", "a"),
                                ("s3", "a"), ("s3", "d"), ("s4", "a")}
        assert t.states == {"s0", "s1", "s2", "s3", "s4", "s5", "s7", "s9"}

    def test_unused_action_leaves_tree(self, cent):
        assert restricted_strategy_tree(cent, ALL_P1, "zz", "s0") == strategy_tree(cent, ALL_P1)

    def test_leaf_component(self, cent):
        # s8 hangs off a cut P1 edge, so its component is s8 alone
        t = restricted_strategy_tree(cent, ALL_P1, "d", "s8")
        assert t.root == "s8" and t.states == {"s8"} and not t.edges

    def test_leaf_in_main_component(self, cent):
        t = restricted_strategy_tree(cent, ALL_P1, "d", "s7")
        assert t.root == "s0" and "s7" in t.states

    def test_not_in_strategy_tree(self, cent):
        with pytest.raises(EmptyComponentError):
            restricted_strategy_tree(cent, ALL_D_P1, "d", "s3")


class TestValidate:
    def test_centipede_clean(self, cent):
        assert validate_model(cent) == []

    def test_edge_back_to_root(self):
        g = GameTree.build("r", [("r", "x", "t"), ("t", "y", "r")], turn={"r": 1, "t": 2})
        assert kinds(validate_model(g)) == ["cycle"]

    def test_payoff_on_internal(self, cent):
        pay = dict(cent.payoffs, s0=(0, 0))
        g = GameTree(cent.states, cent.root, cent.edges, cent.turn, cent.actions, cent.valuation, pay)
        assert kinds(validate_model(g)) == ["misplaced-payoff"]

    def test_other_violations(self):
        g = GameTree.build("r", [("r", "x", "t"), ("u", "x", "t")],
                           turn={"r": 1, "t": 2}, props={"r": {"turn_1"}})
        assert kinds(validate_model(g)) == ["missing-turn", "multiple-parents", "reserved-prop",
                                            "turn-on-leaf", "unreachable"]

    def test_strategy_diagnostics(self, cent):
        mu = Strategy.of(1, {"s0": "ax", "s1": "a"})
        assert kinds(validate_strategy(cent, mu)) == ["foreign-state", "unavailable-move"]
        assert kinds(validate_model(cent, [mu])) == ["foreign-state", "unavailable-move"]

    @given(trees(payoffs=True))
    @settings(max_examples=40, deadline=None)
    def test_generated_trees_are_valid(self, tree):
        assert validate_model(tree) == []


def test_remove_player_moves(cent):
    g = remove_player_moves(cent, 1, "d")
    assert g.states == {"s0", "s1", "s2", "s3", "s4", "s5", "s7", "s9"}
    assert validate_model(g) == []
