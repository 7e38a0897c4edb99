import random

import pytest
from hypothesis import given, settings

from rslcheck import (
    DeadEndError, GameTree, SolverError, backward_induction, centipede, conforms, moves,
    rationality_spec, validate_model,
)
from rslcheck.game import remove_player_moves
from rslcheck.generators import random_binary_payoff_tree, random_tree, with_payoffs
from rslcheck.solvers import Restriction, rationality_condition
from rslcheck.syntax import TRUE, And, Diamond, IfThen, Prop, Restrict, disj

from conftest import seeds


def dia(f):
    return disj(Diamond("a", f), Diamond("d", f))


class TestCentipede:
    def test_shape(self, cent):
        assert validate_model(cent) == []
        assert len(cent.states) == 11
        assert moves(cent, "s3") == {"a", "d"}
        assert cent.payoffs["s10"] == (5, 2)
        assert [cent.turn[f"s{k}"] for k in range(5)] == [1, 2, 1, 2, 1]

    def test_unrestricted(self, cent):
        res = backward_induction(cent)
        assert all(res.choices[f"s{k}"] == {"d"} for k in range(5))
        assert res.outcome == (1, 0) and res.leaf == "s6"

    def test_p1_cannot_go_down(self, cent):
        res = backward_induction(cent, [(1, "d")])
        assert all(res.choices[f"s{k}"] == {"a"} for k in range(5))
        assert res.outcome == (4, 6) and res.leaf == "s5"
        assert res.path(cent) == ["s0", "s1", "s2", "s3", "s4", "s5"]

    def test_restriction_from_s2(self, cent):
        res = backward_induction(cent, [Restriction(1, "d", "s2")])
        assert res.choices["s0"] == {"a"} and res.choices["s1"] == {"a"}
        assert res.outcome == (4, 6)

    def test_restricted_play_and_negated_spec(self, cent):
        mu, nu = backward_induction(cent, [(1, "d")]).profile
        rational = IfThen(Prop("r1"), "d", 1)
        # P1 can no longer conform to the rational spec, restricted or not
        assert not conforms(cent, mu, "s4", rational)
        for s in ("s0", "s2", "s4"):
            assert not conforms(cent, mu, s, Restrict(rational, "d", 1))
            assert conforms(cent, mu, s, IfThen(TRUE, "a", 1))
        # some successor of s3 where P1 does not conform, so P2 goes on
        assert any(not conforms(cent, mu, t, rational) for t in cent.children["s3"].values())
        assert nu.assignment["s3"] == {"a"}
        assert conforms(cent, nu, "s3", IfThen(Prop("r2"), "a", 2))

    def test_profile_split_by_owner(self, cent):
        p1, p2 = backward_induction(cent).profile
        assert set(p1.assignment) == {"s0", "s2", "s4"} and set(p2.assignment) == {"s1", "s3"}


def test_single_choice():
    g = GameTree.build("r", [("r", "x", "u"), ("r", "y", "v")], turn={"r": 1},
                       payoffs={"u": (0, 0), "v": (1, 0)})
    res = backward_induction(g)
    assert res.choices["r"] == {"y"} and res.outcome == (1, 0)


def test_ties_keep_all_maximizers():
    g = GameTree.build("r", [("r", "l", "u"), ("r", "r", "v")], turn={"r": 2},
                       payoffs={"u": (0, 3), "v": (9, 3)})
    res = backward_induction(g)
    assert res.choices["r"] == {"l", "r"}
    assert res.leaf == "u"  # first maximizer in action order


def test_dead_end():
    g = GameTree.build("r", [("r", "x", "u")], turn={"r": 1}, payoffs={"u": (0, 0)})
    with pytest.raises(DeadEndError, match="'r'"):
        backward_induction(g, [(1, "x")])


def test_missing_payoffs(cent):
    g = GameTree.build("r", [("r", "x", "u")], turn={"r": 1})
    with pytest.raises(SolverError, match="payoff"):
        backward_induction(g)


class TestRationality:
    def test_depth_zero(self, cent):
        assert rationality_spec(cent, 1, 0) == IfThen(Prop("r1"), "d", 1)

    def test_depth_one(self, cent):
        assert rationality_spec(cent, 2, 1) == IfThen(And(Prop("r2"), dia(Prop("r1"))), "d", 2)

    def test_depth_two(self, cent):
        cond = And(Prop("r1"), dia(And(Prop("r2"), dia(Prop("r1")))))
        assert rationality_spec(cent, 1, 2) == IfThen(cond, "d", 1)

    @pytest.mark.parametrize("k", range(5))
    def test_backward_induction_conforms(self, cent, k):
        player = 1 if k % 2 == 0 else 2
        state = f"s{4 - k}"
        spec = rationality_spec(cent, player, k)
        mu = backward_induction(cent).profile[player - 1]
        assert conforms(cent, mu, state, spec)

    def test_restricted_strategy_breaks_rationality(self, cent):
        mu = backward_induction(cent, [(1, "d")]).profile[0]
        assert not conforms(cent, mu, "s4", rationality_spec(cent, 1, 0))

    def test_alphabet(self):
        g = GameTree.build("r", [("r", "x", "u")], turn={"r": 1})
        with pytest.raises(SolverError, match="alphabet"):
            rationality_spec(g, 1, 0)

    def test_negative_depth(self):
        with pytest.raises(ValueError):
            rationality_condition(1, -1)


@given(seeds())
@settings(max_examples=60, deadline=None)
def test_unique_on_tie_free_trees(seed):
    tree = random_binary_payoff_tree(random.Random(seed))
    res = backward_induction(tree)
    assert all(len(v) == 1 for v in res.choices.values())


@given(seeds())
@settings(max_examples=80, deadline=None)
def test_restriction_matches_edge_deletion(seed):
    rng = random.Random(seed)
    tree = random_tree(rng, max_states=16, payoffs=True)
    player, action = rng.choice((1, 2)), rng.choice(sorted(tree.actions))
    pruned = remove_player_moves(tree, player, action)
    try:
        a = backward_induction(tree, [(player, action)])
    except SolverError:
        with pytest.raises(SolverError):
            backward_induction(pruned)
        return
    b = backward_induction(pruned)
    assert (a.outcome, a.leaf) == (b.outcome, b.leaf)
    assert {s: v for s, v in a.choices.items() if s in pruned.states} == b.choices


def test_centipede_is_fresh_each_call():
    assert centipede() == centipede() and centipede() is not centipede()


def test_with_payoffs_tie_free():
    rng = random.Random(3)
    g = with_payoffs(random_tree(rng), rng)
    firsts = [v[0] for v in g.payoffs.values()]
    assert len(firsts) == len(set(firsts))
