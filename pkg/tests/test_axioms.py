import pytest

from rslcheck import AXIOM, SET_MINUS, check
from rslcheck.axioms import axiom_suite, ensures_unfold
from rslcheck.generators import corpus
from rslcheck.syntax import IfThen, Prop

REGULAR = [
    "taut-excluded-middle", "taut-and-elim", "taut-contraposition", "K", "determinism",
    "ite-available", "ite-enabled", "ite-other", "either", "both", "ensures-unfold",
    "induction-rule",
]


@pytest.fixture(scope="module")
def models():
    return corpus(7, 12, max_states=12)


@pytest.fixture(scope="module", params=[SET_MINUS, AXIOM])
def report(request, models):
    return axiom_suite(models, seed=11, semantics=request.param, per_model=3)


def test_regular_schemas_valid(report):
    for name in REGULAR:
        r = report.results[name]
        assert r.checks > 0, name
        assert r.failures == 0, (name, r.witnesses[:2])


def test_induction_rule_not_vacuous(report):
    assert report.results["induction-rule"].checks > 0


def test_report_ok(report):
    assert report.ok


def test_restriction_axiom_by_semantics(report):
    r = report.results["rsl-restriction"]
    if report.semantics == AXIOM:
        assert not r.expected_divergence
        assert r.failures == 0
    else:
        assert r.expected_divergence
        assert r.failures > 0
        assert r.localized


def test_literal_forms_diverge(report):
    # the alternative bracketings are reported, and they do fail somewhere
    assert report.results["ite-other-literal"].failures > 0
    assert report.results["ensures-unfold-verbatim"].failures > 0


def test_divergence_without_failures_is_not_localized(line):
    # a single-move model gives set-minus nothing to diverge on
    rep = axiom_suite([line], seed=1, semantics=SET_MINUS, per_model=1)
    r = rep.results["rsl-restriction"]
    assert r.failures == 0
    assert not r.localized


def test_ensures_unfold_holds_on_centipede(cent):
    sigma = IfThen(Prop("r1"), "d", 1)
    f = ensures_unfold(sigma, 1, Prop("r1"), cent.actions)
    assert all(check(cent, s, f) for s in cent.ordered_states())


def test_suite_is_deterministic(models):
    a = axiom_suite(models[:4], seed=3, per_model=2).as_dict()
    b = axiom_suite(models[:4], seed=3, per_model=2).as_dict()
    assert a == b
