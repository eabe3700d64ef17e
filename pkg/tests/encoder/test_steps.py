from __future__ import annotations

import random

import pytest

from dpohill.core.errors import EmissionError, GraphError
from dpohill.dpo import GTS, Match, Rule, apply, comatch, find_matches, reachable, satisfies_gluing
from dpohill.encoder import (
    canonical_formula,
    emit_reachability,
    emit_step_derivation,
    encode_rule,
    parallel_rule_formula,
    random_instance,
    reachability_sequent,
    representative,
    rule_formula,
    rule_signature,
    step_sequent,
)
from dpohill.graphs import GraphBuilder, TypedHypergraph, TypeGraph
from dpohill.hill import Formula, Lolli, OfCourse, alpha_eq, parse_formula
from dpohill.kernel import ProofTree, check, is_cut_free


def _ok(tree: ProofTree) -> None:
    report = check(tree)
    assert report.ok, [str(f) for f in report.failures]


def test_worked_example_rule_formula(rule_p: Rule, delta: Formula) -> None:
    assert alpha_eq(canonical_formula(rule_formula(rule_p)), canonical_formula(delta))
    assert isinstance(encode_rule(rule_p), OfCourse)
    sig = rule_signature(rule_p)
    assert [var for _, var, _ in sig.interface] == ["y1"]
    assert sig.lhs.nodes == ("y2",)
    assert set(sig.rhs.nodes) == {"y3", "y4"}


def test_isolated_interface_node_is_not_encodable(tg: TypeGraph) -> None:
    side = GraphBuilder(tg, "L").node("k", "a1").build()
    rule = Rule.span("id", side, side, ["k"])
    assert rule.isolated_interface_nodes() == ("k",)
    with pytest.raises(GraphError, match="isolated"):
        encode_rule(rule)
    with pytest.raises(GraphError, match="isolated"):
        rule_signature(rule)


def test_identity_rule(tg: TypeGraph, host: TypedHypergraph) -> None:
    side = GraphBuilder(tg, "L").node("k", "a1").edge("c", "C", "k").build()
    rule = Rule.span("id", side, side, ["k"])
    assert alpha_eq(encode_rule(rule), parse_formula("!all y1:a1. C(y1) -o C(y1)"))
    (match,) = find_matches(rule, host)
    tree = emit_step_derivation(apply(rule, match))
    _ok(tree)
    goal = tree.conclusion.goal
    assert isinstance(goal, Lolli)
    assert alpha_eq(canonical_formula(goal.left), canonical_formula(goal.right))


def test_worked_example_step_is_certified(
    rule_p: Rule, valid_match: Match, gamma_g: Formula, gamma_h: Formula, delta: Formula
) -> None:
    step = apply(rule_p, valid_match)
    tree = emit_step_derivation(step)
    _ok(tree)
    assert is_cut_free(tree)
    s = tree.conclusion
    assert not s.gamma
    assert [n for n, _ in s.delta] == ["rule"]
    assert alpha_eq(canonical_formula(s.delta[0][1]), canonical_formula(delta))
    assert isinstance(s.goal, Lolli)
    assert alpha_eq(canonical_formula(s.goal.left), canonical_formula(gamma_g))
    assert alpha_eq(canonical_formula(s.goal.right), canonical_formula(gamma_h))
    assert alpha_eq(step_sequent(step).goal, s.goal)


def test_reversed_step_is_certified(rule_p: Rule, valid_match: Match) -> None:
    step = apply(rule_p, valid_match)
    back = comatch(step)
    assert satisfies_gluing(back)
    undone = apply(back.rule, back)
    tree = emit_step_derivation(undone, "inverse")
    _ok(tree)
    assert [n for n, _ in tree.conclusion.delta] == ["inverse"]


@pytest.mark.parametrize("seed", range(30))
def test_random_steps_are_certified(seed: int) -> None:
    rng = random.Random(seed)
    g, rule = random_instance(rng)
    for match in find_matches(rule, g):
        if not satisfies_gluing(match):
            continue
        step = apply(rule, match)
        tree = emit_step_derivation(step)
        _ok(tree)
        assert alpha_eq(tree.conclusion.goal, step_sequent(step).goal)


def test_parallel_forms_differ(rule_p: Rule) -> None:
    sequential = parallel_rule_formula(rule_p, rule_p, sequential=True)
    simultaneous = parallel_rule_formula(rule_p, rule_p, sequential=False)
    assert not alpha_eq(sequential, simultaneous)
    assert alpha_eq(
        canonical_formula(simultaneous),
        canonical_formula(
            parse_formula(
                "all y1:a1 y5:a1. (ex y2:a2. A(y1, y2) * C(y1)) * (ex y6:a2. A(y5, y6) * C(y5))"
                " -o (ex y3 y4:a3. C(y1) * D(y3, y4)) * (ex y7 y8:a3. C(y5) * D(y7, y8))"
            )
        ),
    )


def test_reachability_once_each(gts: GTS, result: TypedHypergraph) -> None:
    trace = reachable(gts, result, 2)
    assert trace is not None and len(trace) == 1
    tree = emit_reachability([t.step for t in trace])
    _ok(tree)
    goal = reachability_sequent([t.step.rule for t in trace], representative(gts.start), representative(result), False)
    s = tree.conclusion
    assert not s.gamma
    assert {n for n, _ in s.delta} == {n for n, _ in goal.delta} == {"p1", "g0"}
    assert alpha_eq(canonical_formula(s.goal), canonical_formula(goal.goal))


def test_reachability_unrestricted(gts: GTS, tg: TypeGraph) -> None:
    # the rule fires twice from a host with two independent redexes
    host = (
        GraphBuilder(tg, "G2")
        .node("x1", "a1")
        .node("x2", "a2")
        .node("x3", "a1")
        .node("x4", "a2")
        .edge("c1", "C", "x1")
        .edge("a1", "A", "x1", "x2")
        .edge("c2", "C", "x3")
        .edge("a2", "A", "x3", "x4")
        .build()
    )
    rule = gts.rule("p")
    first = apply(rule, find_matches(rule, host)[0])
    second = apply(rule, find_matches(rule, first.result)[0])
    tree = emit_reachability([first, second], unrestricted=True)
    _ok(tree)
    s = tree.conclusion
    assert [n for n, _ in s.gamma] == ["p1"]
    assert [n for n, _ in s.delta] == ["g0"]
    assert alpha_eq(s.goal, representative(second.result, "z").formula)

    once = emit_reachability([first, second])
    _ok(once)
    assert {n for n, _ in once.conclusion.delta} == {"p1", "p2", "g0"}


def test_reachability_needs_a_chained_trace(rule_p: Rule, valid_match: Match) -> None:
    step = apply(rule_p, valid_match)
    with pytest.raises(EmissionError):
        emit_reachability([])
    with pytest.raises(EmissionError):
        emit_reachability([step, step])
