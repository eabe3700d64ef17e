from __future__ import annotations

import random

import pytest

from dpohill.core.errors import GraphError, TypeGraphMismatch
from dpohill.dpo import (
    GTS,
    GTSBuilder,
    Match,
    Rule,
    apply,
    comatch,
    find_matches,
    forced_result,
    reachable,
    satisfies_gluing,
    successors,
)
from dpohill.encoder import random_instance
from dpohill.graphs import (
    GraphBuilder,
    TypedHypergraph,
    TypeGraph,
    TypeGraphBuilder,
    check_morphism,
    is_isomorphic,
    validate,
)


def test_worked_example_step(rule_p: Rule, valid_match: Match, result: TypedHypergraph) -> None:
    step = apply(rule_p, valid_match)
    assert is_isomorphic(step.result, result)
    assert set(step.context.nodes) == {"x1", "x2"}
    assert set(step.context.edges) == {"e2", "e4"}
    for m in (step.d, step.g, step.h, step.m_star):
        assert check_morphism(m)


def test_created_items_get_fresh_identifiers(tg: TypeGraph) -> None:
    lhs = GraphBuilder(tg, "L").node("k", "a3").build()
    rhs = GraphBuilder(tg, "R").node("k", "a3").node("k2", "a3").edge("d", "D", "k", "k2").build()
    rule = Rule.span("grow", lhs, rhs, ["k"])
    host = GraphBuilder(tg, "G").node("k2", "a3").edge("d", "D", "k2", "k2").build()
    (match,) = find_matches(rule, host)
    step = apply(rule, match)
    assert set(step.result.nodes) == {"k2", "k2.1"}
    assert set(step.result.edges) == {"d", "d.1"}
    assert step.result.attach["d.1"] == ("k2", "k2.1")


def test_pushout_square_commutes(rule_p: Rule, valid_match: Match) -> None:
    step = apply(rule_p, valid_match)
    for k in rule_p.interface.nodes:
        assert step.g.node_map[step.d.node_map[k]] == valid_match.morphism.node_map[rule_p.l.node_map[k]]
        assert step.h.node_map[step.d.node_map[k]] == step.m_star.node_map[rule_p.r.node_map[k]]


def test_match_from_another_rule_is_rejected(rule_p: Rule, valid_match: Match) -> None:
    with pytest.raises(GraphError):
        apply(rule_p.reversed(), valid_match)


def test_successors_of_worked_example(host: TypedHypergraph, rule_p: Rule, result: TypedHypergraph) -> None:
    found = successors(host, [rule_p])
    assert len(found) == 1
    assert is_isomorphic(found[0].result, result)


@pytest.mark.parametrize("seed", range(20))
def test_inverse_step_restores_the_host(seed: int) -> None:
    rng = random.Random(seed)
    host, rule = random_instance(rng)
    for succ in successors(host, [rule]):
        back = comatch(succ.step)
        undone = apply(back.rule, back)
        assert is_isomorphic(undone.result, host)


@pytest.mark.parametrize("seed", range(20))
def test_results_are_valid_graphs(seed: int) -> None:
    rng = random.Random(seed)
    host, rule = random_instance(rng)
    for succ in successors(host, [rule]):
        assert validate(succ.result).ok


@pytest.mark.parametrize("seed", range(20))
def test_forced_result_agrees_with_valid_steps(seed: int) -> None:
    host, rule = random_instance(random.Random(seed))
    for match in find_matches(rule, host):
        forced = forced_result(match)
        assert validate(forced).ok
        if satisfies_gluing(match):
            assert is_isomorphic(forced, apply(rule, match).result)


def test_reachable_worked_example(gts: GTS, result: TypedHypergraph) -> None:
    trace = reachable(gts, result, 3)
    assert trace is not None
    assert [entry.rule for entry in trace] == ["p"]
    assert reachable(gts, gts.start, 0) == []


def test_reachable_is_bound_relative(gts: GTS, result: TypedHypergraph) -> None:
    assert reachable(gts, result, 0) is None
    with pytest.raises(ValueError):
        reachable(gts, result, -1)


def test_target_outside_the_state_space(tg: TypeGraph, gts: GTS) -> None:
    target = GraphBuilder(tg, "T").node("v", "a2").node("w", "a2").edge("b", "B", "w").edge("b2", "B", "v").build()
    assert reachable(gts, target, 5) is None


def test_gts_builder_checks_type_graphs(tg: TypeGraph, rule_p: Rule, host: TypedHypergraph) -> None:
    other = TypeGraphBuilder("other").node_type("a1").build()
    with pytest.raises(TypeGraphMismatch):
        GTSBuilder(other).rule(rule_p)
    with pytest.raises(GraphError, match="declared twice"):
        GTSBuilder(tg).rule(rule_p).rule(rule_p)
    gts = GTSBuilder(tg).rule(rule_p).build()
    assert gts.start.is_empty()
    with pytest.raises(GraphError):
        gts.rule("nope")
