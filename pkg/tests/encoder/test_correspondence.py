from __future__ import annotations

import random

import pytest

from dpohill.dpo import GTS, Rule, find_matches, forced_result, satisfies_gluing, successors
from dpohill.encoder import (
    CorrespondenceBatch,
    CorrespondenceReport,
    default_type_graph,
    random_graph,
    random_instance,
    transformation_sequent,
    verify_correspondence,
    verify_system,
)
from dpohill.graphs import GraphBuilder, TypedHypergraph, TypeGraph, TypeGraphBuilder, validate
from dpohill.kernel import prove


def test_worked_example_correspondence(host: TypedHypergraph, rule_p: Rule) -> None:
    report = verify_correspondence(host, rule_p)
    assert report.matches == 2
    assert report.gluing_failures == 1
    assert report.dpo_classes == report.certified_classes == 1
    assert report.ok
    assert report.model_dump()["ok"] is True


def test_gluing_failures_are_searched_when_depth_is_given(host: TypedHypergraph, rule_p: Rule) -> None:
    report = verify_correspondence(host, rule_p, depth=6)
    assert report.ok, report.mismatches + report.rejected_certificates
    assert report.gluing_failures == 1


def test_dangling_match_has_no_certificate(host: TypedHypergraph, rule_p: Rule) -> None:
    (dangling,) = [m for m in find_matches(rule_p, host) if not satisfies_gluing(m)]
    assert dangling.morphism.node_map["y2"] == "x2"
    forced = forced_result(dangling)
    assert "x2" not in forced.nodes
    assert "e4" not in forced.edges
    assert prove(transformation_sequent(rule_p, host, forced), 6) is None


def test_rule_with_isolated_interface_node_is_reported(tg: TypeGraph, host: TypedHypergraph) -> None:
    side = GraphBuilder(tg, "L").node("k", "a1").build()
    report = verify_correspondence(host, Rule.span("id", side, side, ["k"]))
    assert not report.ok
    assert report.rejected_certificates[0].startswith("rule cannot be encoded")


def test_mismatches_fail_the_report() -> None:
    report = CorrespondenceReport(rule="p", host="G", mismatches=["rewriting result without certificate: x"])
    assert not report.ok
    batch = CorrespondenceBatch(seed=3, instances=[report, CorrespondenceReport(rule="q", host="G")])
    assert not batch.ok
    assert batch.failures == 1


@pytest.mark.parametrize("seed", range(10))
def test_random_instances_are_well_formed(seed: int) -> None:
    rng = random.Random(seed)
    g, rule = random_instance(rng, max_nodes=5, max_edges=5)
    assert validate(g).ok
    assert not rule.violations()
    assert rule.isolated_interface_nodes() == ()
    assert find_matches(rule, g)


def test_random_graph_without_edge_types() -> None:
    tg = TypeGraphBuilder("bare").node_type("a").build()
    g = random_graph(random.Random(1), tg, 4, 4)
    assert not g.edges
    assert 1 <= len(g.nodes) <= 4


@pytest.mark.parametrize("seed", range(20))
def test_random_correspondence(seed: int) -> None:
    g, rule = random_instance(random.Random(seed), default_type_graph())
    report = verify_correspondence(g, rule)
    assert report.ok, report.mismatches + report.rejected_certificates
    valid = sum(1 for m in find_matches(rule, g) if satisfies_gluing(m))
    assert report.matches - report.gluing_failures == valid
    assert report.dpo_classes == len(successors(g, [rule]))


def test_system_batch(gts: GTS) -> None:
    batch = verify_system(gts, samples=5, seed=7)
    assert batch.seed == 7
    assert len(batch.instances) == 6
    assert batch.instances[0].rule == "p"
    assert batch.ok


@pytest.mark.slow
def test_correspondence_over_many_seeds() -> None:
    tg = default_type_graph()
    failing = []
    for seed in range(200):
        g, rule = random_instance(random.Random(seed), tg)
        report = verify_correspondence(g, rule)
        if not report.ok:
            failing.append((seed, report.mismatches + report.rejected_certificates))
    assert not failing
