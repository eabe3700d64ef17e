"""Shared fixtures: the worked example system (type graph, G, H, rule p) and its formulas."""
from __future__ import annotations

import pytest

from dpohill.dpo import GTS, GTSBuilder, Match, Rule, find_matches, satisfies_gluing
from dpohill.graphs import GraphBuilder, TypedHypergraph, TypeGraph, TypeGraphBuilder
from dpohill.hill import Formula, parse_formula

GAMMA_G = "ex x1:a1 x2:a2 x3:a2. C(x1) * A(x1, x2) * A(x1, x3) * B(x2)"
GAMMA_H = "ex x1:a1 x2:a2 y3:a3 y4:a3. C(x1) * A(x1, x2) * D(y3, y4) * B(x2)"
DELTA = "all y1:a1. (ex y2:a2. C(y1) * A(y1, y2)) -o (ex y3 y4:a3. C(y1) * D(y3, y4))"


@pytest.fixture
def tg() -> TypeGraph:
    return (
        TypeGraphBuilder("tg")
        .node_type("a1")
        .node_type("a2")
        .node_type("a3")
        .edge_type("A", "a1", "a2")
        .edge_type("B", "a2")
        .edge_type("C", "a1")
        .edge_type("D", "a3", "a3")
        .build()
    )


@pytest.fixture
def host(tg: TypeGraph) -> TypedHypergraph:
    return (
        GraphBuilder(tg, "G")
        .node("x1", "a1")
        .node("x2", "a2")
        .node("x3", "a2")
        .edge("e1", "C", "x1")
        .edge("e2", "A", "x1", "x2")
        .edge("e3", "A", "x1", "x3")
        .edge("e4", "B", "x2")
        .build()
    )


@pytest.fixture
def result(tg: TypeGraph) -> TypedHypergraph:
    return (
        GraphBuilder(tg, "H")
        .node("x1", "a1")
        .node("x2", "a2")
        .node("z1", "a3")
        .node("z2", "a3")
        .edge("e1", "C", "x1")
        .edge("e2", "A", "x1", "x2")
        .edge("e4", "B", "x2")
        .edge("e5", "D", "z1", "z2")
        .build()
    )


@pytest.fixture
def rule_p(tg: TypeGraph) -> Rule:
    lhs = (
        GraphBuilder(tg, "L")
        .node("y1", "a1")
        .node("y2", "a2")
        .edge("c", "C", "y1")
        .edge("a", "A", "y1", "y2")
        .build()
    )
    rhs = (
        GraphBuilder(tg, "R")
        .node("y1", "a1")
        .node("y3", "a3")
        .node("y4", "a3")
        .edge("c", "C", "y1")
        .edge("d", "D", "y3", "y4")
        .build()
    )
    return Rule.span("p", lhs, rhs, ["y1"])


@pytest.fixture
def gts(tg: TypeGraph, host: TypedHypergraph, rule_p: Rule) -> GTS:
    return GTSBuilder(tg, "example").rule(rule_p).start(host).build()


@pytest.fixture
def valid_match(host: TypedHypergraph, rule_p: Rule) -> Match:
    """y2 -> x3; the other match (y2 -> x2) leaves B(x2) dangling."""
    (match,) = [m for m in find_matches(rule_p, host) if satisfies_gluing(m)]
    return match


@pytest.fixture
def gamma_g() -> Formula:
    return parse_formula(GAMMA_G)


@pytest.fixture
def gamma_h() -> Formula:
    return parse_formula(GAMMA_H)


@pytest.fixture
def delta() -> Formula:
    return parse_formula(DELTA)
