from __future__ import annotations

import pytest

from dpohill.core.errors import GraphError, TypeGraphMismatch
from dpohill.graphs import (
    GraphBuilder,
    InterfaceGraph,
    Morphism,
    TypedHypergraph,
    TypeGraph,
    TypeGraphBuilder,
    check_morphism,
    compose,
    disjoint_union,
    identity,
    invert,
    morphism_violations,
    require_same_type_graph,
    validate,
)


def test_builder_preserves_declaration_order(host: TypedHypergraph) -> None:
    assert host.nodes == ("x1", "x2", "x3")
    assert host.edges == ("e1", "e2", "e3", "e4")
    assert host.incident_edges("x1") == ("e1", "e2", "e3")
    assert validate(host).ok


def test_validate_reports_every_problem(tg: TypeGraph) -> None:
    g = (
        GraphBuilder(tg, "bad")
        .node("v", "a1")
        .node("w", "zz")
        .edge("e1", "A", "v", "v")
        .edge("e2", "B", "v", "v")
        .edge("e3", "Q", "v")
        .edge("e4", "C", "ghost")
        .build(check=False)
    )
    report = validate(g)
    assert not report.ok
    joined = "\n".join(report.violations)
    assert "unknown node type zz" in joined
    assert "e1: position 1 expects a2" in joined
    assert "e2: arity mismatch" in joined
    assert "e3: unknown edge type Q" in joined
    assert "e4: attached to unknown nodes ghost" in joined


def test_build_raises_on_invalid_graph(tg: TypeGraph) -> None:
    with pytest.raises(GraphError, match="arity mismatch"):
        GraphBuilder(tg).node("v", "a2").edge("e", "B", "v", "v").build()


def test_duplicate_identifiers_are_rejected(tg: TypeGraph) -> None:
    with pytest.raises(GraphError, match="declared twice"):
        GraphBuilder(tg).node("v", "a1").node("v", "a1")
    with pytest.raises(GraphError, match="declared twice"):
        GraphBuilder(tg).node("v", "a1").edge("e", "C", "v").edge("e", "C", "v")


def test_type_graph_arity_must_use_declared_node_types() -> None:
    with pytest.raises(GraphError):
        TypeGraphBuilder("t").node_type("a").edge_type("E", "a", "b").build()


def test_empty_graph(tg: TypeGraph) -> None:
    g = GraphBuilder(tg).build()
    assert g.is_empty()
    assert validate(g).ok


def _sub(tg: TypeGraph) -> TypedHypergraph:
    return GraphBuilder(tg, "S").node("p", "a1").node("q", "a2").edge("f", "A", "p", "q").build()


def test_morphism_checks(tg: TypeGraph, host: TypedHypergraph) -> None:
    s = _sub(tg)
    good = Morphism(s, host, {"p": "x1", "q": "x3"}, {"f": "e3"})
    assert check_morphism(good)
    wrong_edge = Morphism(s, host, {"p": "x1", "q": "x3"}, {"f": "e2"})
    assert not check_morphism(wrong_edge)
    wrong_type = Morphism(s, host, {"p": "x2", "q": "x3"}, {"f": "e3"})
    assert morphism_violations(wrong_type)
    partial = Morphism(s, host, {"p": "x1"}, {"f": "e3"})
    assert not check_morphism(partial)


def test_compose_and_invert(tg: TypeGraph, host: TypedHypergraph) -> None:
    s = _sub(tg)
    m = Morphism(s, host, {"p": "x1", "q": "x3"}, {"f": "e3"})
    assert compose(identity(s), m).node_map == m.node_map
    assert compose(m, identity(host)).edge_map == m.edge_map
    swap = Morphism(host, host, {"x1": "x1", "x2": "x2", "x3": "x3"}, {e: e for e in host.edges})
    assert invert(swap).node_map == swap.node_map
    assert identity(host).is_bijective()
    with pytest.raises(GraphError):
        invert(m)


def test_interface_graph(host: TypedHypergraph) -> None:
    ig = InterfaceGraph.over(host, ["x2", "x1"])
    assert ig.external == ("x2", "x1")
    assert ig.internal == ("x3",)
    assert ig.violations() == []
    broken = InterfaceGraph(("i",), host, {"i": "nope"})
    assert any("not a body node" in p for p in broken.violations())


def test_disjoint_union(host: TypedHypergraph, result: TypedHypergraph) -> None:
    union, left, right = disjoint_union(host, result)
    assert len(union.nodes) == len(host.nodes) + len(result.nodes)
    assert len(union.edges) == len(host.edges) + len(result.edges)
    assert check_morphism(left) and check_morphism(right)
    assert set(left.node_map.values()).isdisjoint(right.node_map.values())


def test_type_graph_mismatch(host: TypedHypergraph) -> None:
    other = TypeGraphBuilder("other").node_type("a1").build()
    g = GraphBuilder(other).node("v", "a1").build()
    with pytest.raises(TypeGraphMismatch):
        require_same_type_graph(host, g)
