from __future__ import annotations

import random

import pytest

from dpohill.graphs import (
    GraphBuilder,
    TypedHypergraph,
    TypeGraph,
    check_morphism,
    dedup_up_to_iso,
    find_isomorphisms,
    is_isomorphic,
)


def _shuffled(g: TypedHypergraph, rng: random.Random) -> TypedHypergraph:
    nodes = list(g.nodes)
    rng.shuffle(nodes)
    rename = {v: f"n{i}" for i, v in enumerate(nodes)}
    edges = list(g.edges)
    rng.shuffle(edges)
    builder = GraphBuilder(g.type_graph, "copy")
    for v in nodes:
        builder.node(rename[v], g.node_type[v])
    for i, e in enumerate(edges):
        builder.edge(f"f{i}", g.edge_type[e], *(rename[v] for v in g.attach[e]))
    return builder.build()


@pytest.mark.parametrize("seed", range(5))
def test_renamed_copy_is_isomorphic(host: TypedHypergraph, seed: int) -> None:
    copy = _shuffled(host, random.Random(seed))
    assert is_isomorphic(host, copy)
    (iso,) = find_isomorphisms(host, copy, limit=1)
    assert check_morphism(iso)
    assert iso.is_bijective()


def test_attachment_order_matters(tg: TypeGraph) -> None:
    g1 = GraphBuilder(tg).node("p", "a3").node("q", "a3").edge("d", "D", "p", "q").edge("u", "D", "p", "p").build()
    g2 = GraphBuilder(tg).node("p", "a3").node("q", "a3").edge("d", "D", "p", "q").edge("u", "D", "q", "q").build()
    assert not is_isomorphic(g1, g2)


def test_automorphisms_are_enumerated(tg: TypeGraph) -> None:
    g = GraphBuilder(tg).node("p", "a2").node("q", "a2").edge("b1", "B", "p").edge("b2", "B", "q").build()
    assert len(find_isomorphisms(g, g)) == 2
    assert len(find_isomorphisms(g, g, limit=1)) == 1


@pytest.mark.parametrize("limit", [0, -2])
def test_non_positive_limit_is_rejected(tg: TypeGraph, limit: int) -> None:
    g = GraphBuilder(tg).node("p", "a2").edge("b", "B", "p").build()
    with pytest.raises(ValueError, match="limit must be positive"):
        find_isomorphisms(g, g, limit=limit)


def test_different_sizes_are_not_isomorphic(host: TypedHypergraph, result: TypedHypergraph) -> None:
    assert not is_isomorphic(host, result)
    assert find_isomorphisms(host, result) == []


def test_dedup_up_to_iso(host: TypedHypergraph, result: TypedHypergraph) -> None:
    copy = _shuffled(host, random.Random(7))
    assert dedup_up_to_iso([host, result, copy]) == [0, 1]
