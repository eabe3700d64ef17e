"""Isomorphism of typed hypergraphs via networkx VF2 on the bipartite incidence digraph."""
from __future__ import annotations

from typing import Iterator

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from dpohill.graphs.hypergraph import Morphism, TypedHypergraph


def incidence_digraph(g: TypedHypergraph) -> nx.DiGraph:
    """
    One vertex per node and per edge, labelled with kind and type.
    Arc edge -> node carries every position at which the node is attached.
    """
    dg = nx.DiGraph()
    for v, label in g.node_type.items():
        dg.add_node(("n", v), label=("node", label))
    for e, label in g.edge_type.items():
        dg.add_node(("e", e), label=("edge", label))
        positions: dict[str, list[int]] = {}
        for position, v in enumerate(g.attach[e]):
            positions.setdefault(v, []).append(position)
        for v, pos in positions.items():
            dg.add_edge(("e", e), ("n", v), pos=tuple(pos))
    return dg


def _invariants(g: TypedHypergraph) -> tuple:
    return (
        sorted(g.node_type.values()),
        sorted(g.edge_type.values()),
        sorted(g.degree_signature(v) for v in g.nodes),
    )


def iter_isomorphisms(g1: TypedHypergraph, g2: TypedHypergraph) -> Iterator[Morphism]:
    if len(g1.nodes) != len(g2.nodes) or len(g1.edges) != len(g2.edges):
        return
    if _invariants(g1) != _invariants(g2):
        return
    matcher = DiGraphMatcher(
        incidence_digraph(g1),
        incidence_digraph(g2),
        node_match=lambda a, b: a["label"] == b["label"],
        edge_match=lambda a, b: a["pos"] == b["pos"],
    )
    for mapping in matcher.isomorphisms_iter():
        node_map = {v: w for (kind, v), (_, w) in mapping.items() if kind == "n"}
        edge_map = {e: f for (kind, e), (_, f) in mapping.items() if kind == "e"}
        yield Morphism(
            g1,
            g2,
            {v: node_map[v] for v in g1.nodes},
            {e: edge_map[e] for e in g1.edges},
        )


def find_isomorphisms(g1: TypedHypergraph, g2: TypedHypergraph, limit: int | None = None) -> list[Morphism]:
    """Up to `limit` isomorphisms g1 -> g2 (all when None); empty iff the graphs are not isomorphic."""
    if limit is not None and limit < 1:
        raise ValueError(f"limit must be positive or None, got {limit}")
    found: list[Morphism] = []
    for iso in iter_isomorphisms(g1, g2):
        found.append(iso)
        if limit is not None and len(found) >= limit:
            break
    return found


def is_isomorphic(g1: TypedHypergraph, g2: TypedHypergraph) -> bool:
    return next(iter_isomorphisms(g1, g2), None) is not None


def dedup_up_to_iso(graphs: list[TypedHypergraph]) -> list[int]:
    """Indices of the first representative of every iso class, in input order."""
    kept: list[int] = []
    for i, g in enumerate(graphs):
        if not any(is_isomorphic(graphs[j], g) for j in kept):
            kept.append(i)
    return kept
