"""Match enumeration and the two halves of the gluing condition."""
from __future__ import annotations

from typing import Iterator

from dpohill.core.errors import TypeGraphMismatch
from dpohill.dpo.rule import Match, Rule
from dpohill.graphs.hypergraph import Morphism, TypedHypergraph


def iter_morphisms(source: TypedHypergraph, target: TypedHypergraph) -> Iterator[Morphism]:
    """
    All total type-preserving morphisms source -> target, not necessarily injective.
    Order: source edges then isolated source nodes, each ranging over target
    elements in target order.
    """
    edges = source.edges
    covered = {v for e in edges for v in source.attach[e]}
    isolated = [v for v in source.nodes if v not in covered]
    candidates = {
        label: [f for f in target.edges if target.edge_type[f] == label] for label in set(source.edge_type.values())
    }

    def bind_edge(i: int, node_map: dict[str, str], edge_map: dict[str, str]) -> Iterator[Morphism]:
        if i == len(edges):
            yield from bind_node(0, node_map, edge_map)
            return
        e = edges[i]
        for f in candidates[source.edge_type[e]]:
            added: list[str] = []
            consistent = True
            for v, w in zip(source.attach[e], target.attach[f]):
                image = node_map.get(v)
                if image is None:
                    node_map[v] = w
                    added.append(v)
                elif image != w:
                    consistent = False
                    break
            if consistent:
                edge_map[e] = f
                yield from bind_edge(i + 1, node_map, edge_map)
                del edge_map[e]
            for v in added:
                del node_map[v]

    def bind_node(j: int, node_map: dict[str, str], edge_map: dict[str, str]) -> Iterator[Morphism]:
        if j == len(isolated):
            yield Morphism(
                source,
                target,
                {v: node_map[v] for v in source.nodes},
                {e: edge_map[e] for e in edges},
            )
            return
        v = isolated[j]
        for w in target.nodes:
            if target.node_type[w] == source.node_type[v]:
                node_map[v] = w
                yield from bind_node(j + 1, node_map, edge_map)
                del node_map[v]

    yield from bind_edge(0, {}, {})


def find_matches(rule: Rule, host: TypedHypergraph) -> list[Match]:
    if rule.lhs.type_graph != host.type_graph:
        raise TypeGraphMismatch(f"rule {rule.name} and host {host.name!r} use different type graphs")
    return [Match(rule, host, m) for m in iter_morphisms(rule.lhs, host)]


def identification_witnesses(match: Match) -> list[tuple[str, ...]]:
    """Pairs (deleted x, other y) of L elements with the same image."""
    rule, m = match.rule, match.morphism
    kept = set(rule.l.node_map.values())
    witnesses: list[tuple[str, ...]] = []
    deleted = rule.deleted_nodes
    for x in deleted:
        for y in rule.lhs.nodes:
            if y == x or m.node_map[x] != m.node_map[y]:
                continue
            if y in kept or deleted.index(x) < deleted.index(y):
                witnesses.append((f"node {m.node_map[x]}", f"lhs nodes {x} and {y}"))
    # the interface is discrete, so every L edge is deleted
    edges = rule.lhs.edges
    for i, x in enumerate(edges):
        for y in edges[i + 1 :]:
            if m.edge_map[x] == m.edge_map[y]:
                witnesses.append((f"edge {m.edge_map[x]}", f"lhs edges {x} and {y}"))
    return witnesses


def check_identification(match: Match) -> bool:
    return not identification_witnesses(match)


def dangling_witnesses(match: Match) -> list[tuple[str, ...]]:
    """(host node, host edge) with the node deleted and the edge outside m(L_E)."""
    rule, m, host = match.rule, match.morphism, match.host
    matched = set(m.edge_map.values())
    deleted = sorted({m.node_map[v] for v in rule.deleted_nodes}, key=host.nodes.index)
    witnesses: list[tuple[str, ...]] = []
    for w in deleted:
        for f in host.incident_edges(w):
            if f not in matched:
                witnesses.append((f"node {w}", f"edge {f}"))
    return witnesses


def check_dangling(match: Match) -> bool:
    return not dangling_witnesses(match)


def satisfies_gluing(match: Match) -> bool:
    return check_identification(match) and check_dangling(match)
