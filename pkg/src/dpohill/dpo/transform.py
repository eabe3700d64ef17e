"""Pushout complement, pushout, direct transformations and bounded reachability."""
from __future__ import annotations

import logging
from typing import Final, NamedTuple, Sequence

from dpohill.core.errors import GluingViolation, GraphError
from dpohill.dpo.matching import dangling_witnesses, find_matches, identification_witnesses
from dpohill.dpo.rule import GTS, Match, Rule, StepRecord
from dpohill.graphs.hypergraph import GraphBuilder, Morphism, TypedHypergraph
from dpohill.graphs.iso import is_isomorphic

_LOGGER: Final = logging.getLogger(__name__)


def pushout_complement(match: Match) -> tuple[TypedHypergraph, Morphism, Morphism]:
    """
    D = host minus the images of L \\ l(K); returns (D, d: K -> D, g: D -> host).
    Raises GluingViolation naming the failed sub-condition(s).
    """
    ident = identification_witnesses(match)
    dangling = dangling_witnesses(match)
    if ident and dangling:
        raise GluingViolation("identification and dangling", ident + dangling)
    if ident:
        raise GluingViolation("identification", ident)
    if dangling:
        raise GluingViolation("dangling", dangling)

    rule, m, host = match.rule, match.morphism, match.host
    gone_nodes = {m.node_map[v] for v in rule.deleted_nodes}
    gone_edges = set(m.edge_map.values())
    builder = GraphBuilder(host.type_graph, f"D_{host.name}" if host.name else "D")
    for v in host.nodes:
        if v not in gone_nodes:
            builder.node(v, host.node_type[v])
    for e in host.edges:
        if e not in gone_edges:
            builder.edge(e, host.edge_type[e], *host.attach[e])
    context = builder.build()
    d = Morphism(rule.interface, context, {k: m.node_map[rule.l.node_map[k]] for k in rule.interface.nodes})
    g = Morphism(context, host, {v: v for v in context.nodes}, {e: e for e in context.edges})
    return context, d, g


def _fresh(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}.{i}" in taken:
        i += 1
    return f"{base}.{i}"


def pushout(d: Morphism, rule: Rule, name: str = "H") -> tuple[TypedHypergraph, Morphism, Morphism]:
    """
    H = D plus a copy of R \\ r(K), with R's attachments at r(K) redirected through d.
    Copies keep their R identifier unless it is taken, else get the next free `.<i>` suffix.
    Returns (H, h: D -> H, m*: R -> H).
    """
    context = d.target
    builder = GraphBuilder(context.type_graph, name)
    taken_nodes = set(context.nodes)
    taken_edges = set(context.edges)
    for v in context.nodes:
        builder.node(v, context.node_type[v])
    for e in context.edges:
        builder.edge(e, context.edge_type[e], *context.attach[e])

    node_map = {rule.r.node_map[k]: d.node_map[k] for k in rule.interface.nodes}
    for v in rule.created_nodes:
        fresh = _fresh(v, taken_nodes)
        taken_nodes.add(fresh)
        node_map[v] = fresh
        builder.node(fresh, rule.rhs.node_type[v])
    edge_map: dict[str, str] = {}
    for e in rule.rhs.edges:
        fresh = _fresh(e, taken_edges)
        taken_edges.add(fresh)
        edge_map[e] = fresh
        builder.edge(fresh, rule.rhs.edge_type[e], *(node_map[v] for v in rule.rhs.attach[e]))
    result = builder.build()
    h = Morphism(context, result, {v: v for v in context.nodes}, {e: e for e in context.edges})
    m_star = Morphism(rule.rhs, result, {v: node_map[v] for v in rule.rhs.nodes}, edge_map)
    return result, h, m_star


def apply(rule: Rule, match: Match) -> StepRecord:
    if match.rule != rule:
        raise GraphError(f"match belongs to rule {match.rule.name}, not {rule.name}")
    context, d, g = pushout_complement(match)
    result, h, m_star = pushout(d, rule, f"H_{match.host.name}" if match.host.name else "H")
    return StepRecord(match, context, result, g, h, d, m_star)


def forced_result(match: Match, name: str = "H") -> TypedHypergraph:
    """
    What firing match would give with the gluing conditions ignored: dangling edges
    disappear with their nodes, and a node that is both deleted and kept stays.
    Equals apply(...).result up to iso when the conditions hold.
    """
    rule, m, host = match.rule, match.morphism, match.host
    kept = {m.node_map[rule.l.node_map[k]] for k in rule.interface.nodes}
    gone_nodes = {m.node_map[v] for v in rule.deleted_nodes} - kept
    gone_edges = set(m.edge_map.values()) | {e for e in host.edges if gone_nodes & set(host.attach[e])}
    builder = GraphBuilder(host.type_graph, f"D_{host.name}" if host.name else "D")
    for v in host.nodes:
        if v not in gone_nodes:
            builder.node(v, host.node_type[v])
    for e in host.edges:
        if e not in gone_edges:
            builder.edge(e, host.edge_type[e], *host.attach[e])
    context = builder.build()
    d = Morphism(rule.interface, context, {k: m.node_map[rule.l.node_map[k]] for k in rule.interface.nodes})
    result, _, _ = pushout(d, rule, name)
    return result


def comatch(step: StepRecord) -> Match:
    """Match of the reversed rule into the result, induced by m*."""
    reverse = step.rule.reversed()
    m = step.m_star
    return Match(reverse, step.result, Morphism(reverse.lhs, step.result, dict(m.node_map), dict(m.edge_map)))


class Successor(NamedTuple):
    rule: Rule
    match_index: int
    step: StepRecord

    @property
    def result(self) -> TypedHypergraph:
        return self.step.result


def successors(g: TypedHypergraph, rules: Sequence[Rule]) -> list[Successor]:
    """
    One successor per iso class of results over all gluing-valid matches,
    represented by the first (rule order, match order) step producing it.
    """
    found: list[Successor] = []
    for rule in rules:
        for index, match in enumerate(find_matches(rule, g)):
            if identification_witnesses(match) or dangling_witnesses(match):
                continue
            step = apply(rule, match)
            if any(is_isomorphic(s.result, step.result) for s in found):
                continue
            found.append(Successor(rule, index, step))
    return found


class TraceEntry(NamedTuple):
    rule: str
    match_index: int
    step: StepRecord


def _labels_reachable(gts: GTS, target: TypedHypergraph) -> bool:
    nodes = set(gts.start.node_type.values())
    edges = set(gts.start.edge_type.values())
    for rule in gts.rules.values():
        nodes |= set(rule.rhs.node_type.values())
        edges |= set(rule.rhs.edge_type.values())
    return set(target.node_type.values()) <= nodes and set(target.edge_type.values()) <= edges


def reachable(gts: GTS, target: TypedHypergraph, depth: int) -> list[TraceEntry] | None:
    """
    Breadth-first search over iso classes up to `depth` steps.
    None means not found within the bound, not unreachable.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if is_isomorphic(gts.start, target):
        return []
    if not _labels_reachable(gts, target):
        _LOGGER.debug("target uses labels no rule can create")
        return None
    rules = list(gts.rules.values())
    seen: list[TypedHypergraph] = [gts.start]
    frontier: list[tuple[TypedHypergraph, list[TraceEntry]]] = [(gts.start, [])]
    for level in range(1, depth + 1):
        following: list[tuple[TypedHypergraph, list[TraceEntry]]] = []
        for graph, trace in frontier:
            for succ in successors(graph, rules):
                result = succ.result
                if any(is_isomorphic(s, result) for s in seen):
                    continue
                seen.append(result)
                extended = trace + [TraceEntry(succ.rule.name, succ.match_index, succ.step)]
                if is_isomorphic(result, target):
                    _LOGGER.debug("target reached at depth %d after %d states", level, len(seen))
                    return extended
                following.append((result, extended))
        _LOGGER.debug("depth %d: %d new states", level, len(following))
        if not following:
            break
        frontier = following
    return None
