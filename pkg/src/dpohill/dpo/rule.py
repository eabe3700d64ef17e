"""
Rules as spans L <- K -> R with a discrete interface, and graph transformation systems.
GTS(...) is built fluently: GTSBuilder(tg).rule(p).rule(q).start(g0).build().
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from dpohill.core.errors import GraphError, TypeGraphMismatch
from dpohill.graphs.hypergraph import (
    GraphBuilder,
    InterfaceGraph,
    Morphism,
    TypedHypergraph,
    TypeGraph,
    morphism_violations,
    validate,
)


@dataclass(frozen=True)
class Rule:
    """Named span; interface is a discrete graph, l and r are its embeddings."""

    name: str
    lhs: TypedHypergraph
    rhs: TypedHypergraph
    interface: TypedHypergraph
    l: Morphism
    r: Morphism

    @classmethod
    def span(
        cls,
        name: str,
        lhs: TypedHypergraph,
        rhs: TypedHypergraph,
        keep: Iterable[str] | Mapping[str, tuple[str, str]],
    ) -> Rule:
        """
        keep lists interface nodes by identifier. A sequence means the same identifier
        in L and R; a mapping k -> (node in L, node in R) allows renaming.
        """
        if isinstance(keep, Mapping):
            pairs = dict(keep)
        else:
            pairs = {k: (k, k) for k in keep}
        builder = GraphBuilder(lhs.type_graph, f"K_{name}")
        for k, (in_l, _) in pairs.items():
            if in_l not in lhs.node_type:
                raise GraphError(f"rule {name}: interface node {k} has no image {in_l} in lhs")
            builder.node(k, lhs.node_type[in_l])
        interface = builder.build()
        l = Morphism(interface, lhs, {k: in_l for k, (in_l, _) in pairs.items()})
        r = Morphism(interface, rhs, {k: in_r for k, (_, in_r) in pairs.items()})
        rule = cls(name, lhs, rhs, interface, l, r)
        problems = rule.violations()
        if problems:
            raise GraphError(f"rule {name}: " + "; ".join(problems))
        return rule

    def violations(self) -> list[str]:
        """Structural problems: typing, discreteness, injectivity of l and r."""
        problems: list[str] = []
        tg = self.lhs.type_graph
        if self.rhs.type_graph != tg or self.interface.type_graph != tg:
            problems.append("lhs, rhs and interface use different type graphs")
        problems += [f"lhs: {p}" for p in validate(self.lhs).violations]
        problems += [f"rhs: {p}" for p in validate(self.rhs).violations]
        if self.interface.edges:
            problems.append("interface is not discrete")
        for side, m in (("l", self.l), ("r", self.r)):
            problems += [f"{side}: {p}" for p in morphism_violations(m)]
            if not m.is_injective():
                problems.append(f"{side} is not injective")
        return problems

    def isolated_interface_nodes(self) -> tuple[str, ...]:
        """Interface nodes isolated in both L and R."""
        return tuple(
            k
            for k in self.interface.nodes
            if not self.lhs.incident_edges(self.l.node_map[k]) and not self.rhs.incident_edges(self.r.node_map[k])
        )

    @property
    def deleted_nodes(self) -> tuple[str, ...]:
        kept = set(self.l.node_map.values())
        return tuple(v for v in self.lhs.nodes if v not in kept)

    @property
    def created_nodes(self) -> tuple[str, ...]:
        kept = set(self.r.node_map.values())
        return tuple(v for v in self.rhs.nodes if v not in kept)

    def left_interface(self) -> InterfaceGraph:
        return InterfaceGraph(self.interface.nodes, self.lhs, dict(self.l.node_map))

    def right_interface(self) -> InterfaceGraph:
        return InterfaceGraph(self.interface.nodes, self.rhs, dict(self.r.node_map))

    def reversed(self) -> Rule:
        """R <- K -> L, named with a trailing '~'."""
        return Rule(f"{self.name}~", self.rhs, self.lhs, self.interface, self.r, self.l)


@dataclass(frozen=True)
class GTS:
    """Type graph, named rules and a start graph."""

    type_graph: TypeGraph
    rules: Mapping[str, Rule]
    start: TypedHypergraph
    name: str = ""

    def rule(self, name: str) -> Rule:
        try:
            return self.rules[name]
        except KeyError:
            raise GraphError(f"no rule named {name!r}") from None


@dataclass
class GTSBuilder:
    """Fluent construction of a GTS; every part must be typed over type_graph."""

    type_graph: TypeGraph
    name: str = ""
    _rules: dict[str, Rule] = field(default_factory=dict)
    _start: TypedHypergraph | None = None

    def rule(self, rule: Rule) -> GTSBuilder:
        if rule.lhs.type_graph != self.type_graph:
            raise TypeGraphMismatch(f"rule {rule.name} is not typed over {self.type_graph.name}")
        if rule.name in self._rules:
            raise GraphError(f"rule {rule.name!r} declared twice")
        self._rules[rule.name] = rule
        return self

    def start(self, graph: TypedHypergraph) -> GTSBuilder:
        if graph.type_graph != self.type_graph:
            raise TypeGraphMismatch(f"start graph {graph.name!r} is not typed over {self.type_graph.name}")
        self._start = graph
        return self

    def build(self) -> GTS:
        start = self._start if self._start is not None else GraphBuilder(self.type_graph, "G0").build()
        return GTS(self.type_graph, dict(self._rules), start, self.name)


@dataclass(frozen=True)
class Match:
    """Total type-preserving morphism from rule.lhs into host."""

    rule: Rule
    host: TypedHypergraph
    morphism: Morphism


@dataclass(frozen=True)
class StepRecord:
    """The DPO diagram of one direct transformation host => result."""

    match: Match
    context: TypedHypergraph
    result: TypedHypergraph
    g: Morphism
    h: Morphism
    d: Morphism
    m_star: Morphism

    @property
    def rule(self) -> Rule:
        return self.match.rule

    @property
    def host(self) -> TypedHypergraph:
        return self.match.host
