"""
Typed hypergraphs over a fixed type graph, their morphisms and interfaces.
Values are immutable after construction; builders produce them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from pydantic import BaseModel, computed_field

from dpohill.core.errors import GraphError, TypeGraphMismatch


@dataclass(frozen=True)
class TypeGraph:
    """Node-type labels, edge-type labels and the arity of every edge type."""

    name: str
    node_types: tuple[str, ...]
    arity: Mapping[str, tuple[str, ...]]

    @property
    def edge_types(self) -> tuple[str, ...]:
        return tuple(self.arity)


class TypeGraphBuilder:
    """Fluent construction: TypeGraphBuilder("tg").node_type("a").edge_type("E", "a", "a").build()."""

    def __init__(self, name: str) -> None:
        self.name = name
        self._node_types: list[str] = []
        self._arity: dict[str, tuple[str, ...]] = {}

    def node_type(self, label: str) -> TypeGraphBuilder:
        self._node_types.append(label)
        return self

    def edge_type(self, label: str, *arity: str) -> TypeGraphBuilder:
        if label in self._arity:
            raise GraphError(f"edge type {label!r} declared twice")
        self._arity[label] = tuple(arity)
        return self

    def build(self) -> TypeGraph:
        tg = TypeGraph(self.name, tuple(self._node_types), dict(self._arity))
        problems = type_graph_violations(tg)
        if problems:
            raise GraphError("; ".join(problems))
        return tg


def type_graph_violations(tg: TypeGraph) -> list[str]:
    problems: list[str] = []
    if len(set(tg.node_types)) != len(tg.node_types):
        problems.append(f"type graph {tg.name}: duplicate node-type labels")
    known = set(tg.node_types)
    for label, arity in tg.arity.items():
        for position, node_type in enumerate(arity):
            if node_type not in known:
                problems.append(
                    f"type graph {tg.name}: edge type {label} position {position} uses unknown node type {node_type}"
                )
    return problems


@dataclass(frozen=True)
class TypedHypergraph:
    """
    Hypergraph (V, E, s) with its typing morphism into type_graph.
    Dict insertion order is the deterministic identifier order.
    """

    type_graph: TypeGraph
    node_type: Mapping[str, str]
    edge_type: Mapping[str, str]
    attach: Mapping[str, tuple[str, ...]]
    name: str = ""

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(self.node_type)

    @property
    def edges(self) -> tuple[str, ...]:
        return tuple(self.edge_type)

    def incident_edges(self, node: str) -> tuple[str, ...]:
        return tuple(e for e, seq in self.attach.items() if node in seq)

    def degree_signature(self, node: str) -> tuple[tuple[str, int], ...]:
        """Sorted (edge type, position) occurrences of node: an iso-invariant."""
        return tuple(
            sorted(
                (self.edge_type[e], position)
                for e, seq in self.attach.items()
                for position, v in enumerate(seq)
                if v == node
            )
        )

    def is_empty(self) -> bool:
        return not self.node_type and not self.edge_type

    def renamed(self, name: str) -> TypedHypergraph:
        return TypedHypergraph(self.type_graph, self.node_type, self.edge_type, self.attach, name)


class GraphBuilder:
    """Fluent construction: GraphBuilder(tg).node("v", "a").edge("e", "E", "v", "v").build()."""

    def __init__(self, type_graph: TypeGraph, name: str = "") -> None:
        self.type_graph = type_graph
        self.name = name
        self._node_type: dict[str, str] = {}
        self._edge_type: dict[str, str] = {}
        self._attach: dict[str, tuple[str, ...]] = {}

    def node(self, node_id: str, node_type: str) -> GraphBuilder:
        if node_id in self._node_type:
            raise GraphError(f"node {node_id!r} declared twice")
        self._node_type[node_id] = node_type
        return self

    def edge(self, edge_id: str, edge_type: str, *nodes: str) -> GraphBuilder:
        if edge_id in self._edge_type:
            raise GraphError(f"edge {edge_id!r} declared twice")
        self._edge_type[edge_id] = edge_type
        self._attach[edge_id] = tuple(nodes)
        return self

    def build(self, *, check: bool = True) -> TypedHypergraph:
        g = TypedHypergraph(
            self.type_graph, dict(self._node_type), dict(self._edge_type), dict(self._attach), self.name
        )
        if check:
            report = validate(g)
            if not report.ok:
                raise GraphError("; ".join(report.violations))
        return g


class ValidationReport(BaseModel):
    """Every violated invariant of a graph; empty iff well-formed."""

    subject: str = ""
    violations: list[str] = []

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ok(self) -> bool:
        return not self.violations


def validate(g: TypedHypergraph) -> ValidationReport:
    tg = g.type_graph
    violations = type_graph_violations(tg)
    node_types = set(tg.node_types)
    for v, label in g.node_type.items():
        if label not in node_types:
            violations.append(f"node {v}: unknown node type {label}")
    if set(g.attach) != set(g.edge_type):
        missing = sorted(set(g.edge_type) - set(g.attach))
        extra = sorted(set(g.attach) - set(g.edge_type))
        if missing:
            violations.append(f"edges without attachment: {', '.join(missing)}")
        if extra:
            violations.append(f"attachment for undeclared edges: {', '.join(extra)}")
    for e, label in g.edge_type.items():
        if label not in tg.arity:
            violations.append(f"edge {e}: unknown edge type {label}")
            continue
        seq = g.attach.get(e, ())
        dangling = [v for v in seq if v not in g.node_type]
        if dangling:
            violations.append(f"edge {e}: attached to unknown nodes {', '.join(dangling)}")
            continue
        expected = tg.arity[label]
        if len(seq) != len(expected):
            violations.append(f"edge {e}: arity mismatch, {label} expects {len(expected)} nodes, got {len(seq)}")
            continue
        for position, (v, wanted) in enumerate(zip(seq, expected)):
            if g.node_type[v] != wanted:
                violations.append(
                    f"edge {e}: position {position} expects {wanted}, node {v} has type {g.node_type[v]}"
                )
    return ValidationReport(subject=g.name, violations=violations)


@dataclass(frozen=True)
class Morphism:
    """Pair of maps (nodes, edges) from source to target."""

    source: TypedHypergraph
    target: TypedHypergraph
    node_map: Mapping[str, str]
    edge_map: Mapping[str, str] = field(default_factory=dict)

    def __call__(self, item: str) -> str:
        """Image of a node or an edge identifier (nodes first)."""
        if item in self.node_map:
            return self.node_map[item]
        return self.edge_map[item]

    def is_injective(self) -> bool:
        return (
            len(set(self.node_map.values())) == len(self.node_map)
            and len(set(self.edge_map.values())) == len(self.edge_map)
        )

    def is_bijective(self) -> bool:
        return (
            self.is_injective()
            and set(self.node_map.values()) == set(self.target.nodes)
            and set(self.edge_map.values()) == set(self.target.edges)
        )


def morphism_violations(m: Morphism) -> list[str]:
    problems: list[str] = []
    src, tgt = m.source, m.target
    for v in src.nodes:
        image = m.node_map.get(v)
        if image is None:
            problems.append(f"node {v} has no image")
        elif image not in tgt.node_type:
            problems.append(f"node {v} mapped outside target ({image})")
        elif tgt.node_type[image] != src.node_type[v]:
            problems.append(f"node {v}: type {src.node_type[v]} mapped to {image} of type {tgt.node_type[image]}")
    for e in src.edges:
        image = m.edge_map.get(e)
        if image is None:
            problems.append(f"edge {e} has no image")
            continue
        if image not in tgt.edge_type:
            problems.append(f"edge {e} mapped outside target ({image})")
            continue
        if tgt.edge_type[image] != src.edge_type[e]:
            problems.append(f"edge {e}: type {src.edge_type[e]} mapped to {image} of type {tgt.edge_type[image]}")
            continue
        mapped = tuple(m.node_map.get(v) for v in src.attach[e])
        if mapped != tuple(tgt.attach[image]):
            problems.append(f"edge {e}: attachment {mapped} differs from image attachment {tgt.attach[image]}")
    return problems


def check_morphism(m: Morphism) -> bool:
    return not morphism_violations(m)


def identity(g: TypedHypergraph) -> Morphism:
    return Morphism(g, g, {v: v for v in g.nodes}, {e: e for e in g.edges})


def compose(first: Morphism, second: Morphism) -> Morphism:
    """first: A -> B, second: B -> C, result A -> C."""
    return Morphism(
        first.source,
        second.target,
        {v: second.node_map[w] for v, w in first.node_map.items()},
        {e: second.edge_map[f] for e, f in first.edge_map.items()},
    )


def invert(iso: Morphism) -> Morphism:
    if not iso.is_bijective():
        raise GraphError("only bijective morphisms can be inverted")
    return Morphism(
        iso.target,
        iso.source,
        {w: v for v, w in iso.node_map.items()},
        {f: e for e, f in iso.edge_map.items()},
    )


@dataclass(frozen=True)
class InterfaceGraph:
    """Graph with external nodes I embedded injectively into body."""

    interface_nodes: tuple[str, ...]
    body: TypedHypergraph
    embedding: Mapping[str, str]

    @classmethod
    def over(cls, body: TypedHypergraph, external: Iterable[str]) -> InterfaceGraph:
        """Interface made of body nodes themselves (identity embedding)."""
        nodes = tuple(external)
        return cls(nodes, body, {v: v for v in nodes})

    def violations(self) -> list[str]:
        problems = validate(self.body).violations
        if set(self.embedding) != set(self.interface_nodes):
            problems.append("embedding is not total on the interface")
        images = [self.embedding[i] for i in self.interface_nodes if i in self.embedding]
        if len(set(images)) != len(images):
            problems.append("embedding is not injective")
        for image in images:
            if image not in self.body.node_type:
                problems.append(f"interface image {image} is not a body node")
        return problems

    @property
    def external(self) -> tuple[str, ...]:
        """Body nodes in the image of the interface, in interface order."""
        return tuple(self.embedding[i] for i in self.interface_nodes)

    @property
    def internal(self) -> tuple[str, ...]:
        ext = set(self.external)
        return tuple(v for v in self.body.nodes if v not in ext)


def require_same_type_graph(*graphs: TypedHypergraph) -> TypeGraph:
    tg = graphs[0].type_graph
    for g in graphs[1:]:
        if g.type_graph != tg:
            raise TypeGraphMismatch(f"graphs {graphs[0].name!r} and {g.name!r} use different type graphs")
    return tg


def disjoint_union(
    g1: TypedHypergraph, g2: TypedHypergraph, tags: tuple[str, str] = ("1", "2")
) -> tuple[TypedHypergraph, Morphism, Morphism]:
    """Tagged copies of both graphs side by side, with the two injections."""
    tg = require_same_type_graph(g1, g2)
    builder = GraphBuilder(tg, f"{g1.name}+{g2.name}")
    injections: list[Morphism] = []
    maps: list[tuple[dict[str, str], dict[str, str]]] = []
    for tag, g in zip(tags, (g1, g2)):
        node_map = {v: f"{tag}.{v}" for v in g.nodes}
        edge_map = {e: f"{tag}.{e}" for e in g.edges}
        for v in g.nodes:
            builder.node(node_map[v], g.node_type[v])
        for e in g.edges:
            builder.edge(edge_map[e], g.edge_type[e], *(node_map[v] for v in g.attach[e]))
        maps.append((node_map, edge_map))
    union = builder.build()
    for g, (node_map, edge_map) in zip((g1, g2), maps):
        injections.append(Morphism(g, union, node_map, edge_map))
    return union, injections[0], injections[1]
