from dpohill.graphs.hypergraph import (
    GraphBuilder,
    InterfaceGraph,
    Morphism,
    TypedHypergraph,
    TypeGraph,
    TypeGraphBuilder,
    ValidationReport,
    check_morphism,
    compose,
    disjoint_union,
    identity,
    invert,
    morphism_violations,
    require_same_type_graph,
    validate,
)
from dpohill.graphs.iso import dedup_up_to_iso, find_isomorphisms, is_isomorphic, iter_isomorphisms
from dpohill.graphs.text import Document, format_hg, format_type_graph, parse_hg

__all__ = [
    "TypeGraph",
    "TypeGraphBuilder",
    "TypedHypergraph",
    "GraphBuilder",
    "Morphism",
    "InterfaceGraph",
    "ValidationReport",
    "validate",
    "check_morphism",
    "morphism_violations",
    "identity",
    "compose",
    "invert",
    "disjoint_union",
    "require_same_type_graph",
    "find_isomorphisms",
    "iter_isomorphisms",
    "is_isomorphic",
    "dedup_up_to_iso",
    "Document",
    "parse_hg",
    "format_hg",
    "format_type_graph",
]
