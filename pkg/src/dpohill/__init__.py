"""
dpohill: double-pushout rewriting of typed hypergraphs, with every step
certified by a derivation in a linear logic of hidden names and locations.
"""
from dpohill.core import HillError, Settings
from dpohill.dpo import GTS, Rule, apply, find_matches, parse_gts, reachable, successors
from dpohill.encoder import emit_step_derivation, encode_graph, encode_rule, verify_correspondence
from dpohill.graphs import GraphBuilder, TypedHypergraph, TypeGraphBuilder, is_isomorphic, parse_hg
from dpohill.kernel import ProofTree, check, prove

__all__ = [
    "Settings",
    "HillError",
    "TypeGraphBuilder",
    "GraphBuilder",
    "TypedHypergraph",
    "parse_hg",
    "is_isomorphic",
    "Rule",
    "GTS",
    "parse_gts",
    "find_matches",
    "apply",
    "successors",
    "reachable",
    "ProofTree",
    "check",
    "prove",
    "encode_graph",
    "encode_rule",
    "emit_step_derivation",
    "verify_correspondence",
]
