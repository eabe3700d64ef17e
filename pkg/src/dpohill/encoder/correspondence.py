"""
DPO steps against their certificates: the iso classes produced by rewriting
must be exactly the iso classes whose step derivations pass the checker.
"""
from __future__ import annotations

import logging
import random
from typing import Final

from pydantic import BaseModel, computed_field

from dpohill.core.errors import EmissionError, GluingViolation, GraphError, NotNormalForm
from dpohill.dpo.matching import find_matches
from dpohill.dpo.rule import GTS, Rule
from dpohill.dpo.transform import apply, forced_result, successors
from dpohill.encoder.graphs import decode
from dpohill.encoder.rules import rule_signature
from dpohill.encoder.steps import emit_step_derivation, step_sequent, transformation_sequent
from dpohill.graphs.hypergraph import GraphBuilder, TypedHypergraph, TypeGraph, TypeGraphBuilder
from dpohill.graphs.iso import is_isomorphic
from dpohill.graphs.text import format_graph_body
from dpohill.hill.syntax import Lolli
from dpohill.kernel.check import check
from dpohill.kernel.proof import ProofTree
from dpohill.kernel.search import prove

_LOGGER: Final = logging.getLogger(__name__)


class CorrespondenceReport(BaseModel):
    rule: str
    host: str
    matches: int = 0
    gluing_failures: int = 0
    dpo_classes: int = 0
    certified_classes: int = 0
    mismatches: list[str] = []
    rejected_certificates: list[str] = []

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.rejected_certificates


class CorrespondenceBatch(BaseModel):
    seed: int
    instances: list[CorrespondenceReport] = []

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.instances)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def failures(self) -> int:
        return sum(not r.ok for r in self.instances)


def _one_line(g: TypedHypergraph) -> str:
    return "; ".join(format_graph_body(g).splitlines())


def _add_class(classes: list[TypedHypergraph], g: TypedHypergraph) -> None:
    if not any(is_isomorphic(c, g) for c in classes):
        classes.append(g)


def verify_correspondence(g: TypedHypergraph, rule: Rule, depth: int = 0) -> CorrespondenceReport:
    """
    Rewriting side: dpo.successors. Logic side: for every gluing-valid match the
    emitted step derivation, checked and decoded. When emission fails and depth
    is positive, a bounded search for the step sequent stands in.

    For a match violating the gluing conditions and a positive depth, a bounded
    search for rule |- G -o H' runs, H' being forced_result of the match; a checked
    proof is a mismatch.
    """
    report = CorrespondenceReport(rule=rule.name, host=g.name or "G")
    try:
        rule_signature(rule)
    except GraphError as err:
        report.rejected_certificates.append(f"rule cannot be encoded: {err.message}")
        return report
    rewritten = [s.result for s in successors(g, [rule])]
    certified: list[TypedHypergraph] = []
    for index, match in enumerate(find_matches(rule, g)):
        report.matches += 1
        try:
            step = apply(rule, match)
        except GluingViolation:
            report.gluing_failures += 1
            if depth > 0:
                forced = prove(transformation_sequent(rule, g, forced_result(match)), depth)
                if forced is not None and check(forced).ok:
                    report.mismatches.append(f"match {index} violates the gluing conditions but is certified")
            continue
        tree: ProofTree | None
        try:
            tree = emit_step_derivation(step)
        except EmissionError as err:
            _LOGGER.debug("match %d: emission failed: %s", index, err)
            tree = prove(step_sequent(step), depth) if depth > 0 else None
        if tree is None:
            continue
        checked = check(tree)
        if not checked.ok:
            report.rejected_certificates.append(f"match {index}: {checked.failures[0]}")
            continue
        goal = tree.conclusion.goal
        if not isinstance(goal, Lolli):
            report.rejected_certificates.append(f"match {index}: certificate does not prove an implication")
            continue
        try:
            _add_class(certified, decode(goal.right, g.type_graph, "H"))
        except NotNormalForm as err:
            report.rejected_certificates.append(f"match {index}: {err.message}")
    report.dpo_classes = len(rewritten)
    report.certified_classes = len(certified)
    for h in rewritten:
        if not any(is_isomorphic(h, c) for c in certified):
            report.mismatches.append(f"rewriting result without certificate: {_one_line(h)}")
    for c in certified:
        if not any(is_isomorphic(c, h) for h in rewritten):
            report.mismatches.append(f"certified result not produced by rewriting: {_one_line(c)}")
    return report


# --- random instances ---


def default_type_graph() -> TypeGraph:
    return (
        TypeGraphBuilder("random")
        .node_type("a")
        .node_type("b")
        .edge_type("E", "a", "a")
        .edge_type("F", "a", "b")
        .edge_type("U", "b")
        .build()
    )


def _random_edges(
    rng: random.Random, tg: TypeGraph, builder: GraphBuilder, nodes: dict[str, str], count: int, prefix: str
) -> None:
    by_type: dict[str, list[str]] = {}
    for v, label in nodes.items():
        by_type.setdefault(label, []).append(v)
    made = 0
    if not tg.edge_types:
        return
    for _ in range(count):
        label = rng.choice(tg.edge_types)
        arity = tg.arity[label]
        if any(sort not in by_type for sort in arity):
            continue
        made += 1
        builder.edge(f"{prefix}{made}", label, *(rng.choice(by_type[sort]) for sort in arity))


def random_graph(
    rng: random.Random, tg: TypeGraph | None = None, max_nodes: int = 6, max_edges: int = 6, name: str = "G"
) -> TypedHypergraph:
    tg = tg or default_type_graph()
    builder = GraphBuilder(tg, name)
    nodes = {f"v{i}": rng.choice(tg.node_types) for i in range(1, rng.randint(1, max_nodes) + 1)}
    for v, label in nodes.items():
        builder.node(v, label)
    _random_edges(rng, tg, builder, nodes, rng.randint(0, max_edges), "e")
    return builder.build()


def random_instance(
    rng: random.Random,
    tg: TypeGraph | None = None,
    max_nodes: int = 6,
    max_edges: int = 6,
    rule_nodes: int = 3,
    rule_edges: int = 3,
) -> tuple[TypedHypergraph, Rule]:
    """
    A host graph and a rule whose lhs is cut out of the host, so matches usually
    exist; interface, created nodes and rhs edges are drawn at random.
    """
    tg = tg or default_type_graph()
    g = random_graph(rng, tg, max_nodes, max_edges)

    picked: list[str] = []
    covered: list[str] = []
    for e in rng.sample(list(g.edges), min(rule_edges, len(g.edges))):
        extra = [v for v in dict.fromkeys(g.attach[e]) if v not in covered]
        if len(covered) + len(extra) <= rule_nodes:
            picked.append(e)
            covered.extend(extra)
    if not covered or (len(covered) < rule_nodes and rng.random() < 0.3):
        spare = [v for v in g.nodes if v not in covered]
        if spare:
            covered.append(rng.choice(spare))
    left_id = {v: f"l{i}" for i, v in enumerate(covered, start=1)}
    lhs = GraphBuilder(tg, "L")
    for v in covered:
        lhs.node(left_id[v], g.node_type[v])
    for j, e in enumerate(picked, start=1):
        lhs.edge(f"le{j}", g.edge_type[e], *(left_id[v] for v in g.attach[e]))
    left = lhs.build()

    kept = [v for v in left.nodes if rng.random() < 0.5]
    rhs = GraphBuilder(tg, "R")
    right_nodes: dict[str, str] = {}
    keep: dict[str, tuple[str, str]] = {}
    for i, v in enumerate(kept, start=1):
        keep[f"k{i}"] = (v, f"r{i}")
        right_nodes[f"r{i}"] = left.node_type[v]
    for i in range(len(kept) + 1, len(kept) + 1 + rng.randint(0, rule_nodes - len(kept))):
        right_nodes[f"r{i}"] = rng.choice(tg.node_types)
    for v, label in right_nodes.items():
        rhs.node(v, label)
    _random_edges(rng, tg, rhs, right_nodes, rng.randint(0, rule_edges), "re")
    right = rhs.build()
    # kept nodes carry an edge on some side; the others are deleted and recreated
    keep = {k: (v, w) for k, (v, w) in keep.items() if left.incident_edges(v) or right.incident_edges(w)}
    return g, Rule.span("p", left, right, keep)


def verify_system(
    gts: GTS,
    samples: int = 200,
    seed: int = 0,
    depth: int = 0,
    max_nodes: int = 6,
    max_edges: int = 6,
) -> CorrespondenceBatch:
    """Every rule on the start graph, then `samples` random instances over the system's type graph."""
    batch = CorrespondenceBatch(seed=seed)
    for rule in gts.rules.values():
        batch.instances.append(verify_correspondence(gts.start, rule, depth))
    rng = random.Random(seed)
    for _ in range(samples):
        g, rule = random_instance(rng, gts.type_graph, max_nodes, max_edges)
        batch.instances.append(verify_correspondence(g, rule, depth))
    _LOGGER.debug("%d instances, %d failing", len(batch.instances), batch.failures)
    return batch
