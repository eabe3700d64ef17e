from __future__ import annotations

import random

import pytest

from dpohill.core.errors import NotNormalForm
from dpohill.dpo import Rule
from dpohill.encoder import (
    canonical_formula,
    decode,
    default_type_graph,
    edge_type_formula,
    encode_abstract,
    encode_graph,
    random_graph,
    representative,
)
from dpohill.graphs import GraphBuilder, TypedHypergraph, TypeGraph, is_isomorphic
from dpohill.hill import Atom, Formula, Nil, One, alpha_eq, parse_formula
from dpohill.kernel import check


def _shuffled(g: TypedHypergraph, rng: random.Random) -> TypedHypergraph:
    nodes = list(g.nodes)
    rng.shuffle(nodes)
    rename = {v: f"s{i}" for i, v in enumerate(nodes)}
    edges = list(g.edges)
    rng.shuffle(edges)
    builder = GraphBuilder(g.type_graph, g.name)
    for v in nodes:
        builder.node(rename[v], g.node_type[v])
    for j, e in enumerate(edges):
        builder.edge(f"f{j}", g.edge_type[e], *(rename[v] for v in g.attach[e]))
    return builder.build()


def test_worked_example_graph_formulas(
    host: TypedHypergraph, result: TypedHypergraph, gamma_g: Formula, gamma_h: Formula
) -> None:
    assert alpha_eq(encode_graph(host).goal, canonical_formula(gamma_g))
    assert alpha_eq(representative(result, "z").formula, canonical_formula(gamma_h))


def test_worked_example_encoding_checks(host: TypedHypergraph) -> None:
    enc = encode_graph(host)
    report = check(enc.derivation)
    assert report.ok, [str(f) for f in report.failures]
    s = enc.sequent
    assert dict(s.gamma) == {"v1": Atom("a1"), "v2": Atom("a2"), "v3": Atom("a2")}
    assert s.sigma == frozenset({"v1", "v2", "v3"})
    # the linear context is a multiset; compare by name
    expected = dict(enc.signature.delta())
    assert sorted(n for n, _ in s.delta) == ["n1", "n2", "n3", "u1", "u2", "u3", "u4"]
    assert all(alpha_eq(f, expected[n]) for n, f in s.delta)
    assert enc.signature.edge_vars["e1"][1] == edge_type_formula(host.type_graph, "C")
    assert alpha_eq(edge_type_formula(host.type_graph, "A"), parse_formula("all w1:a1 w2:a2. A(w1, w2)"))


def test_empty_graph(tg: TypeGraph) -> None:
    enc = encode_graph(GraphBuilder(tg, "empty").build())
    assert enc.goal == One()
    assert enc.sequent.subject == Nil()
    assert not enc.sequent.gamma and not enc.sequent.delta
    assert check(enc.derivation).ok


def test_isolated_node(tg: TypeGraph) -> None:
    enc = encode_graph(GraphBuilder(tg, "single").node("v", "a3").build())
    assert alpha_eq(enc.goal, parse_formula("ex x:a3. one"))
    assert check(enc.derivation).ok
    assert is_isomorphic(decode(enc.goal, tg), GraphBuilder(tg).node("w", "a3").build())


def test_abstract_encoding_quantifies_the_interface(rule_p: Rule) -> None:
    enc = encode_abstract(rule_p.left_interface())
    assert alpha_eq(enc.goal, parse_formula("all y1:a1. ex y2:a2. A(y1, y2) * C(y1)"))
    assert check(enc.derivation).ok


@pytest.mark.parametrize("seed", range(25))
def test_isomorphic_graphs_share_a_representative(seed: int) -> None:
    rng = random.Random(seed)
    g = random_graph(rng, default_type_graph(), 6, 6)
    assert representative(g).formula == representative(_shuffled(g, rng)).formula


@pytest.mark.parametrize("seed", range(50))
def test_decode_inverts_encode(seed: int) -> None:
    g = random_graph(random.Random(seed), default_type_graph(), 6, 6)
    enc = encode_graph(g)
    assert check(enc.derivation).ok
    back = decode(enc.goal, g.type_graph)
    assert is_isomorphic(back, g)
    assert alpha_eq(representative(back).formula, enc.goal)


def test_decode_infers_a_type_graph() -> None:
    g = decode(parse_formula("ex x:a y:b. F(x, y) * U(y) * U(y)"), name="inferred")
    assert g.type_graph.arity["F"] == ("a", "b")
    assert len(g.edges) == 3
    assert sorted(g.node_type.values()) == ["a", "b"]


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("p -o q", "formula is not ex-prefixed tensor"),
        ("ex x:a. E(x, y)", "formula has free variables"),
        ("ex x:a y:a. F(x, y) * F(y, y)", "does not describe a graph"),
    ],
)
def test_decode_rejects(text: str, message: str) -> None:
    with pytest.raises(NotNormalForm) as err:
        decode(parse_formula(text), default_type_graph())
    assert message in err.value.message


def test_canonical_formula_orders_factors_and_binders() -> None:
    left = parse_formula("ex q:a r:b. U(r) * F(q, r)")
    right = parse_formula("ex s:a t:b. F(s, t) * U(t)")
    assert not alpha_eq(left, right)
    assert alpha_eq(canonical_formula(left), canonical_formula(right))
    assert alpha_eq(canonical_formula(left), parse_formula("ex q:a r:b. F(q, r) * U(r)"))
