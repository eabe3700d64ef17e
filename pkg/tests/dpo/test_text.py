from __future__ import annotations

import pytest

from dpohill.cli.templates import EXAMPLE_GTS
from dpohill.core.errors import ParseError
from dpohill.dpo import Rule, parse_gts
from dpohill.graphs import TypedHypergraph, is_isomorphic


def test_example_system_parses(host: TypedHypergraph, result: TypedHypergraph, rule_p: Rule) -> None:
    doc = parse_gts(EXAMPLE_GTS, "example")
    assert list(doc.rules) == ["p"]
    p = doc.rules["p"]
    assert p.interface.nodes == ("y1",)
    assert p.deleted_nodes == ("y2",)
    assert p.created_nodes == ("y3", "y4")
    assert is_isomorphic(p.lhs, rule_p.lhs) and is_isomorphic(p.rhs, rule_p.rhs)
    assert doc.start.name == "G"
    assert is_isomorphic(doc.graph("G"), host)
    assert is_isomorphic(doc.graph("H"), result)
    gts = doc.gts()
    assert gts.rule("p") is p


_HEAD = "typegraph t\nnodetype a\nedgetype E : a a\n"


@pytest.mark.parametrize(
    ("body", "fragment"),
    [
        ("rule p interface ( k : a )\nlhs {\nnode k : a\n}\n", "incomplete"),
        ("rule p interface ( k : a )\nlhs {\nnode k : a\n}\nrhs {\nnode j : a\n}\n", "missing from rhs"),
        ("rule p ( k : a )\n", "interface"),
        ("start {\nnode v : a\n", "unterminated"),
        ("lhs {\n}\n", "outside a rule"),
    ],
)
def test_malformed_systems(body: str, fragment: str) -> None:
    with pytest.raises(ParseError, match=fragment):
        parse_gts(_HEAD + body)


def test_second_type_graph_is_rejected() -> None:
    with pytest.raises(ParseError, match="exactly one typegraph"):
        parse_gts(_HEAD + "typegraph u\n")


def test_missing_start_gives_empty_graph() -> None:
    doc = parse_gts(_HEAD)
    assert doc.start.is_empty()
