"""
`.gts` text format: one type graph, rules, a start graph, optional extra graphs.

    typegraph tg
    nodetype a
    edgetype E : a a
    rule p interface ( y1 : a )
    lhs {
    node y1 : a
    }
    rhs {
    node y1 : a
    node y2 : a
    edge e1 : E ( y1 y2 )
    }
    start G {
    node x1 : a
    }
    graph T over tg
    node x1 : a

Block bodies use the `.hg` node/edge statements.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from dpohill.core.errors import GraphError, ParseError
from dpohill.dpo.rule import GTS, GTSBuilder, Rule
from dpohill.graphs.hypergraph import GraphBuilder, TypedHypergraph, TypeGraph, TypeGraphBuilder
from dpohill.graphs.text import (
    Token,
    finish_graph,
    iter_statements,
    read_graph_statement,
    read_type_statement,
)


@dataclass
class GtsDocument:
    type_graph: TypeGraph
    rules: dict[str, Rule]
    start: TypedHypergraph
    graphs: dict[str, TypedHypergraph] = field(default_factory=dict)
    name: str = ""

    def gts(self) -> GTS:
        builder = GTSBuilder(self.type_graph, self.name)
        for rule in self.rules.values():
            builder.rule(rule)
        return builder.start(self.start).build()

    def graph(self, name: str) -> TypedHypergraph:
        if name in ("start", self.start.name):
            return self.start
        try:
            return self.graphs[name]
        except KeyError:
            raise GraphError(f"no graph named {name!r}") from None


def _segments(tokens: list[Token]) -> list[list[Token]]:
    """Split a line at braces; each brace becomes its own segment."""
    out: list[list[Token]] = []
    current: list[Token] = []
    for tok in tokens:
        if tok.text in ("{", "}"):
            if current:
                out.append(current)
            out.append([tok])
            current = []
        else:
            current.append(tok)
    if current:
        out.append(current)
    return out


@dataclass
class _PendingRule:
    name: str
    head: Token
    interface: dict[str, str]
    lhs: TypedHypergraph | None = None
    rhs: TypedHypergraph | None = None


class _GtsReader:
    def __init__(self, name: str) -> None:
        self.name = name
        self.tg_builder: TypeGraphBuilder | None = None
        self.tg: TypeGraph | None = None
        self.rules: dict[str, Rule] = {}
        self.start: TypedHypergraph | None = None
        self.graphs: dict[str, TypedHypergraph] = {}
        self.pending: _PendingRule | None = None
        self.opened: str | None = None  # "lhs" | "rhs" | "start" waiting for "{"
        self.block: tuple[str, GraphBuilder, Token] | None = None
        self.loose: tuple[GraphBuilder, Token] | None = None
        self.start_name = "start"

    def _type_graph(self, where: Token) -> TypeGraph:
        if self.tg is None:
            if self.tg_builder is None:
                raise ParseError("no typegraph declared", where.line, where.column)
            try:
                self.tg = self.tg_builder.build()
            except GraphError as exc:
                raise ParseError(exc.message, where.line, where.column) from exc
        return self.tg

    def _close_loose(self) -> None:
        if self.loose is not None:
            builder, head = self.loose
            self.graphs[builder.name] = finish_graph(builder, head)
            self.loose = None

    def segment(self, seg: list[Token]) -> None:
        head = seg[0]
        if self.opened is not None:
            if head.text != "{":
                raise ParseError(f"expected '{{' after {self.opened}", head.line, head.column)
            tg = self._type_graph(head)
            label = self.start_name if self.opened == "start" else f"{self.opened}_{self.pending.name}"
            self.block = (self.opened, GraphBuilder(tg, label), head)
            self.opened = None
            return
        if self.block is not None:
            if head.text == "}":
                self._close_block(head)
            elif head.text in ("node", "edge"):
                read_graph_statement(seg, self.block[1])
            else:
                raise ParseError(f"unexpected {head.text!r} inside a block", head.line, head.column)
            return
        keyword = head.text
        if keyword in ("node", "edge") and self.loose is not None:
            read_graph_statement(seg, self.loose[0])
            return
        self._close_loose()
        if keyword == "typegraph":
            if self.tg_builder is not None:
                raise ParseError("a .gts file declares exactly one typegraph", head.line, head.column)
            if len(seg) != 2:
                raise ParseError("expected 'typegraph <name>'", head.line, head.column)
            self.tg_builder = TypeGraphBuilder(seg[1].text)
        elif keyword in ("nodetype", "edgetype"):
            if self.tg_builder is None or self.tg is not None:
                raise ParseError(f"{keyword} outside the typegraph block", head.line, head.column)
            read_type_statement(seg, self.tg_builder)
        elif keyword == "rule":
            self._rule_head(seg)
        elif keyword in ("lhs", "rhs"):
            if self.pending is None or len(seg) != 1:
                raise ParseError(f"{keyword} outside a rule", head.line, head.column)
            self.opened = keyword
        elif keyword == "start":
            if self.pending is not None:
                raise ParseError(f"rule {self.pending.name} is incomplete", head.line, head.column)
            if self.start is not None or len(seg) > 2:
                raise ParseError("expected a single 'start [<name>]'", head.line, head.column)
            self.start_name = seg[1].text if len(seg) == 2 else "start"
            self.opened = "start"
        elif keyword == "graph":
            if len(seg) != 4 or seg[2].text != "over":
                raise ParseError("expected 'graph <name> over <typegraph>'", head.line, head.column)
            tg = self._type_graph(head)
            if seg[3].text != tg.name:
                raise ParseError(f"unknown type graph {seg[3].text!r}", seg[3].line, seg[3].column)
            self.loose = (GraphBuilder(tg, seg[1].text), head)
        else:
            raise ParseError(f"unknown statement {keyword!r}", head.line, head.column)

    def _rule_head(self, seg: list[Token]) -> None:
        head = seg[0]
        if self.pending is not None:
            raise ParseError(f"rule {self.pending.name} is incomplete", head.line, head.column)
        if len(seg) < 5 or seg[2].text != "interface" or seg[3].text != "(" or seg[-1].text != ")":
            raise ParseError("expected 'rule <name> interface ( <id> : <type> ... )'", head.line, head.column)
        self._type_graph(head)
        decls = [tok for tok in seg[4:-1] if tok.text != ","]
        if len(decls) % 3:
            raise ParseError("interface declarations are '<id> : <type>'", head.line, head.column)
        interface: dict[str, str] = {}
        for i in range(0, len(decls), 3):
            node, colon, label = decls[i : i + 3]
            if colon.text != ":":
                raise ParseError("expected ':'", colon.line, colon.column)
            interface[node.text] = label.text
        name = seg[1].text
        if name in self.rules:
            raise ParseError(f"rule {name!r} declared twice", head.line, head.column)
        self.pending = _PendingRule(name, head, interface)

    def _close_block(self, where: Token) -> None:
        assert self.block is not None
        kind, builder, head = self.block
        graph = finish_graph(builder, head)
        self.block = None
        if kind == "start":
            self.start = graph
            return
        assert self.pending is not None
        setattr(self.pending, kind, graph)
        if self.pending.lhs is not None and self.pending.rhs is not None:
            self._finish_rule(self.pending)
            self.pending = None

    def _finish_rule(self, pending: _PendingRule) -> None:
        lhs, rhs = pending.lhs, pending.rhs
        assert lhs is not None and rhs is not None
        for node, label in pending.interface.items():
            for side, graph in (("lhs", lhs), ("rhs", rhs)):
                if graph.node_type.get(node) != label:
                    raise ParseError(
                        f"rule {pending.name}: interface node {node} : {label} missing from {side}",
                        pending.head.line,
                        pending.head.column,
                    )
        try:
            self.rules[pending.name] = Rule.span(pending.name, lhs, rhs, list(pending.interface))
        except GraphError as exc:
            raise ParseError(exc.message, pending.head.line, pending.head.column) from exc

    def finish(self, last_line: int) -> GtsDocument:
        self._close_loose()
        if self.opened is not None or self.block is not None:
            raise ParseError("unterminated block", last_line, 1)
        if self.pending is not None:
            raise ParseError(f"rule {self.pending.name} is incomplete", self.pending.head.line, self.pending.head.column)
        tg = self._type_graph(Token("", last_line, 1))
        start = self.start if self.start is not None else GraphBuilder(tg, "start").build()
        return GtsDocument(tg, self.rules, start, self.graphs, self.name)


def parse_gts(text: str, name: str = "") -> GtsDocument:
    reader = _GtsReader(name)
    last = 1
    for tokens in iter_statements(text):
        last = tokens[0].line
        for seg in _segments(tokens):
            reader.segment(seg)
    return reader.finish(last)
