"""
`.hg` text format.

    # comment
    typegraph tg
    nodetype a
    edgetype E : a a
    graph G over tg
    node v1 : a
    edge e1 : E ( v1 v1 )

Statements are line based; `node`/`edge` lines belong to the latest `graph`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from dpohill.core.errors import GraphError, ParseError
from dpohill.graphs.hypergraph import GraphBuilder, TypedHypergraph, TypeGraph, TypeGraphBuilder

_TOKEN = re.compile(r"(?P<punct>[():,{}=\[\];|])|(?P<word>[^\s():,{}=\[\];|#]+)")


class Token(NamedTuple):
    text: str
    line: int
    column: int


def tokenize_line(line: str, lineno: int) -> list[Token]:
    """Tokens of one line, `#` starts a comment."""
    tokens: list[Token] = []
    pos = 0
    while pos < len(line):
        ch = line[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "#":
            break
        m = _TOKEN.match(line, pos)
        if m is None:
            raise ParseError(f"unexpected character {ch!r}", lineno, pos + 1)
        tokens.append(Token(m.group(0), lineno, pos + 1))
        pos = m.end()
    return tokens


def iter_statements(text: str, first_line: int = 1) -> Iterator[list[Token]]:
    for offset, line in enumerate(text.splitlines()):
        tokens = tokenize_line(line, first_line + offset)
        if tokens:
            yield tokens


def _expect(tokens: list[Token], index: int, text: str) -> None:
    if index >= len(tokens):
        last = tokens[-1]
        raise ParseError(f"expected {text!r}", last.line, last.column + len(last.text))
    if tokens[index].text != text:
        tok = tokens[index]
        raise ParseError(f"expected {text!r}, got {tok.text!r}", tok.line, tok.column)


def _word(tokens: list[Token], index: int, what: str) -> str:
    if index >= len(tokens):
        last = tokens[-1]
        raise ParseError(f"expected {what}", last.line, last.column + len(last.text))
    tok = tokens[index]
    m = _TOKEN.fullmatch(tok.text)
    if m is None or m.group("word") is None:
        raise ParseError(f"expected {what}, got {tok.text!r}", tok.line, tok.column)
    return tok.text


def _words(tokens: list[Token], start: int, stop: int) -> list[str]:
    """Identifiers between start and stop, commas allowed as separators."""
    out: list[str] = []
    for tok in tokens[start:stop]:
        if tok.text == ",":
            continue
        out.append(_word([tok], 0, "identifier"))
    return out


def _trailing(tokens: list[Token], index: int) -> None:
    if index < len(tokens):
        tok = tokens[index]
        raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.column)


def read_type_statement(tokens: list[Token], builder: TypeGraphBuilder) -> None:
    """`nodetype <label>` or `edgetype <label> : <label>*`."""
    keyword = tokens[0].text
    try:
        if keyword == "nodetype":
            builder.node_type(_word(tokens, 1, "node-type label"))
            _trailing(tokens, 2)
        else:
            label = _word(tokens, 1, "edge-type label")
            _expect(tokens, 2, ":")
            builder.edge_type(label, *_words(tokens, 3, len(tokens)))
    except GraphError as exc:
        raise ParseError(exc.message, tokens[0].line, tokens[0].column) from exc


def read_graph_statement(tokens: list[Token], builder: GraphBuilder) -> None:
    """`node <id> : <label>` or `edge <id> : <label> ( <node-id>* )`."""
    keyword = tokens[0].text
    try:
        if keyword == "node":
            node_id = _word(tokens, 1, "node identifier")
            _expect(tokens, 2, ":")
            builder.node(node_id, _word(tokens, 3, "node-type label"))
            _trailing(tokens, 4)
        else:
            edge_id = _word(tokens, 1, "edge identifier")
            _expect(tokens, 2, ":")
            label = _word(tokens, 3, "edge-type label")
            _expect(tokens, 4, "(")
            close = next((i for i in range(5, len(tokens)) if tokens[i].text == ")"), None)
            if close is None:
                last = tokens[-1]
                raise ParseError("expected ')'", last.line, last.column + len(last.text))
            builder.edge(edge_id, label, *_words(tokens, 5, close))
            _trailing(tokens, close + 1)
    except GraphError as exc:
        raise ParseError(exc.message, tokens[0].line, tokens[0].column) from exc


def finish_graph(builder: GraphBuilder, where: Token) -> TypedHypergraph:
    try:
        return builder.build()
    except GraphError as exc:
        raise ParseError(f"graph {builder.name}: {exc.message}", where.line, where.column) from exc


@dataclass
class Document:
    """Type graphs and graphs of one `.hg` file, in declaration order."""

    type_graphs: dict[str, TypeGraph] = field(default_factory=dict)
    graphs: dict[str, TypedHypergraph] = field(default_factory=dict)

    def graph(self, name: str | None = None) -> TypedHypergraph:
        if name is None:
            if not self.graphs:
                raise GraphError("document declares no graph")
            return next(iter(self.graphs.values()))
        try:
            return self.graphs[name]
        except KeyError:
            raise GraphError(f"no graph named {name!r}") from None


class _Reader:
    def __init__(self) -> None:
        self.doc = Document()
        self._tg: TypeGraphBuilder | None = None
        self._tg_token: Token | None = None
        self._graph: GraphBuilder | None = None
        self._graph_token: Token | None = None

    def _close_type_graph(self) -> None:
        if self._tg is not None:
            try:
                self.doc.type_graphs[self._tg.name] = self._tg.build()
            except GraphError as exc:
                assert self._tg_token is not None
                raise ParseError(exc.message, self._tg_token.line, self._tg_token.column) from exc
            self._tg = None

    def _close_graph(self) -> None:
        if self._graph is not None:
            assert self._graph_token is not None
            self.doc.graphs[self._graph.name] = finish_graph(self._graph, self._graph_token)
            self._graph = None

    def statement(self, tokens: list[Token]) -> None:
        head = tokens[0]
        keyword = head.text
        if keyword == "typegraph":
            self._close_graph()
            self._close_type_graph()
            self._tg = TypeGraphBuilder(_word(tokens, 1, "type-graph name"))
            self._tg_token = head
            _trailing(tokens, 2)
        elif keyword in ("nodetype", "edgetype"):
            if self._tg is None:
                raise ParseError(f"{keyword} outside a typegraph block", head.line, head.column)
            read_type_statement(tokens, self._tg)
        elif keyword == "graph":
            self._close_graph()
            self._close_type_graph()
            name = _word(tokens, 1, "graph name")
            _expect(tokens, 2, "over")
            tg_name = _word(tokens, 3, "type-graph name")
            _trailing(tokens, 4)
            if tg_name not in self.doc.type_graphs:
                raise ParseError(f"unknown type graph {tg_name!r}", tokens[3].line, tokens[3].column)
            if name in self.doc.graphs:
                raise ParseError(f"graph {name!r} declared twice", head.line, head.column)
            self._graph = GraphBuilder(self.doc.type_graphs[tg_name], name)
            self._graph_token = head
        elif keyword in ("node", "edge"):
            if self._graph is None:
                raise ParseError(f"{keyword} outside a graph block", head.line, head.column)
            read_graph_statement(tokens, self._graph)
        else:
            raise ParseError(f"unknown statement {keyword!r}", head.line, head.column)

    def finish(self) -> Document:
        self._close_graph()
        self._close_type_graph()
        return self.doc


def parse_hg(text: str) -> Document:
    reader = _Reader()
    for tokens in iter_statements(text):
        reader.statement(tokens)
    return reader.finish()


def format_type_graph(tg: TypeGraph) -> str:
    lines = [f"typegraph {tg.name}"]
    lines += [f"nodetype {label}" for label in tg.node_types]
    for label, arity in tg.arity.items():
        lines.append(f"edgetype {label} : {' '.join(arity)}".rstrip())
    return "\n".join(lines) + "\n"


def format_graph_body(g: TypedHypergraph) -> str:
    lines = [f"node {v} : {g.node_type[v]}" for v in g.nodes]
    for e in g.edges:
        inside = " ".join(g.attach[e])
        lines.append(f"edge {e} : {g.edge_type[e]} ( {inside} )" if inside else f"edge {e} : {g.edge_type[e]} ( )")
    return "".join(line + "\n" for line in lines)


def format_hg(g: TypedHypergraph, *, with_type_graph: bool = True) -> str:
    name = g.name or "G"
    out = format_type_graph(g.type_graph) if with_type_graph else ""
    return out + f"graph {name} over {g.type_graph.name}\n" + format_graph_body(g)
