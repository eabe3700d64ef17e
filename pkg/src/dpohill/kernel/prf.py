"""
`.prf` proof files.

    # comment
    (RULE key=value ... {SEQUENT} PREMISE ...)

RULE is a rule tag (LId, UId, ExR, ExL, AllR, AllL, LolliR, LolliL, TensorR,
TensorL, OneR, OneL, BangR, BangL, Weak, Contr, Cut, BangCut). Keys:
principal=NAME, fresh=a,b, split=a,b, gamma1=a,b, discard=a,b and
witness={TERM}; `.` stands for an empty list. SEQUENT uses the `.hill`
sequent syntax. Shared subtrees are written out at every use.
"""
from __future__ import annotations

import re
from typing import Final

from dpohill.core.errors import ParseError
from dpohill.hill.parser import Parser, tokenize
from dpohill.hill.printer import format_sequent, format_term
from dpohill.hill.syntax import Sequent, Term
from dpohill.kernel.proof import Instantiation, ProofTree, RuleTag

_LIST_KEYS: Final = ("fresh", "split", "gamma1", "discard")
_WORD = re.compile(r"[A-Za-z_][\w]*'*")
_VALUE = re.compile(r"[\w',.]+")


def _names(values: tuple[str, ...] | None) -> str:
    return ",".join(values) if values else "."


def _bindings(inst: Instantiation) -> list[str]:
    out: list[str] = []
    if inst.principal is not None:
        out.append(f"principal={inst.principal}")
    if inst.fresh:
        out.append(f"fresh={_names(inst.fresh)}")
    if inst.split is not None:
        out.append(f"split={_names(inst.split)}")
    if inst.gamma1 is not None:
        out.append(f"gamma1={_names(inst.gamma1)}")
    if inst.discard:
        out.append(f"discard={_names(inst.discard)}")
    if inst.witness is not None:
        out.append(f"witness={{{format_term(inst.witness)}}}")
    return out


def format_prf(tree: ProofTree, indent: int = 0) -> str:
    pad = "  " * indent
    head = " ".join([tree.rule.value, *_bindings(tree.inst), f"{{{format_sequent(tree.conclusion)}}}"])
    if not tree.premises:
        return f"{pad}({head})"
    body = "\n".join(format_prf(p, indent + 1) for p in tree.premises)
    return f"{pad}({head}\n{body})"


class _Reader:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.column)

    def _move(self, count: int) -> None:
        for ch in self.text[self.pos : self.pos + count]:
            if ch == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
        self.pos += count

    def skip(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace():
                self._move(1)
            elif ch == "#":
                end = self.text.find("\n", self.pos)
                self._move((len(self.text) if end < 0 else end) - self.pos)
            else:
                return

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, got {got!r}")
        self._move(1)

    def match(self, pattern: re.Pattern[str], what: str) -> str:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if m is None:
            raise self.error(f"expected {what}")
        self._move(m.end() - self.pos)
        return m.group(0)

    def braced(self) -> tuple[str, int, int]:
        """Text between braces with the position of its first character."""
        self.expect("{")
        line, column = self.line, self.column
        end = self.text.find("}", self.pos)
        if end < 0:
            raise self.error("unterminated '{'")
        inner = self.text[self.pos : end]
        self._move(end - self.pos + 1)
        return inner, line, column

    def sequent(self) -> Sequent:
        inner, line, column = self.braced()
        p = Parser(tokenize(inner, line, column))
        out = p.sequent()
        p.end()
        return out

    def term(self) -> Term:
        inner, line, column = self.braced()
        p = Parser(tokenize(inner, line, column))
        out = p.term()
        p.end()
        return out

    def tree(self) -> ProofTree:
        self.expect("(")
        line, column = self.line, self.column
        name = self.match(_WORD, "rule name")
        try:
            rule = RuleTag(name)
        except ValueError:
            raise ParseError(f"unknown rule {name!r}", line, column) from None
        fields: dict[str, object] = {}
        while self.peek() not in ("{", ""):
            key_line, key_column = self.line, self.column
            key = self.match(_WORD, "binding name")
            self.expect("=")
            if key in fields:
                raise ParseError(f"{key} given twice", key_line, key_column)
            if key == "witness":
                fields[key] = self.term()
            elif key == "principal":
                fields[key] = self.match(_WORD, "variable name")
            elif key in _LIST_KEYS:
                raw = self.match(_VALUE, "comma-separated names")
                fields[key] = () if raw == "." else tuple(raw.split(","))
            else:
                raise ParseError(f"unknown binding {key!r}", key_line, key_column)
        conclusion = self.sequent()
        premises: list[ProofTree] = []
        while self.peek() == "(":
            premises.append(self.tree())
        self.expect(")")
        return ProofTree(rule, conclusion, tuple(premises), Instantiation(**fields))  # type: ignore[arg-type]


def parse_prf(text: str) -> ProofTree:
    reader = _Reader(text)
    tree = reader.tree()
    if reader.peek():
        raise reader.error("unexpected trailing input")
    return tree
