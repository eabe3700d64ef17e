"""
Concrete syntax.

Formulas:  A | E(D, ...) | E(D:a, ...) | one | a * b | a -o b | !a | loc a @ D
           | all x y:T. a | ex x1:T1 x2:T2. a
Terms:     x | nil | M * N | eps(D|n)(D'|n'). M | lam x. M | llam u. M | M ^ N
           | M D | !M | discard x y in M | copy(x) | let P = N in M
Sequents:  [x, y] ; x :: T, ... ; n :: loc T @ x, ... |- M :: a
           `.` is an empty context; `[..] ;` may be dropped (sigma is inferred);
           `|- a` alone is a goal with empty contexts and no subject.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from dpohill.core.errors import ParseError
from dpohill.hill.ops import free_nominal_vars
from dpohill.hill.syntax import (
    App,
    Atom,
    Bang,
    Context,
    Copy,
    Discard,
    Ex,
    Forall,
    Formula,
    Hide,
    Lam,
    Let,
    LinApp,
    LinLam,
    Located,
    Lolli,
    Nil,
    OfCourse,
    One,
    Pair,
    Pred,
    Sequent,
    Tensor,
    Term,
    Var,
)

KEYWORDS = frozenset({"let", "in", "lam", "llam", "eps", "discard", "copy", "nil", "all", "ex", "one", "loc"})

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<comment>#.*)|(?P<op>\|-|::|-o|[()\[\],;.:*!^@|=])|(?P<one>1(?![\w']))|(?P<ident>[A-Za-z_][\w]*'*)"
)


class Tok(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Tok]:
    out: list[Tok] = []
    pos = 0
    col = column
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup or ""
        chunk = m.group(0)
        if kind not in ("ws", "comment"):
            if kind == "ident" and chunk in KEYWORDS:
                kind = "kw"
            out.append(Tok(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    out.append(Tok("eof", "", line, col))
    return out


class Parser:
    def __init__(self, tokens: list[Tok], macros: Mapping[str, Formula] | None = None) -> None:
        self.tokens = tokens
        self.pos = 0
        self.macros = dict(macros or {})

    # --- helpers ---

    @property
    def tok(self) -> Tok:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Tok:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def advance(self) -> Tok:
        tok = self.tok
        self.pos += 1
        return tok

    def error(self, message: str, tok: Tok | None = None) -> ParseError:
        tok = tok or self.tok
        if tok.kind == "eof":
            return ParseError(f"{message}, got end of input", tok.line, tok.column)
        return ParseError(f"{message}, got {tok.text!r}", tok.line, tok.column)

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}")
        return self.advance().text

    def end(self) -> None:
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")

    # --- formulas ---

    def formula(self) -> Formula:
        if self.at("all") or self.at("ex"):
            return self.quantified()
        left = self.tensor()
        if self.at("-o"):
            self.advance()
            return Lolli(left, self.formula())
        return left

    def quantified(self) -> Formula:
        kind = self.advance().text
        groups: list[tuple[list[str], Formula]] = []
        while not self.at("."):
            names = [self.ident("bound variable")]
            while self.tok.kind == "ident":
                names.append(self.advance().text)
            self.expect(":")
            groups.append((names, self.unary()))
        if not groups:
            raise self.error("expected a binder")
        self.expect(".")
        body = self.formula()
        ctor = Forall if kind == "all" else Ex
        for names, sort in reversed(groups):
            for name in reversed(names):
                body = ctor(name, sort, body)
        return body

    def tensor(self) -> Formula:
        left = self.unary()
        if self.at("*"):
            self.advance()
            right = self.quantified() if self.at("all") or self.at("ex") else self.tensor()
            return Tensor(left, right)
        return left

    def unary(self) -> Formula:
        if self.at("!"):
            self.advance()
            # `!all x:T. A` scopes the binder to the right, as with a bare quantifier
            if self.at("all") or self.at("ex"):
                return OfCourse(self.quantified())
            return OfCourse(self.unary())
        if self.at("loc"):
            self.advance()
            body = self.unary()
            self.expect("@")
            return Located(body, self.bang_term())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if self.at("("):
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        if self.at("one") or tok.kind == "one":
            self.advance()
            return One()
        if tok.kind == "ident":
            name = self.advance().text
            if not self.at("("):
                if name in self.macros:
                    return self.macros[name]
                return Atom(name)
            self.advance()
            args: list[Term] = []
            sorts: list[Formula] = []
            while not self.at(")"):
                if args:
                    self.expect(",")
                args.append(self.term())
                if self.at(":"):
                    self.advance()
                    sorts.append(self.unary())
            self.expect(")")
            if sorts and len(sorts) != len(args):
                raise self.error("either every argument of a predicate is sorted or none is", tok)
            return Pred(name, tuple(args), tuple(sorts))
        raise self.error("expected a formula")

    # --- terms ---

    def term(self) -> Term:
        if self.at("let"):
            self.advance()
            pattern = self.term()
            self.expect("=")
            bound = self.term()
            self.expect("in")
            return Let(pattern, bound, self.term())
        if self.at("lam") or self.at("llam"):
            ctor = Lam if self.advance().text == "lam" else LinLam
            var = self.ident("bound variable")
            self.expect(".")
            return ctor(var, self.term())
        if self.at("eps"):
            self.advance()
            groups: list[tuple[Term, str]] = []
            while self.at("("):
                self.advance()
                witness = self.term()
                self.expect("|")
                groups.append((witness, self.ident("location")))
                self.expect(")")
            if not groups:
                raise self.error("expected '(' after eps")
            self.expect(".")
            body = self.term()
            for witness, loc in reversed(groups):
                body = Hide(witness, loc, body)
            return body
        if self.at("discard"):
            self.advance()
            names: list[str] = []
            while self.tok.kind == "ident":
                names.append(self.advance().text)
            self.expect("in")
            return Discard(tuple(names), self.term())
        return self.pair()

    def _starts_binder_term(self) -> bool:
        return any(self.at(k) for k in ("let", "lam", "llam", "eps", "discard"))

    def pair(self) -> Term:
        left = self.linapp()
        if self.at("*"):
            self.advance()
            right = self.term() if self._starts_binder_term() else self.pair()
            return Pair(left, right)
        return left

    def linapp(self) -> Term:
        left = self.app()
        while self.at("^"):
            self.advance()
            left = LinApp(left, self.app())
        return left

    def _starts_atom(self) -> bool:
        return self.tok.kind == "ident" or any(self.at(k) for k in ("nil", "(", "copy", "!"))

    def app(self) -> Term:
        fn = self.bang_term()
        while self._starts_atom():
            fn = App(fn, self.bang_term())
        return fn

    def bang_term(self) -> Term:
        if self.at("!"):
            self.advance()
            return Bang(self.bang_term())
        return self.atom_term()

    def atom_term(self) -> Term:
        tok = self.tok
        if tok.kind == "ident":
            self.advance()
            return Var(tok.text)
        if self.at("nil"):
            self.advance()
            return Nil()
        if self.at("copy"):
            self.advance()
            self.expect("(")
            var = self.ident("variable")
            self.expect(")")
            return Copy(var)
        if self.at("("):
            self.advance()
            inner = self.term()
            self.expect(")")
            return inner
        raise self.error("expected a term")

    # --- sequents ---

    def context(self) -> Context:
        if self.at(".") and self.peek().text in (";", "|-"):
            self.advance()
            return ()
        entries: list[tuple[str, Formula]] = []
        while True:
            tok = self.tok
            name = self.ident("context variable")
            if any(name == n for n, _ in entries):
                raise ParseError(f"{name} declared twice in one context", tok.line, tok.column)
            self.expect("::")
            entries.append((name, self.formula()))
            if not self.at(","):
                return tuple(entries)
            self.advance()

    def _subject_follows(self) -> bool:
        depth = 0
        for tok in self.tokens[self.pos :]:
            if tok.text in ("(", "["):
                depth += 1
            elif tok.text in (")", "]"):
                depth -= 1
            elif tok.text == "::" and depth == 0:
                return True
        return False

    def sequent(self) -> Sequent:
        sigma: frozenset[str] | None = None
        gamma: Context = ()
        delta: Context = ()
        if self.at("["):
            self.advance()
            names: list[str] = []
            while not self.at("]"):
                if names:
                    self.expect(",")
                names.append(self.ident("nominal variable"))
            self.expect("]")
            self.expect(";")
            sigma = frozenset(names)
        if not self.at("|-"):
            gamma = self.context()
            self.expect(";")
            delta = self.context()
        self.expect("|-")
        subject: Term | None = None
        if self._subject_follows():
            subject = self.term()
            self.expect("::")
        goal = self.formula()
        if sigma is None:
            sigma = free_nominal_vars(delta)
        return Sequent(sigma, gamma, delta, subject, goal)


def parse_formula(text: str, macros: Mapping[str, Formula] | None = None) -> Formula:
    p = Parser(tokenize(text), macros)
    out = p.formula()
    p.end()
    return out


def parse_term(text: str) -> Term:
    p = Parser(tokenize(text))
    out = p.term()
    p.end()
    return out


def parse_sequent(text: str, macros: Mapping[str, Formula] | None = None) -> Sequent:
    p = Parser(tokenize(text), macros)
    out = p.sequent()
    p.end()
    return out


@dataclass
class HillDocument:
    """Named formulas and sequents of a `.hill` file, in declaration order."""

    formulas: dict[str, Formula] = field(default_factory=dict)
    sequents: dict[str, Sequent] = field(default_factory=dict)

    def sequent(self, name: str | None = None) -> Sequent:
        if name is None:
            if not self.sequents:
                raise KeyError("document declares no sequent")
            return next(iter(self.sequents.values()))
        return self.sequents[name]


_DECL = re.compile(r"\s*(formula|sequent)\s+([A-Za-z_][\w]*'*)\s*([=:])")


def parse_hill(text: str) -> HillDocument:
    """
    One declaration per line: `formula <name> = <formula>` or `sequent <name> : <sequent>`.
    Formula names declared earlier expand where an atom of that name appears.
    """
    doc = HillDocument()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0]
        if not stripped.strip():
            continue
        m = _DECL.match(stripped)
        if m is None:
            column = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'formula <name> = ...' or 'sequent <name> : ...'", lineno, column)
        kind, name, sep = m.groups()
        if (kind == "formula") != (sep == "="):
            raise ParseError(f"{kind} declarations use {'=' if kind == 'formula' else ':'}", lineno, m.start(3) + 1)
        if name in doc.formulas or name in doc.sequents:
            raise ParseError(f"{name} declared twice", lineno, m.start(2) + 1)
        parser = Parser(tokenize(stripped[m.end() :], lineno, m.end() + 1), doc.formulas)
        if kind == "formula":
            doc.formulas[name] = parser.formula()
        else:
            doc.sequents[name] = parser.sequent()
        parser.end()
    return doc
