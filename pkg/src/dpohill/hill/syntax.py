"""
Abstract syntax of HILL proof terms, formulas and annotated sequents.

All nodes are frozen dataclasses: hashable, comparable, safe to share.
Variables of every kind (linear, non-linear, location) use Var; the
context a name is declared in decides its kind.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

# --- terms ---------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Pair:
    left: Term
    right: Term


@dataclass(frozen=True)
class Hide:
    """eps(D|n). M: hides witness D located at n."""

    witness: Term
    loc: str
    body: Term


@dataclass(frozen=True)
class Lam:
    var: str
    body: Term


@dataclass(frozen=True)
class LinLam:
    var: str
    body: Term


@dataclass(frozen=True)
class LinApp:
    fn: Term
    arg: Term


@dataclass(frozen=True)
class App:
    """Non-linear application N D (forall elimination)."""

    fn: Term
    arg: Term


@dataclass(frozen=True)
class Bang:
    body: Term


@dataclass(frozen=True)
class Discard:
    names: tuple[str, ...]
    body: Term


@dataclass(frozen=True)
class Copy:
    var: str


@dataclass(frozen=True)
class Let:
    """let pattern = bound in body; patterns are terms."""

    pattern: Term
    bound: Term
    body: Term


Term = Union[Var, Nil, Pair, Hide, Lam, LinLam, LinApp, App, Bang, Discard, Copy, Let]

# --- formulas -------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Pred:
    """Edge predicate E(D1, ..., Dk); sorts, when given, annotate each argument."""

    name: str
    args: tuple[Term, ...]
    sorts: tuple[Formula, ...] = ()


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Tensor:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Lolli:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class OfCourse:
    body: Formula


@dataclass(frozen=True)
class Forall:
    var: str
    sort: Formula
    body: Formula


@dataclass(frozen=True)
class Ex:
    """Resource-bound quantifier: ex x:sort. body."""

    var: str
    sort: Formula
    body: Formula


@dataclass(frozen=True)
class Located:
    """Location type: body located at naming term name."""

    body: Formula
    name: Term


Formula = Union[Atom, Pred, One, Tensor, Lolli, OfCourse, Forall, Ex, Located]

Entry = tuple[str, Formula]
Context = tuple[Entry, ...]

TERM_TYPES = (Var, Nil, Pair, Hide, Lam, LinLam, LinApp, App, Bang, Discard, Copy, Let)
FORMULA_TYPES = (Atom, Pred, One, Tensor, Lolli, OfCourse, Forall, Ex, Located)


def is_term(node: object) -> bool:
    return isinstance(node, TERM_TYPES)


def is_formula(node: object) -> bool:
    return isinstance(node, FORMULA_TYPES)


def is_atomic(f: Formula) -> bool:
    return isinstance(f, (Atom, Pred))


def is_nonlinear_term(t: Term) -> bool:
    """D = x | !N"""
    return isinstance(t, (Var, Bang))


def tensor_all(factors: Iterable[Formula]) -> Formula:
    """Right-nested tensor; one for no factors."""
    items = list(factors)
    if not items:
        return One()
    out = items[-1]
    for f in reversed(items[:-1]):
        out = Tensor(f, out)
    return out


def pair_all(terms: Iterable[Term]) -> Term:
    items = list(terms)
    if not items:
        return Nil()
    out = items[-1]
    for t in reversed(items[:-1]):
        out = Pair(t, out)
    return out


def tensor_factors(f: Formula) -> list[Formula]:
    """Leaves of a tensor tree, left to right; one contributes no factor."""
    if isinstance(f, Tensor):
        return tensor_factors(f.left) + tensor_factors(f.right)
    if isinstance(f, One):
        return []
    return [f]


def ex_all(binders: Iterable[tuple[str, Formula]], body: Formula) -> Formula:
    out = body
    for var, sort in reversed(list(binders)):
        out = Ex(var, sort, out)
    return out


def forall_all(binders: Iterable[tuple[str, Formula]], body: Formula) -> Formula:
    out = body
    for var, sort in reversed(list(binders)):
        out = Forall(var, sort, out)
    return out


def equiv(a: Formula, b: Formula) -> Formula:
    """Linear equivalence (a -o b) * (b -o a)."""
    return Tensor(Lolli(a, b), Lolli(b, a))


# --- sequents -------------------------------------------------------------


@dataclass(frozen=True)
class Sequent:
    """[sigma]; gamma; delta |- subject :: goal; subject may be absent for search goals."""

    sigma: frozenset[str]
    gamma: Context
    delta: Context
    subject: Term | None
    goal: Formula

    def gamma_map(self) -> dict[str, Formula]:
        return dict(self.gamma)

    def delta_map(self) -> dict[str, Formula]:
        return dict(self.delta)

    def names(self) -> set[str]:
        return {name for name, _ in self.gamma} | {name for name, _ in self.delta}

    def with_subject(self, subject: Term | None) -> Sequent:
        return Sequent(self.sigma, self.gamma, self.delta, subject, self.goal)


def locations(delta: Context) -> list[tuple[str, Located]]:
    return [(name, f) for name, f in delta if isinstance(f, Located)]
