"""
Proof checking against the rule table, with Sigma bookkeeping, separation,
freshness and linearity side conditions.

check never raises: every violated condition becomes a Failure in the
report, keyed by the dotted path of the offending node.
"""
from __future__ import annotations

import logging
from collections import Counter
from typing import Callable, Final

from pydantic import BaseModel, computed_field

from dpohill.core.errors import HillError
from dpohill.hill.ops import (
    alpha_eq,
    free_nominal_vars,
    free_vars,
    infer_sigma,
    occurrences,
    separation_violations,
    substitute,
)
from dpohill.hill.printer import format_formula, format_sequent, format_term
from dpohill.hill.syntax import (
    App,
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
    Sequent,
    Tensor,
    Term,
    Var,
    is_atomic,
    is_nonlinear_term,
    locations,
)
from dpohill.kernel.proof import ProofTree, RuleTag

_LOGGER: Final = logging.getLogger(__name__)

__all__ = [
    "Failure",
    "CheckReport",
    "check",
    "check_sequent",
    "infer_sigma",
    "location_map",
    "SortBalance",
    "LocationReport",
    "location_correspondence",
]


class Failure(BaseModel):
    path: str
    rule: str
    condition: str
    witness: str = ""

    def __str__(self) -> str:
        suffix = f": {self.witness}" if self.witness else ""
        return f"{self.path} ({self.rule}) {self.condition}{suffix}"


class CheckReport(BaseModel):
    subject: str = ""
    nodes: int = 0
    failures: list[Failure] = []

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ok(self) -> bool:
        return not self.failures


class _Rejected(Exception):
    def __init__(self, condition: str, witness: str = "") -> None:
        self.condition = condition
        self.witness = witness
        super().__init__(condition)


def _require(cond: bool, condition: str, witness: str = "") -> None:
    if not cond:
        raise _Rejected(condition, witness)


# --- context helpers ---


def _names(ctx: Context) -> set[str]:
    return {n for n, _ in ctx}


def _lookup(ctx: Context, name: str, what: str = "linear") -> Formula:
    for n, f in ctx:
        if n == name:
            return f
    raise _Rejected(f"{name} is not in the {what} context")


def _without(ctx: Context, *names: str) -> Context:
    drop = set(names)
    return tuple((n, f) for n, f in ctx if n not in drop)


def _restrict(ctx: Context, names: set[str]) -> Context:
    return tuple((n, f) for n, f in ctx if n in names)


def _same_context(a: Context, b: Context) -> bool:
    """Equal up to permutation, formulas up to alpha-equivalence."""
    if len(a) != len(b):
        return False
    other = dict(b)
    if len(other) != len(b):
        return False
    return all(n in other and alpha_eq(f, other[n]) for n, f in a)


def _show_context(ctx: Context) -> str:
    return ", ".join(f"{n} :: {format_formula(f)}" for n, f in ctx) or "."


def _same_gamma(premise: Sequent, conclusion: Sequent, gamma: Context | None = None) -> None:
    expected = conclusion.gamma if gamma is None else gamma
    _require(
        _same_context(premise.gamma, expected),
        "non-linear context of premise does not match",
        f"{_show_context(premise.gamma)} vs {_show_context(expected)}",
    )


def _same_delta(premise: Sequent, expected: Context) -> None:
    _require(
        _same_context(premise.delta, expected),
        "linear context of premise does not match",
        f"{_show_context(premise.delta)} vs {_show_context(expected)}",
    )


def _same_goal(premise: Sequent, expected: Formula) -> None:
    _require(
        alpha_eq(premise.goal, expected),
        "formula of premise does not match",
        f"{format_formula(premise.goal)} vs {format_formula(expected)}",
    )


def _same_subject(premise: Sequent, expected: Term) -> None:
    _require(
        premise.subject is not None and alpha_eq(premise.subject, expected),
        "proof term of premise does not match",
        format_term(expected),
    )


def _premise(node: Sequent, tree: ProofTree, gamma: Context | None, delta: Context, subject: Term, goal: Formula) -> None:
    _same_gamma(tree.conclusion, node, gamma)
    _same_delta(tree.conclusion, delta)
    _same_subject(tree.conclusion, subject)
    _same_goal(tree.conclusion, goal)


def _fresh(name: str, s: Sequent) -> None:
    _require(name not in s.names(), "introduced name is not fresh", name)


def _split(conclusion: Context, first: Sequent, second: Context, split: tuple[str, ...] | None) -> None:
    """conclusion must be the disjoint union of first's delta and second."""
    left = _names(first.delta)
    right = _names(second)
    _require(not (left & right), "linear context split mismatch", ", ".join(sorted(left & right)))
    _require(
        _same_context(first.delta + second, conclusion),
        "linear context split mismatch",
        f"{_show_context(first.delta)} | {_show_context(second)} vs {_show_context(conclusion)}",
    )
    if split is not None:
        _require(set(split) == left, "linear context split mismatch", f"recorded {', '.join(split) or '.'}")


# --- well-formedness of a single sequent ---


def check_sequent(s: Sequent) -> list[tuple[str, str]]:
    """(condition, witness) pairs for every violated well-formedness condition."""
    problems: list[tuple[str, str]] = []
    gamma_names = [n for n, _ in s.gamma]
    all_names = gamma_names + [n for n, _ in s.delta]
    repeated = sorted(n for n, k in Counter(all_names).items() if k > 1)
    if repeated:
        problems.append(("context names are not distinct", ", ".join(repeated)))
    scope = set(gamma_names)
    for n, f in s.gamma:
        if free_vars(f):
            problems.append(("non-linear context formula is not closed", f"{n} :: {format_formula(f)}"))
    for n, f in s.delta:
        loose = free_vars(f) - scope
        if loose:
            problems.append(("linear context formula mentions undeclared names", f"{n}: {', '.join(sorted(loose))}"))
    for n, loc in locations(s.delta):
        if free_vars(loc.body):
            problems.append(("location type is not closed", n))
        if not is_nonlinear_term(loc.name):
            problems.append(("naming term is not non-linear", f"{n} @ {format_term(loc.name)}"))
    for first, second, shared in separation_violations(s.delta):
        problems.append(("separation condition violated", f"{first}, {second} share {', '.join(sorted(shared))}"))
    expected_sigma = free_nominal_vars(s.delta)
    if s.sigma != expected_sigma:
        problems.append(
            (
                "nominal variables do not match the locations",
                f"[{', '.join(sorted(s.sigma))}] vs [{', '.join(sorted(expected_sigma))}]",
            )
        )
    loose_goal = free_vars(s.goal) - scope
    if loose_goal:
        problems.append(("formula mentions undeclared names", ", ".join(sorted(loose_goal))))
    if s.subject is None:
        problems.append(("sequent has no proof term", ""))
        return problems
    loose_term = free_vars(s.subject) - set(all_names)
    if loose_term:
        problems.append(("proof term mentions undeclared names", ", ".join(sorted(loose_term))))
    for n, _ in s.delta:
        k = occurrences(n, s.subject)
        if k != 1:
            problems.append(("linear variable must occur exactly once", f"{n} occurs {k} times"))
    return problems


# --- rule schemas ---

RuleCheck = Callable[[ProofTree], None]


def _lid(t: ProofTree) -> None:
    s = t.conclusion
    _require(len(s.delta) == 1, "LId needs exactly one linear hypothesis", _show_context(s.delta))
    (u, f), = s.delta
    _require(s.subject == Var(u), "proof term must be the hypothesis", u)
    _require(alpha_eq(f, s.goal), "hypothesis and formula differ", format_formula(f))
    _require(is_atomic(s.goal), "formula not atomic", format_formula(s.goal))


def _uid(t: ProofTree) -> None:
    s = t.conclusion
    _require(not s.delta, "UId needs an empty linear context", _show_context(s.delta))
    _require(isinstance(s.subject, Var), "proof term must be a variable")
    f = _lookup(s.gamma, s.subject.name, "non-linear")  # type: ignore[union-attr]
    _require(alpha_eq(f, s.goal), "declared formula and goal differ", format_formula(f))
    _require(not free_vars(s.goal), "formula not closed", format_formula(s.goal))


def _one_r(t: ProofTree) -> None:
    s = t.conclusion
    _require(not s.delta, "1R needs an empty linear context", _show_context(s.delta))
    _require(isinstance(s.subject, Nil), "proof term must be nil")
    _require(isinstance(s.goal, One), "formula must be 1", format_formula(s.goal))


def _one_l(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject:
        case Let(Nil(), Var(u), body):
            _require(isinstance(_lookup(s.delta, u), One), "principal formula must be 1", u)
            _premise(s, t.premises[0], None, _without(s.delta, u), body, s.goal)
        case _:
            raise _Rejected("proof term must be let nil = u in N")


def _tensor_r(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject, s.goal:
        case Pair(m, n), Tensor(a, b):
            left, right = t.premises
            _same_gamma(left.conclusion, s)
            _same_gamma(right.conclusion, s)
            _split(s.delta, left.conclusion, right.conclusion.delta, t.inst.split)
            _same_subject(left.conclusion, m)
            _same_subject(right.conclusion, n)
            _same_goal(left.conclusion, a)
            _same_goal(right.conclusion, b)
        case _:
            raise _Rejected("proof term must be a pair proving a tensor")


def _tensor_l(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject:
        case Let(Pair(Var(u), Var(v)), Var(w), body):
            f = _lookup(s.delta, w)
            _require(isinstance(f, Tensor), "principal formula must be a tensor", format_formula(f))
            _require(u != v, "introduced names must differ", u)
            _fresh(u, s)
            _fresh(v, s)
            delta = _without(s.delta, w) + ((u, f.left), (v, f.right))  # type: ignore[union-attr]
            _premise(s, t.premises[0], None, delta, body, s.goal)
        case _:
            raise _Rejected("proof term must be let u * v = w in N")


def _lolli_r(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject, s.goal:
        case LinLam(u, body), Lolli(a, b):
            _fresh(u, s)
            _premise(s, t.premises[0], None, s.delta + ((u, a),), body, b)
        case _:
            raise _Rejected("proof term must be a linear abstraction proving an implication")


def _lolli_l(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject:
        case Let(Var(u), LinApp(Var(v), arg), body):
            f = _lookup(s.delta, v)
            _require(isinstance(f, Lolli), "principal formula must be an implication", format_formula(f))
            first, second = t.premises
            _fresh(u, s)
            _same_gamma(first.conclusion, s)
            _same_subject(first.conclusion, arg)
            _same_goal(first.conclusion, f.left)  # type: ignore[union-attr]
            rest = _without(second.conclusion.delta, u)
            _split(_without(s.delta, v), first.conclusion, rest, t.inst.split)
            _premise(s, second, None, rest + ((u, f.right),), body, s.goal)  # type: ignore[union-attr]
        case _:
            raise _Rejected("proof term must be let u = v ^ M in N")


def _all_r(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject, s.goal:
        case Lam(y, body), Forall(x, sort, inner):
            _fresh(y, s)
            _require(y not in free_vars(s.goal), "eigenvariable occurs in the conclusion", y)
            instance = substitute(inner, {x: Var(y)})
            _premise(s, t.premises[0], s.gamma + ((y, sort),), s.delta, body, instance)  # type: ignore[arg-type]
        case _:
            raise _Rejected("proof term must be an abstraction proving a universal")


def _all_l(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject:
        case Let(Var(v), App(Var(u), d), body):
            f = _lookup(s.delta, u)
            _require(isinstance(f, Forall), "principal formula must be a universal", format_formula(f))
            _require(is_nonlinear_term(d), "witness is not a non-linear term", format_term(d))
            witness, rest = t.premises
            _fresh(v, s)
            _premise(s, witness, None, (), d, f.sort)  # type: ignore[union-attr]
            instance = substitute(f.body, {f.var: d})  # type: ignore[union-attr]
            _premise(s, rest, None, _without(s.delta, u) + ((v, instance),), body, s.goal)  # type: ignore[arg-type]
        case _:
            raise _Rejected("proof term must be let v = u D in N")


def _ex_r(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject, s.goal:
        case Hide(d, n, body), Ex(x, sort, inner):
            pass
        case _:
            raise _Rejected("proof term must be a hiding proving a resource-bound existential")
    identity, witness, main = t.premises
    _require(is_nonlinear_term(d), "witness is not a non-linear term", format_term(d))
    _require(not free_vars(sort), "quantifier sort is not closed", format_formula(sort))
    _require(x not in free_vars(d), "bound variable occurs in the witness", x)
    clash = free_vars(d) & (free_vars(inner) - {x})
    _require(not clash, "freshness condition violated", ", ".join(sorted(clash)))
    loc = _lookup(s.delta, n)
    _require(
        isinstance(loc, Located) and alpha_eq(loc, Located(sort, d)),
        "location does not hold the witness",
        f"{n} :: {format_formula(loc)}",
    )
    gamma1 = set(t.inst.gamma1) if t.inst.gamma1 is not None else _names(witness.conclusion.gamma)
    _require(gamma1 <= _names(s.gamma), "witness context is not part of the conclusion", ", ".join(sorted(gamma1)))
    _premise(s, witness, _restrict(s.gamma, gamma1), (), d, sort)
    gamma2 = _without(s.gamma, *gamma1)
    extra = _names(identity.conclusion.gamma) - _names(gamma2)
    _require(len(extra) == 1, "identity premise must add exactly one variable", ", ".join(sorted(extra)))
    (y,) = extra
    _same_gamma(identity.conclusion, s, gamma2 + ((y, sort),))
    _same_delta(identity.conclusion, ())
    same = substitute(inner, {x: Var(y)})
    _same_goal(identity.conclusion, Lolli(same, same))  # type: ignore[arg-type]
    _require(identity.conclusion.subject is not None, "identity premise has no proof term")
    instance = substitute(inner, {x: d})
    _premise(s, main, None, _without(s.delta, n), body, instance)  # type: ignore[arg-type]


def _ex_l(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject:
        case Let(Hide(Var(z), n, Var(v)), Var(u), body):
            f = _lookup(s.delta, u)
            _require(isinstance(f, Ex), "principal formula must be a resource-bound existential", format_formula(f))
            _require(len({z, n, v}) == 3, "introduced names must differ", f"{z}, {n}, {v}")
            for name in (z, n, v):
                _fresh(name, s)
            instance = substitute(f.body, {f.var: Var(z)})  # type: ignore[union-attr]
            delta = _without(s.delta, u) + ((n, Located(f.sort, Var(z))), (v, instance))  # type: ignore[union-attr,arg-type]
            _premise(s, t.premises[0], s.gamma + ((z, f.sort),), delta, body, s.goal)  # type: ignore[union-attr]
        case _:
            raise _Rejected("proof term must be let eps(z|n). v = u in N")


def _bang_r(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject, s.goal:
        case Bang(body), OfCourse(a):
            _require(not s.delta, "!R needs an empty linear context", _show_context(s.delta))
            _premise(s, t.premises[0], None, (), body, a)
        case _:
            raise _Rejected("proof term must be !M proving !A")


def _bang_l(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject:
        case Let(Bang(Var(x)), Var(u), body):
            f = _lookup(s.delta, u)
            _require(isinstance(f, OfCourse), "principal formula must be !A", format_formula(f))
            _fresh(x, s)
            _premise(s, t.premises[0], s.gamma + ((x, f.body),), _without(s.delta, u), body, s.goal)  # type: ignore[union-attr]
        case _:
            raise _Rejected("proof term must be let !x = u in N")


def _weak(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject:
        case Discard(names, body):
            missing = set(names) - _names(s.gamma)
            _require(not missing, "discarded names are not declared", ", ".join(sorted(missing)))
            if t.inst.discard:
                _require(set(t.inst.discard) == set(names), "recorded discard list differs", ", ".join(t.inst.discard))
            _premise(s, t.premises[0], _without(s.gamma, *names), s.delta, body, s.goal)
        case _:
            raise _Rejected("proof term must be discard ... in N")


def _contr(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject:
        case Let(Var(u), Copy(x), body):
            f = _lookup(s.gamma, x, "non-linear")
            _fresh(u, s)
            _premise(s, t.premises[0], None, s.delta + ((u, f),), body, s.goal)
        case _:
            raise _Rejected("proof term must be let u = copy(x) in N")


def _cut(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject:
        case Let(Var(u), bound, body):
            first, second = t.premises
            _fresh(u, s)
            _same_gamma(first.conclusion, s)
            _same_subject(first.conclusion, bound)
            rest = _without(second.conclusion.delta, u)
            _split(s.delta, first.conclusion, rest, t.inst.split)
            _premise(s, second, None, rest + ((u, first.conclusion.goal),), body, s.goal)
        case _:
            raise _Rejected("proof term must be let u = N in M")


def _bang_cut(t: ProofTree) -> None:
    s = t.conclusion
    match s.subject:
        case Let(Var(x), d, body):
            first, second = t.premises
            _require(is_nonlinear_term(d), "cut term is not a non-linear term", format_term(d))
            _fresh(x, s)
            _premise(s, first, None, (), d, first.conclusion.goal)
            p = second.conclusion
            _same_gamma(p, s, s.gamma + ((x, first.conclusion.goal),))
            _same_subject(p, body)
            delta = tuple((n, substitute(f, {x: d})) for n, f in p.delta)
            _require(
                _same_context(delta, s.delta),  # type: ignore[arg-type]
                "linear context is not the premise's under substitution",
                _show_context(s.delta),
            )
            _require(
                alpha_eq(substitute(p.goal, {x: d}), s.goal),
                "formula is not the premise's under substitution",
                format_formula(s.goal),
            )
        case _:
            raise _Rejected("proof term must be let x = D in M")


_RULES: dict[RuleTag, RuleCheck] = {
    RuleTag.LID: _lid,
    RuleTag.UID: _uid,
    RuleTag.ONE_R: _one_r,
    RuleTag.ONE_L: _one_l,
    RuleTag.TENSOR_R: _tensor_r,
    RuleTag.TENSOR_L: _tensor_l,
    RuleTag.LOLLI_R: _lolli_r,
    RuleTag.LOLLI_L: _lolli_l,
    RuleTag.ALL_R: _all_r,
    RuleTag.ALL_L: _all_l,
    RuleTag.EX_R: _ex_r,
    RuleTag.EX_L: _ex_l,
    RuleTag.BANG_R: _bang_r,
    RuleTag.BANG_L: _bang_l,
    RuleTag.WEAK: _weak,
    RuleTag.CONTR: _contr,
    RuleTag.CUT: _cut,
    RuleTag.BANG_CUT: _bang_cut,
}


def _check_node(path: str, node: ProofTree) -> list[Failure]:
    tag = node.rule.value
    failures = [Failure(path=path, rule=tag, condition=c, witness=w) for c, w in check_sequent(node.conclusion)]
    if len(node.premises) != node.rule.arity:
        failures.append(
            Failure(path=path, rule=tag, condition="wrong number of premises", witness=str(len(node.premises)))
        )
        return failures
    if node.conclusion.subject is None:
        return failures
    try:
        _RULES[node.rule](node)
    except _Rejected as err:
        failures.append(Failure(path=path, rule=tag, condition=err.condition, witness=err.witness))
    except (HillError, TypeError, ValueError) as err:
        failures.append(Failure(path=path, rule=tag, condition="malformed rule instance", witness=str(err)))
    return failures


def check(tree: ProofTree) -> CheckReport:
    """Every node is checked once; shared subtrees are reported at their first path."""
    failures: list[Failure] = []
    seen: set[int] = set()
    stack: list[tuple[str, ProofTree]] = [("root", tree)]
    while stack:
        path, node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        failures.extend(_check_node(path, node))
        for i in reversed(range(len(node.premises))):
            stack.append((f"{path}.{i}", node.premises[i]))
    if failures:
        _LOGGER.debug("proof rejected at %d condition(s), first: %s", len(failures), failures[0])
    return CheckReport(subject=format_sequent(tree.conclusion), nodes=len(seen), failures=failures)


# --- location diagnostics ---


def location_map(s: Sequent) -> dict[str, Term]:
    """
    Each nominal variable to the unique naming term it occurs in.
    Raises SeparationViolation when the map would not be a function.
    """
    infer_sigma(s.delta)
    out: dict[str, Term] = {}
    for _, loc in locations(s.delta):
        for x in free_vars(loc.name):
            out[x] = loc.name
    return out


class SortBalance(BaseModel):
    sort: str
    negative: int
    positive: int
    precondition: bool

    @computed_field  # type: ignore[prop-decorator]
    @property
    def balanced(self) -> bool:
        return self.negative == self.positive


class LocationReport(BaseModel):
    """Per-sort location counts; a flag for inspection, never a check failure."""

    subject: str = ""
    sorts: list[SortBalance] = []

    @computed_field  # type: ignore[prop-decorator]
    @property
    def balanced(self) -> bool:
        return all(b.balanced for b in self.sorts if b.precondition)


def _count_locations(f: Formula, positive: bool, counts: dict[tuple[str, bool], int]) -> None:
    match f:
        case Located(body, _):
            key = (format_formula(body), positive)
            counts[key] = counts.get(key, 0) + 1
        case Ex(_, sort, body):
            key = (format_formula(sort), positive)
            counts[key] = counts.get(key, 0) + 1
            _count_locations(body, positive, counts)
        case Forall(_, _, body) | OfCourse(body):
            _count_locations(body, positive, counts)
        case Tensor(a, b):
            _count_locations(a, positive, counts)
            _count_locations(b, positive, counts)
        case Lolli(a, b):
            _count_locations(a, not positive, counts)
            _count_locations(b, positive, counts)


def _derivable_closed(sort: Formula, gamma: Context) -> bool:
    """Whether gamma trivially offers a closed term of sort or a location producer for it."""
    for _, f in gamma:
        if alpha_eq(f, sort):
            return True
        if isinstance(f, Forall) and alpha_eq(f.sort, sort) and alpha_eq(f.body, Located(sort, Var(f.var))):
            return True
    return False


def location_correspondence(tree: ProofTree | Sequent) -> LocationReport:
    """Locations of each closed sort in negative positions against those hidden in positive ones."""
    s = tree.conclusion if isinstance(tree, ProofTree) else tree
    counts: dict[tuple[str, bool], int] = {}
    sorts: dict[str, Formula] = {}
    for _, f in s.delta:
        _count_locations(f, False, counts)
    _count_locations(s.goal, True, counts)

    def collect(f: Formula) -> None:
        match f:
            case Located(body, _):
                sorts.setdefault(format_formula(body), body)
            case Ex(_, sort, body):
                sorts.setdefault(format_formula(sort), sort)
                collect(body)
            case Forall(_, _, body) | OfCourse(body):
                collect(body)
            case Tensor(a, b) | Lolli(a, b):
                collect(a)
                collect(b)

    for _, f in s.delta:
        collect(f)
    collect(s.goal)
    balances = [
        SortBalance(
            sort=name,
            negative=counts.get((name, False), 0),
            positive=counts.get((name, True), 0),
            precondition=not free_vars(sort) and not _derivable_closed(sort, s.gamma),
        )
        for name, sort in sorted(sorts.items())
    ]
    return LocationReport(subject=format_sequent(s), sorts=balances)
