"""
Smart constructors, one per rule: each takes premises and the data the rule
needs and computes the conclusion. They never validate; check() does.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from dpohill.core.errors import HillError
from dpohill.hill.ops import all_names, free_nominal_vars, free_vars, substitute
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
)
from dpohill.kernel.proof import Instantiation, ProofTree, RuleTag


def make_sequent(gamma: Context, delta: Context, subject: Term | None, goal: Formula) -> Sequent:
    return Sequent(free_nominal_vars(delta), tuple(gamma), tuple(delta), subject, goal)


def _lookup(ctx: Context, name: str) -> Formula:
    for n, f in ctx:
        if n == name:
            return f
    raise HillError(f"{name} is not declared in the context")


def _without(ctx: Context, *names: str) -> Context:
    drop = set(names)
    return tuple((n, f) for n, f in ctx if n not in drop)


def _subject(tree: ProofTree) -> Term:
    subject = tree.conclusion.subject
    if subject is None:
        raise HillError("premise has no proof term")
    return subject


def fresh_var(prefix: str, avoid: Iterable[str]) -> str:
    """prefix1, prefix2, ... the first not in avoid."""
    taken = set(avoid)
    k = 1
    while f"{prefix}{k}" in taken:
        k += 1
    return f"{prefix}{k}"


# --- axioms ---


def lid(gamma: Context, u: str, formula: Formula) -> ProofTree:
    return ProofTree(RuleTag.LID, make_sequent(gamma, ((u, formula),), Var(u), formula), (), Instantiation(principal=u))


def uid(gamma: Context, x: str) -> ProofTree:
    formula = _lookup(gamma, x)
    return ProofTree(RuleTag.UID, make_sequent(gamma, (), Var(x), formula), (), Instantiation(principal=x))


def one_r(gamma: Context) -> ProofTree:
    return ProofTree(RuleTag.ONE_R, make_sequent(gamma, (), Nil(), One()))


# --- multiplicatives ---


def one_l(premise: ProofTree, u: str) -> ProofTree:
    c = premise.conclusion
    term = Let(Nil(), Var(u), _subject(premise))
    return ProofTree(
        RuleTag.ONE_L, make_sequent(c.gamma, c.delta + ((u, One()),), term, c.goal), (premise,), Instantiation(principal=u)
    )


def tensor_r(left: ProofTree, right: ProofTree) -> ProofTree:
    a, b = left.conclusion, right.conclusion
    term = Pair(_subject(left), _subject(right))
    split = tuple(n for n, _ in a.delta)
    return ProofTree(
        RuleTag.TENSOR_R,
        make_sequent(a.gamma, a.delta + b.delta, term, Tensor(a.goal, b.goal)),
        (left, right),
        Instantiation(split=split),
    )


def tensor_l(premise: ProofTree, w: str, u: str, v: str) -> ProofTree:
    c = premise.conclusion
    formula = Tensor(_lookup(c.delta, u), _lookup(c.delta, v))
    term = Let(Pair(Var(u), Var(v)), Var(w), _subject(premise))
    return ProofTree(
        RuleTag.TENSOR_L,
        make_sequent(c.gamma, _without(c.delta, u, v) + ((w, formula),), term, c.goal),
        (premise,),
        Instantiation(principal=w, fresh=(u, v)),
    )


def lolli_r(premise: ProofTree, u: str) -> ProofTree:
    c = premise.conclusion
    goal = Lolli(_lookup(c.delta, u), c.goal)
    return ProofTree(
        RuleTag.LOLLI_R,
        make_sequent(c.gamma, _without(c.delta, u), LinLam(u, _subject(premise)), goal),
        (premise,),
        Instantiation(fresh=(u,)),
    )


def lolli_l(arg: ProofTree, rest: ProofTree, v: str, u: str) -> ProofTree:
    """arg proves the antecedent from delta1; rest uses u :: consequent."""
    a, r = arg.conclusion, rest.conclusion
    formula = Lolli(a.goal, _lookup(r.delta, u))
    term = Let(Var(u), LinApp(Var(v), _subject(arg)), _subject(rest))
    delta = a.delta + _without(r.delta, u) + ((v, formula),)
    return ProofTree(
        RuleTag.LOLLI_L,
        make_sequent(r.gamma, delta, term, r.goal),
        (arg, rest),
        Instantiation(principal=v, fresh=(u,), split=tuple(n for n, _ in a.delta)),
    )


# --- quantifiers ---


def all_r(premise: ProofTree, y: str) -> ProofTree:
    c = premise.conclusion
    sort = _lookup(c.gamma, y)
    return ProofTree(
        RuleTag.ALL_R,
        make_sequent(_without(c.gamma, y), c.delta, Lam(y, _subject(premise)), Forall(y, sort, c.goal)),
        (premise,),
        Instantiation(fresh=(y,)),
    )


def all_l(witness: ProofTree, rest: ProofTree, u: str, quantified: Forall, v: str) -> ProofTree:
    r = rest.conclusion
    d = _subject(witness)
    term = Let(Var(v), App(Var(u), d), _subject(rest))
    return ProofTree(
        RuleTag.ALL_L,
        make_sequent(r.gamma, _without(r.delta, v) + ((u, quantified),), term, r.goal),
        (witness, rest),
        Instantiation(principal=u, fresh=(v,), witness=d),
    )


def ex_r(identity: ProofTree, witness: ProofTree, body: ProofTree, n: str, goal: Ex) -> ProofTree:
    b = body.conclusion
    d = _subject(witness)
    delta = b.delta + ((n, Located(goal.sort, d)),)
    return ProofTree(
        RuleTag.EX_R,
        make_sequent(b.gamma, delta, Hide(d, n, _subject(body)), goal),
        (identity, witness, body),
        Instantiation(principal=n, gamma1=tuple(name for name, _ in witness.conclusion.gamma), witness=d),
    )


def ex_l(premise: ProofTree, u: str, z: str, n: str, v: str, quantified: Ex | None = None) -> ProofTree:
    """Premise has z :: sort in gamma, n :: loc sort @ z and v :: body[z/x] in delta."""
    c = premise.conclusion
    sort = _lookup(c.gamma, z)
    formula = quantified if quantified is not None else Ex(z, sort, _lookup(c.delta, v))
    term = Let(Hide(Var(z), n, Var(v)), Var(u), _subject(premise))
    return ProofTree(
        RuleTag.EX_L,
        make_sequent(_without(c.gamma, z), _without(c.delta, n, v) + ((u, formula),), term, c.goal),
        (premise,),
        Instantiation(principal=u, fresh=(z, n, v)),
    )


# --- exponentials and structure ---


def bang_r(premise: ProofTree) -> ProofTree:
    c = premise.conclusion
    return ProofTree(RuleTag.BANG_R, make_sequent(c.gamma, c.delta, Bang(_subject(premise)), OfCourse(c.goal)), (premise,))


def bang_l(premise: ProofTree, u: str, x: str) -> ProofTree:
    c = premise.conclusion
    formula = OfCourse(_lookup(c.gamma, x))
    term = Let(Bang(Var(x)), Var(u), _subject(premise))
    return ProofTree(
        RuleTag.BANG_L,
        make_sequent(_without(c.gamma, x), c.delta + ((u, formula),), term, c.goal),
        (premise,),
        Instantiation(principal=u, fresh=(x,)),
    )


def weak(premise: ProofTree, extra: Context) -> ProofTree:
    c = premise.conclusion
    names = tuple(n for n, _ in extra)
    return ProofTree(
        RuleTag.WEAK,
        make_sequent(c.gamma + tuple(extra), c.delta, Discard(names, _subject(premise)), c.goal),
        (premise,),
        Instantiation(discard=names),
    )


def contr(premise: ProofTree, x: str, u: str) -> ProofTree:
    c = premise.conclusion
    term = Let(Var(u), Copy(x), _subject(premise))
    return ProofTree(
        RuleTag.CONTR,
        make_sequent(c.gamma, _without(c.delta, u), term, c.goal),
        (premise,),
        Instantiation(principal=x, fresh=(u,)),
    )


def cut(left: ProofTree, right: ProofTree, u: str) -> ProofTree:
    a, r = left.conclusion, right.conclusion
    term = Let(Var(u), _subject(left), _subject(right))
    return ProofTree(
        RuleTag.CUT,
        make_sequent(r.gamma, a.delta + _without(r.delta, u), term, r.goal),
        (left, right),
        Instantiation(fresh=(u,), split=tuple(n for n, _ in a.delta)),
    )


def bang_cut(left: ProofTree, right: ProofTree, x: str) -> ProofTree:
    r = right.conclusion
    d = _subject(left)
    delta = tuple((n, substitute(f, {x: d})) for n, f in r.delta)
    goal = substitute(r.goal, {x: d})
    term = Let(Var(x), d, _subject(right))
    return ProofTree(
        RuleTag.BANG_CUT,
        make_sequent(_without(r.gamma, x), delta, term, goal),  # type: ignore[arg-type]
        (left, right),
        Instantiation(fresh=(x,), witness=d),
    )


# --- derived ---


def identity_proof(gamma: Context, u: str, formula: Formula) -> ProofTree | None:
    """
    Cut-free derivation of gamma; u :: formula |- M :: formula, eta-expanded down to
    atoms. None for formulas containing location types or non-closed sorts under ! or binders.
    """
    return _identity(tuple(gamma), u, formula)


@lru_cache(maxsize=4096)
def _identity(gamma: Context, u: str, formula: Formula) -> ProofTree | None:
    if is_atomic(formula):
        return lid(gamma, u, formula)
    avoid = {n for n, _ in gamma} | {u} | all_names(formula)
    for _, f in gamma:
        avoid |= all_names(f)
    match formula:
        case One():
            return one_l(one_r(gamma), u)
        case Tensor(a, b):
            left_name = fresh_var("u", avoid)
            right_name = fresh_var("u", avoid | {left_name})
            left = _identity(gamma, left_name, a)
            right = _identity(gamma, right_name, b)
            if left is None or right is None:
                return None
            return tensor_l(tensor_r(left, right), u, left_name, right_name)
        case Lolli(a, b):
            arg_name = fresh_var("u", avoid)
            res_name = fresh_var("u", avoid | {arg_name})
            arg = _identity(gamma, arg_name, a)
            res = _identity(gamma, res_name, b)
            if arg is None or res is None:
                return None
            return lolli_r(lolli_l(arg, res, u, res_name), arg_name)
        case OfCourse(body):
            if free_vars(body):
                return None
            x = fresh_var("x", avoid)
            return bang_l(bang_r(uid(gamma + ((x, body),), x)), u, x)
        case Forall(var, sort, body):
            if free_vars(sort):
                return None
            y = fresh_var("y", avoid)
            inner_gamma = gamma + ((y, sort),)
            v = fresh_var("u", avoid | {y})
            instance = substitute(body, {var: Var(y)})
            rest = _identity(inner_gamma, v, instance)  # type: ignore[arg-type]
            if rest is None:
                return None
            return all_r(all_l(uid(inner_gamma, y), rest, u, Forall(var, sort, body), v), y)
        case Ex(var, sort, body):
            if free_vars(sort):
                return None
            z = fresh_var("z", avoid)
            n = fresh_var("n", avoid | {z})
            v = fresh_var("u", avoid | {z, n})
            inner_gamma = gamma + ((z, sort),)
            instance = substitute(body, {var: Var(z)})
            inner = _identity(inner_gamma, v, instance)  # type: ignore[arg-type]
            if inner is None:
                return None
            # identity premise: gamma2 + z is inner_gamma itself since gamma1 = {z}
            hidden = ex_r(lolli_r(inner, v), uid(((z, sort),), z), inner, n, formula)
            return ex_l(hidden, u, z, n, v, formula)
    return None
