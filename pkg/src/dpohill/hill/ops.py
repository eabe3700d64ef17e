"""Free variables, capture-avoiding substitution, alpha-equivalence, let desugaring, graph formulas."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from dpohill.core.errors import HillError, LinearityViolation, SeparationViolation, ShapeMismatch
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
    locations,
)

Node = Union[Term, Formula]


# --- free variables -----------------------------------------------------


def pattern_binders(p: Term) -> tuple[str, ...]:
    """Names bound by a let pattern, left to right."""
    match p:
        case Var(name):
            return (name,)
        case Nil() | Copy():
            return ()
        case Pair(left, right):
            return pattern_binders(left) + pattern_binders(right)
        case Hide(witness, loc, body):
            return pattern_binders(witness) + (loc,) + pattern_binders(body)
        case Bang(body):
            return pattern_binders(body)
    raise ShapeMismatch(f"not a pattern: {type(p).__name__}")


def free_vars(node: Node) -> frozenset[str]:
    match node:
        case Var(name):
            return frozenset((name,))
        case Nil() | One() | Atom():
            return frozenset()
        case Pair(a, b) | LinApp(a, b) | App(a, b) | Tensor(a, b) | Lolli(a, b):
            return free_vars(a) | free_vars(b)
        case Hide(witness, loc, body):
            return free_vars(witness) | {loc} | free_vars(body)
        case Lam(var, body) | LinLam(var, body):
            return free_vars(body) - {var}
        case Bang(body) | OfCourse(body):
            return free_vars(body)
        case Discard(names, body):
            return frozenset(names) | free_vars(body)
        case Copy(var):
            return frozenset((var,))
        case Let(pattern, bound, body):
            return free_vars(bound) | (free_vars(body) - set(pattern_binders(pattern)))
        case Pred(_, args, sorts):
            out: frozenset[str] = frozenset()
            for item in args + sorts:
                out |= free_vars(item)
            return out
        case Forall(var, sort, body) | Ex(var, sort, body):
            return free_vars(sort) | (free_vars(body) - {var})
        case Located(body, name):
            return free_vars(body) | free_vars(name)
    raise TypeError(f"not a HILL node: {node!r}")


def all_names(node: Node) -> frozenset[str]:
    """Every identifier occurring in node, free or bound."""
    match node:
        case Lam(var, body) | LinLam(var, body):
            return all_names(body) | {var}
        case Forall(var, sort, body) | Ex(var, sort, body):
            return all_names(sort) | all_names(body) | {var}
        case Let(pattern, bound, body):
            return all_names(bound) | all_names(body) | set(pattern_binders(pattern))
        case Pair(a, b) | LinApp(a, b) | App(a, b) | Tensor(a, b) | Lolli(a, b):
            return all_names(a) | all_names(b)
        case Hide(witness, loc, body):
            return all_names(witness) | all_names(body) | {loc}
        case Bang(body) | OfCourse(body):
            return all_names(body)
        case Discard(names, body):
            return all_names(body) | set(names)
        case Located(body, name):
            return all_names(body) | all_names(name)
        case Pred(_, args, sorts):
            out: frozenset[str] = frozenset()
            for item in args + sorts:
                out |= all_names(item)
            return out
    return free_vars(node)


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """base, else base', base'', ... the first not in avoid."""
    taken = set(avoid)
    name = base
    while name in taken:
        name += "'"
    return name


def occurrences(name: str, t: Term) -> int:
    """Free occurrences of name in t; a let pattern binding name shadows its body."""
    match t:
        case Var(n) | Copy(n):
            return int(n == name)
        case Nil():
            return 0
        case Pair(a, b) | LinApp(a, b) | App(a, b):
            return occurrences(name, a) + occurrences(name, b)
        case Hide(witness, loc, body):
            return occurrences(name, witness) + int(loc == name) + occurrences(name, body)
        case Lam(var, body) | LinLam(var, body):
            return 0 if var == name else occurrences(name, body)
        case Bang(body):
            return occurrences(name, body)
        case Discard(names, body):
            return names.count(name) + occurrences(name, body)
        case Let(pattern, bound, body):
            inner = 0 if name in pattern_binders(pattern) else occurrences(name, body)
            return occurrences(name, bound) + inner
    raise TypeError(f"not a term: {t!r}")


# --- substitution -------------------------------------------------------


def _rename_target(value: Term, position: str) -> str:
    if isinstance(value, Var):
        return value.name
    raise HillError(f"cannot substitute a {type(value).__name__} for the {position}")


def substitute(node: Node, subst: Mapping[str, Term], *, linear: Iterable[str] = ()) -> Node:
    """
    Simultaneous capture-avoiding substitution.
    Variables in `linear` may not be duplicated: substituting a term mentioning one
    of them for a variable that occurs more than once raises LinearityViolation.
    """
    linear_set = set(linear)
    active = {k: v for k, v in subst.items() if k in free_vars(node)}
    if not active:
        return node
    if linear_set and not isinstance(node, _FORMULA_NODES):
        for key, value in active.items():
            if free_vars(value) & linear_set and occurrences(key, node) > 1:  # type: ignore[arg-type]
                raise LinearityViolation(
                    f"substituting for {key} would duplicate linear variable(s) "
                    + ", ".join(sorted(free_vars(value) & linear_set))
                )
    return _subst(node, active)


_FORMULA_NODES = (Atom, Pred, One, Tensor, Lolli, OfCourse, Forall, Ex, Located)


def _range_fv(subst: Mapping[str, Term]) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for value in subst.values():
        out |= free_vars(value)
    return out


def _binder(var: str, body: Node, subst: dict[str, Term]) -> tuple[str, dict[str, Term]]:
    """Rename var if it would capture a free variable of the substituted terms."""
    inner = {k: v for k, v in subst.items() if k != var and k in free_vars(body)}
    if var in _range_fv(inner):
        new = fresh_name(var, _range_fv(inner) | all_names(body) | set(inner))
        inner[var] = Var(new)
        return new, inner
    return var, inner


def _subst(node: Node, subst: dict[str, Term]) -> Node:
    if not subst:
        return node
    match node:
        case Var(name):
            return subst.get(name, node)
        case Nil() | One() | Atom():
            return node
        case Pair(a, b):
            return Pair(_subst(a, subst), _subst(b, subst))  # type: ignore[arg-type]
        case LinApp(a, b):
            return LinApp(_subst(a, subst), _subst(b, subst))  # type: ignore[arg-type]
        case App(a, b):
            return App(_subst(a, subst), _subst(b, subst))  # type: ignore[arg-type]
        case Tensor(a, b):
            return Tensor(_subst(a, subst), _subst(b, subst))  # type: ignore[arg-type]
        case Lolli(a, b):
            return Lolli(_subst(a, subst), _subst(b, subst))  # type: ignore[arg-type]
        case Hide(witness, loc, body):
            new_loc = _rename_target(subst[loc], "location of a hiding") if loc in subst else loc
            return Hide(_subst(witness, subst), new_loc, _subst(body, subst))  # type: ignore[arg-type]
        case Lam(var, body):
            var, inner = _binder(var, body, subst)
            return Lam(var, _subst(body, inner))  # type: ignore[arg-type]
        case LinLam(var, body):
            var, inner = _binder(var, body, subst)
            return LinLam(var, _subst(body, inner))  # type: ignore[arg-type]
        case Bang(body):
            return Bang(_subst(body, subst))  # type: ignore[arg-type]
        case OfCourse(body):
            return OfCourse(_subst(body, subst))  # type: ignore[arg-type]
        case Discard(names, body):
            renamed = tuple(_rename_target(subst[n], "discarded name") if n in subst else n for n in names)
            return Discard(renamed, _subst(body, subst))  # type: ignore[arg-type]
        case Copy(var):
            return Copy(_rename_target(subst[var], "copied name")) if var in subst else node
        case Let(pattern, bound, body):
            new_bound = _subst(bound, subst)
            inner = {k: v for k, v in subst.items() if k not in pattern_binders(pattern) and k in free_vars(body)}
            clash = set(pattern_binders(pattern)) & _range_fv(inner)
            if clash:
                avoid = set(_range_fv(inner)) | all_names(body) | all_names(pattern) | set(inner)
                renaming: dict[str, Term] = {}
                for name in sorted(clash):
                    new = fresh_name(name, avoid)
                    avoid.add(new)
                    renaming[name] = Var(new)
                pattern = _rename_pattern(pattern, renaming)
                inner.update(renaming)
            return Let(pattern, new_bound, _subst(body, inner))  # type: ignore[arg-type]
        case Pred(name, args, sorts):
            return Pred(
                name,
                tuple(_subst(a, subst) for a in args),  # type: ignore[misc]
                tuple(_subst(s, subst) for s in sorts),  # type: ignore[misc]
            )
        case Forall(var, sort, body):
            new_sort = _subst(sort, subst)
            var, inner = _binder(var, body, subst)
            return Forall(var, new_sort, _subst(body, inner))  # type: ignore[arg-type]
        case Ex(var, sort, body):
            new_sort = _subst(sort, subst)
            var, inner = _binder(var, body, subst)
            return Ex(var, new_sort, _subst(body, inner))  # type: ignore[arg-type]
        case Located(body, name):
            return Located(_subst(body, subst), _subst(name, subst))  # type: ignore[arg-type]
    raise TypeError(f"not a HILL node: {node!r}")


def _rename_pattern(p: Term, renaming: Mapping[str, Term]) -> Term:
    match p:
        case Var(name):
            return renaming.get(name, p)
        case Pair(a, b):
            return Pair(_rename_pattern(a, renaming), _rename_pattern(b, renaming))
        case Hide(witness, loc, body):
            new_loc = renaming[loc].name if loc in renaming else loc  # type: ignore[union-attr]
            return Hide(_rename_pattern(witness, renaming), new_loc, _rename_pattern(body, renaming))
        case Bang(body):
            return Bang(_rename_pattern(body, renaming))
    return p


def rename(node: Node, old: str, new: str) -> Node:
    return substitute(node, {old: Var(new)})


# --- alpha-equivalence --------------------------------------------------


def _bound_name(depth: int) -> str:
    return f"%{depth}"


def canonical(node: Node) -> Node:
    """Bound variables renamed to %0, %1, ... by binding depth."""
    return _canon(node, {}, 0)


def _canon(node: Node, env: dict[str, str], depth: int) -> Node:
    match node:
        case Var(name):
            return Var(env.get(name, name))
        case Nil() | One() | Atom():
            return node
        case Copy(var):
            return Copy(env.get(var, var))
        case Pair(a, b):
            return Pair(_canon(a, env, depth), _canon(b, env, depth))  # type: ignore[arg-type]
        case LinApp(a, b):
            return LinApp(_canon(a, env, depth), _canon(b, env, depth))  # type: ignore[arg-type]
        case App(a, b):
            return App(_canon(a, env, depth), _canon(b, env, depth))  # type: ignore[arg-type]
        case Tensor(a, b):
            return Tensor(_canon(a, env, depth), _canon(b, env, depth))  # type: ignore[arg-type]
        case Lolli(a, b):
            return Lolli(_canon(a, env, depth), _canon(b, env, depth))  # type: ignore[arg-type]
        case Hide(witness, loc, body):
            return Hide(_canon(witness, env, depth), env.get(loc, loc), _canon(body, env, depth))  # type: ignore[arg-type]
        case Lam(var, body) | LinLam(var, body):
            new = _bound_name(depth)
            inner = {**env, var: new}
            return type(node)(new, _canon(body, inner, depth + 1))  # type: ignore[arg-type]
        case Bang(body):
            return Bang(_canon(body, env, depth))  # type: ignore[arg-type]
        case OfCourse(body):
            return OfCourse(_canon(body, env, depth))  # type: ignore[arg-type]
        case Discard(names, body):
            return Discard(tuple(env.get(n, n) for n in names), _canon(body, env, depth))  # type: ignore[arg-type]
        case Let(pattern, bound, body):
            inner = dict(env)
            binders = pattern_binders(pattern)
            renaming: dict[str, Term] = {}
            for offset, name in enumerate(binders):
                inner[name] = _bound_name(depth + offset)
                renaming[name] = Var(inner[name])
            return Let(
                _rename_pattern(pattern, renaming),
                _canon(bound, env, depth),  # type: ignore[arg-type]
                _canon(body, inner, depth + len(binders)),  # type: ignore[arg-type]
            )
        case Pred(name, args, sorts):
            return Pred(
                name,
                tuple(_canon(a, env, depth) for a in args),  # type: ignore[misc]
                tuple(_canon(s, env, depth) for s in sorts),  # type: ignore[misc]
            )
        case Forall(var, sort, body) | Ex(var, sort, body):
            new = _bound_name(depth)
            return type(node)(new, _canon(sort, env, depth), _canon(body, {**env, var: new}, depth + 1))  # type: ignore[arg-type]
        case Located(body, name):
            return Located(_canon(body, env, depth), _canon(name, env, depth))  # type: ignore[arg-type]
    raise TypeError(f"not a HILL node: {node!r}")


def alpha_eq(a: Node, b: Node) -> bool:
    if a == b:
        return True
    return canonical(a) == canonical(b)


# --- contexts and nominal variables -------------------------------------


def free_nominal_vars(delta: Context | Sequent) -> frozenset[str]:
    """Union of free variables of the naming terms of all locations."""
    entries = delta.delta if isinstance(delta, Sequent) else delta
    out: frozenset[str] = frozenset()
    for _, f in locations(entries):
        out |= free_vars(f.name)
    return out


def separation_violations(delta: Context) -> list[tuple[str, str, frozenset[str]]]:
    """Pairs of distinct locations whose naming terms share free variables."""
    locs = locations(delta)
    out: list[tuple[str, str, frozenset[str]]] = []
    for i, (n, f) in enumerate(locs):
        for m, g in locs[i + 1 :]:
            shared = free_vars(f.name) & free_vars(g.name)
            if shared:
                out.append((n, m, shared))
    return out


def infer_sigma(delta: Context) -> frozenset[str]:
    """Free nominal variables of delta; raises SeparationViolation if two locations share one."""
    problems = separation_violations(delta)
    if problems:
        first, second, shared = problems[0]
        raise SeparationViolation(first, second, set(shared))
    return free_nominal_vars(delta)


# --- let desugaring -----------------------------------------------------

_NEUTRAL = (Var, App, LinApp, Copy, Let)


def desugar_let(pattern: Term, bound: Term, body: Term) -> Term:
    """
    let P = N1 in N2 as N2[N1/P]. Constructor patterns are matched against
    constructor terms component-wise; a neutral bound term (variable,
    application, copy, let) leaves the let in place.
    """
    match pattern:
        case Var(name):
            return _subst(body, {name: bound})  # type: ignore[return-value]
        case Nil():
            if isinstance(bound, Nil):
                return body
        case Pair(p1, p2):
            if isinstance(bound, Pair):
                return desugar_let(p1, bound.left, desugar_let(p2, bound.right, body))
        case Bang(inner):
            if isinstance(bound, Bang):
                return desugar_let(inner, bound.body, body)
        case Hide(Var(z), loc, inner):
            if isinstance(bound, Hide):
                renamed = _subst(body, {z: bound.witness, loc: Var(bound.loc)})
                return desugar_let(inner, bound.body, renamed)  # type: ignore[arg-type]
        case Copy():
            raise ShapeMismatch("copy(x) cannot be used as a let pattern here")
        case _:
            raise ShapeMismatch(f"not a pattern: {type(pattern).__name__}")
    if isinstance(bound, _NEUTRAL):
        return Let(pattern, bound, body)
    raise ShapeMismatch(f"pattern {type(pattern).__name__} cannot match a {type(bound).__name__}")


# --- graph formulas -----------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    """ex prefix . factors, factors being edge predicates over variables."""

    prefix: tuple[tuple[str, str], ...]
    factors: tuple[Pred, ...]

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.prefix)

    @property
    def closed(self) -> bool:
        bound = set(self.variables)
        return all(isinstance(a, Var) and a.name in bound for f in self.factors for a in f.args)


def is_graph_formula(f: Formula, node_types: Iterable[str] | None = None) -> bool:
    """Only 1, tensor, ex, forall and location types over edge predicates; binders range over node types."""
    allowed = set(node_types) if node_types is not None else None

    def sort_ok(sort: Formula) -> bool:
        return isinstance(sort, Atom) and (allowed is None or sort.name in allowed)

    def walk(g: Formula) -> bool:
        match g:
            case One():
                return True
            case Pred(_, args, sorts):
                return all(isinstance(a, (Var, Bang)) for a in args) and all(sort_ok(s) for s in sorts)
            case Tensor(a, b):
                return walk(a) and walk(b)
            case Ex(_, sort, body) | Forall(_, sort, body):
                return sort_ok(sort) and walk(body)
            case Located(body, name):
                return sort_ok(body) and isinstance(name, (Var, Bang))
        return False

    return walk(f)


def normal_form(f: Formula) -> NormalForm | None:
    """Split ex x1:T1 ... xn:Tn. body with body one or a tensor of predicates over variables."""
    prefix: list[tuple[str, str]] = []
    while isinstance(f, Ex):
        if not isinstance(f.sort, Atom):
            return None
        prefix.append((f.var, f.sort.name))
        f = f.body
    if len({v for v, _ in prefix}) != len(prefix):
        return None
    if isinstance(f, One):
        return NormalForm(tuple(prefix), ())
    factors: list[Pred] = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Tensor):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, Pred) and all(isinstance(a, Var) for a in g.args):
            factors.append(g)
        else:
            return None
    return NormalForm(tuple(prefix), tuple(factors))
