"""
Bounded backward proof search over the cut-free rules.

Iterative deepening on proof height. Invertible left rules (tensor, one,
closed bang, resource-bound existential) and the right rules for
implication and universal are applied eagerly; everything else is tried
in a fixed order so the first proof found is deterministic for a given
goal and depth. The identity premise of ExR is built directly by
identity_proof and does not count against the bound.
"""
from __future__ import annotations

import logging
from itertools import combinations
from typing import Final, Iterator

from dpohill.hill.ops import all_names, alpha_eq, free_nominal_vars, free_vars, substitute
from dpohill.hill.syntax import (
    Bang,
    Context,
    Ex,
    Forall,
    Formula,
    Located,
    Lolli,
    OfCourse,
    One,
    Sequent,
    Tensor,
    Term,
    Var,
    is_atomic,
)
from dpohill.kernel import rules
from dpohill.kernel.proof import ProofTree, is_cut_free
from dpohill.kernel.rules import fresh_var, identity_proof

_LOGGER: Final = logging.getLogger(__name__)

# upper bound on copies of one non-linear hypothesis alive in the linear context
MAX_COPIES: Final = 2

_Key = tuple[Context, Context, Formula]


def _key(gamma: Context, delta: Context, goal: Formula) -> _Key:
    return (tuple(sorted(gamma, key=lambda e: e[0])), tuple(sorted(delta, key=lambda e: e[0])), goal)


def _without(ctx: Context, *names: str) -> Context:
    drop = set(names)
    return tuple(e for e in ctx if e[0] not in drop)


def _splits(delta: Context) -> Iterator[tuple[Context, Context]]:
    """Every (first, second) partition of delta, smaller first halves first."""
    for k in range(len(delta) + 1):
        for chosen in combinations(range(len(delta)), k):
            picked = set(chosen)
            yield (
                tuple(e for i, e in enumerate(delta) if i in picked),
                tuple(e for i, e in enumerate(delta) if i not in picked),
            )


class _Search:
    def __init__(self) -> None:
        self.proved: dict[_Key, ProofTree] = {}
        self.failed: dict[_Key, int] = {}
        self.visited = 0

    def avoid(self, gamma: Context, delta: Context, goal: Formula) -> set[str]:
        names = {n for n, _ in gamma} | {n for n, _ in delta} | set(all_names(goal))
        for _, f in gamma + delta:
            names |= all_names(f)
        return names

    def prove(self, gamma: Context, delta: Context, goal: Formula, budget: int) -> ProofTree | None:
        if budget <= 0:
            return None
        key = _key(gamma, delta, goal)
        if key in self.proved:
            return self.proved[key]
        if self.failed.get(key, 0) >= budget:
            return None
        self.visited += 1
        tree = self._attempt(gamma, delta, goal, budget)
        if tree is None:
            self.failed[key] = max(budget, self.failed.get(key, 0))
            return None
        sequent = Sequent(free_nominal_vars(delta), gamma, delta, tree.conclusion.subject, goal)
        tree = tree.with_conclusion(sequent)
        self.proved[key] = tree
        return tree

    def _attempt(self, gamma: Context, delta: Context, goal: Formula, budget: int) -> ProofTree | None:
        axiom = self._axiom(gamma, delta, goal)
        if axiom is not None:
            return axiom
        avoid = self.avoid(gamma, delta, goal)
        for name, f in delta:
            if isinstance(f, (Tensor, One, Ex)) or (isinstance(f, OfCourse) and not free_vars(f.body)):
                return self._left(gamma, delta, goal, budget, name, f, avoid)
        if isinstance(goal, Lolli):
            u = fresh_var("u", avoid)
            premise = self.prove(gamma, delta + ((u, goal.left),), goal.right, budget - 1)
            return rules.lolli_r(premise, u) if premise else None
        if isinstance(goal, Forall):
            if free_vars(goal.sort):
                return None
            y = fresh_var("y", avoid)
            instance = substitute(goal.body, {goal.var: Var(y)})
            premise = self.prove(gamma + ((y, goal.sort),), delta, instance, budget - 1)  # type: ignore[arg-type]
            return rules.all_r(premise, y) if premise else None
        for candidate in (
            self._ex_r,
            self._tensor_r,
            self._bang_r,
            self._lolli_l,
            self._all_l,
            self._contr,
        ):
            tree = candidate(gamma, delta, goal, budget, avoid)
            if tree is not None:
                return tree
        return None

    def _axiom(self, gamma: Context, delta: Context, goal: Formula) -> ProofTree | None:
        if len(delta) == 1 and is_atomic(goal) and alpha_eq(delta[0][1], goal):
            return rules.lid(gamma, delta[0][0], goal)
        if not delta:
            if isinstance(goal, One):
                return rules.one_r(gamma)
            if not free_vars(goal):
                for x, f in gamma:
                    if alpha_eq(f, goal):
                        return rules.uid(gamma, x)
        return None

    def _left(
        self, gamma: Context, delta: Context, goal: Formula, budget: int, name: str, f: Formula, avoid: set[str]
    ) -> ProofTree | None:
        rest = _without(delta, name)
        match f:
            case Tensor(a, b):
                u = fresh_var("u", avoid)
                v = fresh_var("u", avoid | {u})
                premise = self.prove(gamma, rest + ((u, a), (v, b)), goal, budget - 1)
                return rules.tensor_l(premise, name, u, v) if premise else None
            case One():
                premise = self.prove(gamma, rest, goal, budget - 1)
                return rules.one_l(premise, name) if premise else None
            case OfCourse(body):
                x = fresh_var("x", avoid)
                premise = self.prove(gamma + ((x, body),), rest, goal, budget - 1)
                return rules.bang_l(premise, name, x) if premise else None
            case Ex(var, sort, body):
                if free_vars(sort):
                    return None
                z = fresh_var("z", avoid)
                n = fresh_var("n", avoid | {z})
                v = fresh_var("u", avoid | {z, n})
                instance = substitute(body, {var: Var(z)})
                extended = rest + ((n, Located(sort, Var(z))), (v, instance))  # type: ignore[arg-type]
                premise = self.prove(gamma + ((z, sort),), extended, goal, budget - 1)
                return rules.ex_l(premise, name, z, n, v, f) if premise else None
        return None

    def _witness(self, gamma: Context, d: Term, sort: Formula) -> ProofTree | None:
        """Closed-context derivation of a naming term: a variable, possibly under bangs."""
        match d, sort:
            case Var(w), _:
                for x, f in gamma:
                    if x == w and alpha_eq(f, sort):
                        return rules.uid(gamma, w)
            case Bang(inner), OfCourse(body):
                premise = self._witness(gamma, inner, body)
                return rules.bang_r(premise) if premise else None
        return None

    def _ex_r(
        self, gamma: Context, delta: Context, goal: Formula, budget: int, avoid: set[str]
    ) -> ProofTree | None:
        if not isinstance(goal, Ex):
            return None
        for n, loc in delta:
            if not isinstance(loc, Located) or not alpha_eq(loc.body, goal.sort):
                continue
            d = loc.name
            fv = free_vars(d)
            if goal.var in fv:
                renamed = fresh_var(goal.var, avoid | fv)
                goal = Ex(renamed, goal.sort, substitute(goal.body, {goal.var: Var(renamed)}))  # type: ignore[arg-type]
            if fv & (free_vars(goal.body) - {goal.var}):
                continue
            gamma1 = tuple(e for e in gamma if e[0] in fv)
            witness = self._witness(gamma1, d, goal.sort)
            if witness is None:
                continue
            gamma2 = tuple(e for e in gamma if e[0] not in fv)
            y = fresh_var("y", avoid)
            u = fresh_var("u", avoid | {y})
            same = substitute(goal.body, {goal.var: Var(y)})
            inner = identity_proof(gamma2 + ((y, goal.sort),), u, same)  # type: ignore[arg-type]
            if inner is None:
                continue
            instance = substitute(goal.body, {goal.var: d})
            body = self.prove(gamma, _without(delta, n), instance, budget - 1)  # type: ignore[arg-type]
            if body is not None:
                return rules.ex_r(rules.lolli_r(inner, u), witness, body, n, goal)
        return None

    def _tensor_r(
        self, gamma: Context, delta: Context, goal: Formula, budget: int, avoid: set[str]
    ) -> ProofTree | None:
        if not isinstance(goal, Tensor):
            return None
        for first, second in _splits(delta):
            left = self.prove(gamma, first, goal.left, budget - 1)
            if left is None:
                continue
            right = self.prove(gamma, second, goal.right, budget - 1)
            if right is not None:
                return rules.tensor_r(left, right)
        return None

    def _bang_r(
        self, gamma: Context, delta: Context, goal: Formula, budget: int, avoid: set[str]
    ) -> ProofTree | None:
        if not isinstance(goal, OfCourse) or delta:
            return None
        premise = self.prove(gamma, (), goal.body, budget - 1)
        return rules.bang_r(premise) if premise else None

    def _lolli_l(
        self, gamma: Context, delta: Context, goal: Formula, budget: int, avoid: set[str]
    ) -> ProofTree | None:
        for v, f in delta:
            if not isinstance(f, Lolli):
                continue
            u = fresh_var("u", avoid)
            for first, second in _splits(_without(delta, v)):
                arg = self.prove(gamma, first, f.left, budget - 1)
                if arg is None:
                    continue
                rest = self.prove(gamma, second + ((u, f.right),), goal, budget - 1)
                if rest is not None:
                    return rules.lolli_l(arg, rest, v, u)
        return None

    def _all_l(
        self, gamma: Context, delta: Context, goal: Formula, budget: int, avoid: set[str]
    ) -> ProofTree | None:
        for name, f in delta:
            if not isinstance(f, Forall):
                continue
            v = fresh_var("u", avoid)
            for d in self._witness_terms(gamma, f.sort):
                witness = self._witness(gamma, d, f.sort)
                if witness is None:
                    continue
                instance = substitute(f.body, {f.var: d})
                rest = self.prove(gamma, _without(delta, name) + ((v, instance),), goal, budget - 1)  # type: ignore[arg-type]
                if rest is not None:
                    return rules.all_l(witness, rest, name, f, v)
        return None

    def _witness_terms(self, gamma: Context, sort: Formula) -> Iterator[Term]:
        for x, f in gamma:
            if alpha_eq(f, sort):
                yield Var(x)
            elif isinstance(sort, OfCourse) and alpha_eq(f, sort.body):
                yield Bang(Var(x))

    def _contr(
        self, gamma: Context, delta: Context, goal: Formula, budget: int, avoid: set[str]
    ) -> ProofTree | None:
        for x, f in gamma:
            if is_atomic(f):
                continue
            copies = sum(1 for _, g in delta if alpha_eq(g, f))
            if copies >= MAX_COPIES:
                continue
            u = fresh_var("u", avoid)
            premise = self.prove(gamma, delta + ((u, f),), goal, budget - 1)
            if premise is not None:
                return rules.contr(premise, x, u)
        return None


def prove(goal: Sequent, depth: int = 12) -> ProofTree | None:
    """
    A cut-free proof of goal of height at most depth, or None.
    The subject of goal, if any, is ignored; the returned tree carries its own.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    search = _Search()
    for bound in range(1, depth + 1):
        tree = search.prove(goal.gamma, goal.delta, goal.goal, bound)
        if tree is not None:
            _LOGGER.debug("proof found at height %d after %d goals", bound, search.visited)
            return tree
    _LOGGER.debug("no proof within height %d after %d goals", depth, search.visited)
    return None


def verify_cut_admissibility(tree: ProofTree, depth: int = 12) -> ProofTree | None:
    """Cut-free input comes back unchanged; otherwise a cut-free proof of the same conclusion is searched."""
    if is_cut_free(tree):
        return tree
    return prove(tree.conclusion, depth)
