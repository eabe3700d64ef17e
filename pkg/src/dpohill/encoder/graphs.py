"""
Graphs as HILL formulas.

A node v of type A becomes a naming variable x :: A in the non-linear
context, located by n :: loc A @ x; an edge e of type E(A1 ... Ak) becomes a
linear variable u :: all w1:A1 ... wk:Ak. E(w1, ..., wk). The representative
of a graph hides every node under ex and tensors its applied edges.

Representatives are canonical: bound variables are numbered by the least
node ordering (within classes of equal type and incidence) under which the
sorted edge factors are lexicographically smallest, so isomorphic graphs get
identical formulas.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from math import factorial
from typing import Callable, Final, Mapping, Sequence

from dpohill.core.errors import EmissionError, GraphError, NotNormalForm
from dpohill.graphs.hypergraph import GraphBuilder, InterfaceGraph, TypedHypergraph, TypeGraph, TypeGraphBuilder
from dpohill.hill.ops import all_names, alpha_eq, normal_form, substitute
from dpohill.hill.syntax import (
    Atom,
    Context,
    Ex,
    Forall,
    Formula,
    Located,
    Lolli,
    OfCourse,
    Pred,
    Sequent,
    Tensor,
    Var,
    ex_all,
    forall_all,
    tensor_all,
)
from dpohill.kernel import rules
from dpohill.kernel.proof import ProofTree
from dpohill.kernel.rules import fresh_var, identity_proof

# orderings tried before falling back to identifier order inside each class
MAX_CANDIDATES: Final = 40320


@dataclass(frozen=True)
class Representative:
    """ex prefix. factors, with the graph items behind each binder and factor."""

    formula: Formula
    prefix: tuple[tuple[str, Formula], ...]
    nodes: tuple[str, ...]
    factors: tuple[Pred, ...]
    edges: tuple[str, ...]

    def naming(self) -> dict[str, str]:
        """graph node -> bound variable"""
        return {v: var for v, (var, _) in zip(self.nodes, self.prefix)}


def _node_order(
    nodes: Sequence[tuple[str, str]],
    edges: Sequence[tuple[str, str, tuple[str, ...]]],
    external: Mapping[str, str],
) -> tuple[list[str], list[int]]:
    """(internal nodes in canonical order, edge indices in canonical factor order)."""
    incidence: dict[str, list[tuple[str, int]]] = {v: [] for v, _ in nodes}
    for _, label, args in edges:
        for position, v in enumerate(args):
            if v in incidence:
                incidence[v].append((label, position))
    keyed = sorted(((sort, tuple(sorted(incidence[v]))), v) for v, sort in nodes)
    classes: list[list[str]] = []
    last = None
    for key, v in keyed:
        if key != last:
            classes.append([])
            last = key
        classes[-1].append(v)

    def factor_keys(order: Sequence[str]) -> list[tuple[tuple, int]]:
        index = {v: i for i, v in enumerate(order)}
        keys = []
        for j, (_, label, args) in enumerate(edges):
            shown = tuple(("b", index[v]) if v in index else ("f", external[v]) for v in args)
            keys.append(((label, shown), j))
        return sorted(keys)

    count = 1
    for cls in classes:
        count *= factorial(len(cls))
    if count > MAX_CANDIDATES:
        order = [v for cls in classes for v in cls]
        return order, [j for _, j in factor_keys(order)]
    best: tuple | None = None
    best_order: list[str] = []
    for choice in product(*(permutations(cls) for cls in classes)):
        order = [v for part in choice for v in part]
        key = tuple(k for k, _ in factor_keys(order))
        if best is None or key < best:
            best, best_order = key, order
    return best_order, [j for _, j in factor_keys(best_order)]


def _build(
    nodes: Sequence[tuple[str, str]],
    edges: Sequence[tuple[str, str, tuple[str, ...]]],
    external: Mapping[str, str],
    names: Sequence[str],
) -> Representative:
    sorts = dict(nodes)
    order, factor_order = _node_order(nodes, edges, external)
    bound = {v: names[i] for i, v in enumerate(order)}
    variable = {**external, **bound}
    factors = tuple(Pred(edges[j][1], tuple(Var(variable[v]) for v in edges[j][2])) for j in factor_order)
    prefix = tuple((bound[v], Atom(sorts[v])) for v in order)
    return Representative(
        ex_all(prefix, tensor_all(factors)),
        prefix,
        tuple(order),
        factors,
        tuple(edges[j][0] for j in factor_order),
    )


def representative(
    g: TypedHypergraph, prefix: str = "x", external: Mapping[str, str] | None = None, start: int = 1
) -> Representative:
    """
    Canonical normal graph formula of g. Nodes in `external` stay free under the
    given variable names; the others are bound as prefix<start>, prefix<start+1>, ...
    """
    outside = dict(external or {})
    internal = [(v, g.node_type[v]) for v in g.nodes if v not in outside]
    names = [f"{prefix}{start + i}" for i in range(len(internal))]
    edges = [(e, g.edge_type[e], tuple(g.attach[e])) for e in g.edges]
    return _build(internal, edges, outside, names)


def canonical_formula(f: Formula) -> Formula:
    """Every normal graph sub-formula replaced by its canonical representative."""
    nf = normal_form(f)
    if nf is not None:
        bound = set(nf.variables)
        nodes = [(v, sort) for v, sort in nf.prefix]
        edges = [(str(j), p.name, tuple(a.name for a in p.args)) for j, p in enumerate(nf.factors)]  # type: ignore[union-attr]
        external = {a: a for _, _, args in edges for a in args if a not in bound}
        return _build(nodes, edges, external, list(nf.variables)).formula
    match f:
        case Tensor(a, b):
            return Tensor(canonical_formula(a), canonical_formula(b))
        case Lolli(a, b):
            return Lolli(canonical_formula(a), canonical_formula(b))
        case OfCourse(body):
            return OfCourse(canonical_formula(body))
        case Forall(var, sort, body):
            return Forall(var, sort, canonical_formula(body))
        case Ex(var, sort, body):
            return Ex(var, sort, canonical_formula(body))
    return f


# --- decoding ---


def decode(f: Formula, type_graph: TypeGraph | None = None, name: str = "") -> TypedHypergraph:
    """
    Graph of a closed normal graph formula: a node per bound variable, an edge per factor.
    Without a type graph one is inferred from the sorts and predicate arguments.
    """
    nf = normal_form(f)
    if nf is None:
        raise NotNormalForm("formula is not ex-prefixed tensor of edge predicates over variables")
    if not nf.closed:
        raise NotNormalForm("formula has free variables")
    sorts = dict(nf.prefix)
    tg = type_graph if type_graph is not None else _infer_type_graph(nf.prefix, nf.factors, sorts)
    builder = GraphBuilder(tg, name)
    for v, sort in nf.prefix:
        builder.node(v, sort)
    for j, p in enumerate(nf.factors, start=1):
        builder.edge(f"e{j}", p.name, *(a.name for a in p.args))  # type: ignore[union-attr]
    try:
        return builder.build()
    except GraphError as err:
        raise NotNormalForm(f"formula does not describe a graph over {tg.name}: {err}") from err


def _infer_type_graph(prefix: Sequence[tuple[str, str]], factors: Sequence[Pred], sorts: Mapping[str, str]) -> TypeGraph:
    builder = TypeGraphBuilder("inferred")
    for label in dict.fromkeys(sort for _, sort in prefix):
        builder.node_type(label)
    arity: dict[str, tuple[str, ...]] = {}
    for p in factors:
        shape = tuple(sorts[a.name] for a in p.args)  # type: ignore[union-attr]
        if arity.setdefault(p.name, shape) != shape:
            raise NotNormalForm(f"edge type {p.name} used with different argument sorts")
    for label, shape in arity.items():
        builder.edge_type(label, *shape)
    return builder.build()


# --- encodings and their derivations ---


@dataclass(frozen=True)
class GraphSignature:
    """node -> (location, naming variable, node type); edge -> (linear variable, edge type)."""

    node_locations: Mapping[str, tuple[str, str, Formula]]
    edge_vars: Mapping[str, tuple[str, Formula]]

    def gamma(self) -> Context:
        return tuple((x, sort) for _, x, sort in self.node_locations.values())

    def delta(self) -> Context:
        locs = tuple((n, Located(sort, Var(x))) for n, x, sort in self.node_locations.values())
        return locs + tuple(self.edge_vars.values())


@dataclass(frozen=True)
class Encoding:
    graph: TypedHypergraph
    signature: GraphSignature
    sequent: Sequent
    derivation: ProofTree

    @property
    def goal(self) -> Formula:
        return self.sequent.goal


def edge_type_formula(tg: TypeGraph, label: str) -> Formula:
    arity = tg.arity[label]
    binders = [(f"w{k}", Atom(sort)) for k, sort in enumerate(arity, start=1)]
    return forall_all(binders, Pred(label, tuple(Var(w) for w, _ in binders)))


def edge_component(gamma: Context, u: str, formula: Formula, args: Sequence[str]) -> ProofTree:
    """gamma; u :: all w.E(w) |- u applied to args :: E(args), by AllL per argument and LId."""
    steps = [formula]
    for a in args:
        current = steps[-1]
        if not isinstance(current, Forall):
            raise EmissionError(f"edge variable {u} takes fewer arguments than given")
        steps.append(substitute(current.body, {current.var: Var(a)}))  # type: ignore[arg-type]
    hyps = [u] + [f"{u}_{k}" for k in range(1, len(args) + 1)]
    tree = rules.lid(gamma, hyps[-1], steps[-1])
    for k in reversed(range(len(args))):
        tree = rules.all_l(rules.uid(gamma, args[k]), tree, hyps[k], steps[k], hyps[k + 1])  # type: ignore[arg-type]
    return tree


def tensor_proof(gamma: Context, parts: Sequence[ProofTree]) -> ProofTree:
    """Right-nested TensorR over parts; 1R for none."""
    if not parts:
        return rules.one_r(gamma)
    tree = parts[-1]
    for part in reversed(parts[:-1]):
        tree = rules.tensor_r(part, tree)
    return tree


Finish = Callable[[Context, Formula], ProofTree]


def hide_all(gamma: Context, delta: Context, goal: Formula, assignment: Mapping[str, str], finish: Finish) -> ProofTree:
    """
    ExR for every leading binder of goal, the binder's witness being its assigned
    naming variable and the location holding it taken from delta; finish proves the rest.
    """
    if not isinstance(goal, Ex) or goal.var not in assignment:
        return finish(delta, goal)
    a = assignment[goal.var]
    held = Located(goal.sort, Var(a))
    n = next((name for name, f in delta if alpha_eq(f, held)), None)
    if n is None:
        raise EmissionError(f"no location holds {a} for {goal.var}")
    avoid = {name for name, _ in gamma + delta} | set(all_names(goal))
    for _, f in gamma + delta:
        avoid |= all_names(f)
    y = fresh_var("y", avoid)
    u = fresh_var("u", avoid | {y})
    gamma1 = tuple(e for e in gamma if e[0] == a)
    gamma2 = tuple(e for e in gamma if e[0] != a)
    same = substitute(goal.body, {goal.var: Var(y)})
    inner = identity_proof(gamma2 + ((y, goal.sort),), u, same)  # type: ignore[arg-type]
    if inner is None:
        raise EmissionError(f"no identity derivation for {goal.var}")
    rest = tuple(e for e in delta if e[0] != n)
    instance = substitute(goal.body, {goal.var: Var(a)})
    body = hide_all(gamma, rest, instance, assignment, finish)  # type: ignore[arg-type]
    return rules.ex_r(rules.lolli_r(inner, u), rules.uid(gamma1, a), body, n, goal)


def _signature(g: TypedHypergraph, rep: Representative) -> GraphSignature:
    locations = {v: (f"n{i}", f"v{i}", Atom(g.node_type[v])) for i, v in enumerate(rep.nodes, start=1)}
    edges = {e: (f"u{j}", edge_type_formula(g.type_graph, g.edge_type[e])) for j, e in enumerate(rep.edges, start=1)}
    return GraphSignature(locations, edges)


def _derive(
    g: TypedHypergraph, rep: Representative, signature: GraphSignature, external: Mapping[str, str]
) -> ProofTree:
    naming = {v: x for v, (_, x, _) in signature.node_locations.items()}
    variable = {**external, **naming}
    gamma = tuple((external[v], Atom(g.node_type[v])) for v in external) + signature.gamma()
    assignment = {bound: naming[v] for v, bound in rep.naming().items()}

    def edges(delta: Context, body: Formula) -> ProofTree:
        parts = []
        for e in rep.edges:
            u, formula = signature.edge_vars[e]
            parts.append(edge_component(gamma, u, formula, [variable[v] for v in g.attach[e]]))
        return tensor_proof(gamma, parts)

    return hide_all(gamma, signature.delta(), rep.formula, assignment, edges)


def encode_graph(g: TypedHypergraph) -> Encoding:
    """
    [FN]; nodes; locations, edges |- N :: representative, with its derivation.
    Node sorts enter the unrestricted context as plain atoms `x :: A`, not `x :: !A`.
    """
    rep = representative(g)
    signature = _signature(g, rep)
    tree = _derive(g, rep, signature, {})
    return Encoding(g, signature, tree.conclusion, tree)


def encode_abstract(ig: InterfaceGraph, prefix: str = "y") -> Encoding:
    """
    all x1:T1 ... xj:Tj. ex ... . body, the interface nodes abstracted in interface order
    and only internal nodes hidden and located.
    """
    g = ig.body
    external = {ig.embedding[i]: f"{prefix}{k}" for k, i in enumerate(ig.interface_nodes, start=1)}
    rep = representative(g, prefix, external, start=len(external) + 1)
    signature = _signature(g, rep)
    tree = _derive(g, rep, signature, external)
    for v in reversed(ig.external):
        tree = rules.all_r(tree, external[v])
    return Encoding(g, signature, tree.conclusion, tree)

