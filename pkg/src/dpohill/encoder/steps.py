"""
Certificates for transformation steps and reachability.

emit_step_derivation follows the shape of the derived transformation rule:

    -oR  opens the host representative,
    ExL* / TensorL* unpack its nodes and edges,
    AllL* instantiate the rule's interface with the images of the match,
    -oL  consumes the matched part (ExR*/TensorR reassembling the rule's lhs),
         and in the continuation unpacks the rule's rhs and reassembles the
         result representative from what is left (ExR*/TensorR again).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Final, Sequence

from dpohill.core.errors import EmissionError
from dpohill.dpo.rule import Rule, StepRecord
from dpohill.encoder.graphs import Representative, hide_all, representative, tensor_proof
from dpohill.encoder.rules import rule_formula, rule_signature
from dpohill.graphs.hypergraph import TypedHypergraph
from dpohill.hill.ops import alpha_eq, substitute
from dpohill.hill.syntax import Context, Ex, Forall, Formula, Located, Lolli, One, Sequent, Tensor, Var
from dpohill.kernel import rules
from dpohill.kernel.proof import ProofTree
from dpohill.kernel.rules import identity_proof, make_sequent

_LOGGER: Final = logging.getLogger(__name__)


@dataclass
class _Opened:
    """Result of unpacking one hypothesis: what it adds and how to wrap the inner proof."""

    gamma: Context
    delta: Context
    hidden: tuple[str, ...]
    atoms: tuple[str, ...]
    ops: list[tuple]

    def close(self, tree: ProofTree) -> ProofTree:
        for op in reversed(self.ops):
            match op:
                case ("ex", u, z, n, v, quantified):
                    tree = rules.ex_l(tree, u, z, n, v, quantified)
                case ("tensor", w, u, v):
                    tree = rules.tensor_l(tree, w, u, v)
                case ("one", u):
                    tree = rules.one_l(tree, u)
        return tree


def open_hypothesis(hyp: str, formula: Formula, var: str, loc: str, atom: str) -> _Opened:
    """
    Plan ExL on every leading binder and TensorL/OneL on the body of hyp :: formula.
    Introduced names are var<i>, loc<i> and atom<j>; continuations are hyp_<k>.
    """
    gamma: list[tuple[str, Formula]] = []
    delta: list[tuple[str, Formula]] = []
    hidden: list[str] = []
    ops: list[tuple] = []
    current, name, k = formula, hyp, 0
    while isinstance(current, Ex):
        k += 1
        z, n, v = f"{var}{k}", f"{loc}{k}", f"{hyp}_{k}"
        ops.append(("ex", name, z, n, v, current))
        gamma.append((z, current.sort))
        delta.append((n, Located(current.sort, Var(z))))
        hidden.append(z)
        current = substitute(current.body, {current.var: Var(z)})  # type: ignore[assignment]
        name = v
    atoms: list[str] = []
    if isinstance(current, One):
        ops.append(("one", name))
    else:
        j = 0
        while isinstance(current, Tensor):
            j += 1
            k += 1
            left, rest = f"{atom}{j}", f"{hyp}_{k}"
            ops.append(("tensor", name, left, rest))
            delta.append((left, current.left))
            atoms.append(left)
            current, name = current.right, rest
        delta.append((name, current))
        atoms.append(name)
    return _Opened(tuple(gamma), tuple(delta), tuple(hidden), tuple(atoms), ops)


def atoms_proof(gamma: Context, delta: Context, goal: Formula) -> ProofTree:
    """TensorR/LId/1R proof of a tensor of atoms using every delta entry exactly once."""
    factors = _right_factors(goal)
    remaining = list(delta)
    parts: list[ProofTree] = []
    for f in factors:
        index = next((i for i, (_, g) in enumerate(remaining) if alpha_eq(g, f)), None)
        if index is None:
            raise EmissionError(f"no resource left for {f}")
        name, _ = remaining.pop(index)
        parts.append(rules.lid(gamma, name, f))
    if remaining:
        raise EmissionError("unused resources: " + ", ".join(n for n, _ in remaining))
    return tensor_proof(gamma, parts)


def _right_factors(f: Formula) -> list[Formula]:
    if isinstance(f, One):
        return []
    out: list[Formula] = []
    while isinstance(f, Tensor):
        out.append(f.left)
        f = f.right
    out.append(f)
    return out


def emit_step_derivation(step: StepRecord, rule_var: str = "rule") -> ProofTree:
    """
    [] ; . ; rule_var :: delta |- N :: gamma_G -o gamma_H, delta being the rule formula
    without its outer bang.
    """
    rule, host, result = step.rule, step.host, step.result
    m = step.match.morphism
    sig = rule_signature(rule)
    rep_g = representative(host, "x")
    rep_h = representative(result, "z")
    delta_formula = sig.formula

    opened_g = open_hypothesis("g", rep_g.formula, "v", "n", "a")
    node_var = dict(zip(rep_g.nodes, opened_g.hidden))
    node_loc = {v: f"n{i}" for i, v in enumerate(rep_g.nodes, start=1)}
    edge_atom = dict(zip(rep_g.edges, opened_g.atoms)) if rep_g.edges else {}
    gamma = opened_g.gamma
    resources = opened_g.delta

    # interface instantiation
    witnesses = [node_var[m.node_map[rule.l.node_map[k]]] for k, _, _ in sig.interface]
    chain: list[tuple[str, Formula]] = [(rule_var, delta_formula)]
    for i, w in enumerate(witnesses, start=1):
        name, f = chain[-1]
        if not isinstance(f, Forall):
            raise EmissionError(f"rule {rule.name} has fewer interface binders than its interface")
        chain.append((f"r{i}", substitute(f.body, {f.var: Var(w)})))  # type: ignore[arg-type]
    applied_name, applied = chain[-1]
    if not isinstance(applied, Lolli):
        raise EmissionError(f"rule {rule.name} does not instantiate to an implication")

    # matched part
    used = {edge_atom[m.edge_map[e]] for e in rule.lhs.edges}
    used |= {node_loc[m.node_map[v]] for v in rule.deleted_nodes}
    matched = tuple(e for e in resources if e[0] in used)
    left_over = tuple(e for e in resources if e[0] not in used)
    lhs_assignment = {var: node_var[m.node_map[v]] for v, var in sig.lhs.naming().items()}
    arg = hide_all(gamma, matched, applied.left, lhs_assignment, lambda d, f: atoms_proof(gamma, d, f))

    # continuation: open the rhs, rebuild the result
    opened_r = open_hypothesis("h", applied.right, "w", "m", "b")
    created = dict(zip(sig.rhs.nodes, opened_r.hidden))
    inner_gamma = gamma + opened_r.gamma
    from_context = {h: step.g.node_map[dnode] for dnode, h in step.h.node_map.items()}
    from_rule = {h: r for r, h in step.m_star.node_map.items()}
    result_assignment: dict[str, str] = {}
    for h, var in rep_h.naming().items():
        if h in from_context:
            result_assignment[var] = node_var[from_context[h]]
        elif from_rule.get(h) in created:
            result_assignment[var] = created[from_rule[h]]
        else:
            raise EmissionError(f"result node {h} has no origin")
    rebuilt = hide_all(
        inner_gamma,
        left_over + opened_r.delta,
        rep_h.formula,
        result_assignment,
        lambda d, f: atoms_proof(inner_gamma, d, f),
    )
    rest = opened_r.close(rebuilt)
    tree = rules.lolli_l(arg, rest, applied_name, "h")
    for i in reversed(range(len(witnesses))):
        name, f = chain[i]
        tree = rules.all_l(rules.uid(gamma, witnesses[i]), tree, name, f, chain[i + 1][0])  # type: ignore[arg-type]
    tree = rules.lolli_r(opened_g.close(tree), "g")
    _LOGGER.debug("step %s on %s certified", rule.name, host.name or "host")
    return tree


def transformation_sequent(rule: Rule, host: TypedHypergraph, result: TypedHypergraph, rule_var: str = "rule") -> Sequent:
    """rule_var :: rule |- host -o result, over representatives, without a proof term."""
    goal = Lolli(representative(host, "x").formula, representative(result, "z").formula)
    return make_sequent((), ((rule_var, rule_formula(rule)),), None, goal)


def step_sequent(step: StepRecord, rule_var: str = "rule") -> Sequent:
    """The sequent emit_step_derivation proves, without a proof term."""
    return transformation_sequent(step.rule, step.host, step.result, rule_var)


# --- reachability ---


def reachability_sequent(
    rule_list: Sequence[Rule], start: Representative | Formula, target: Representative | Formula, unrestricted: bool
) -> Sequent:
    """
    Once each: rules p1 ... pk sit in the linear context next to the start graph.
    Unrestricted: rules sit in the non-linear context and may be used any number of times.
    """
    first = start.formula if isinstance(start, Representative) else start
    last = target.formula if isinstance(target, Representative) else target
    entries = tuple((f"p{i}", rule_formula(r)) for i, r in enumerate(rule_list, start=1))
    if unrestricted:
        return make_sequent(entries, (("g0", first),), None, last)
    return make_sequent((), entries + (("g0", first),), None, last)


def emit_reachability(steps: Sequence[StepRecord], unrestricted: bool = False) -> ProofTree:
    """
    Proof of the reachability sequent for a concrete trace, each step certified by
    emit_step_derivation and composed by Cut. Once-each reading lists the rule of every
    step; the unrestricted one lists every distinct rule once and copies it per use.
    """
    if not steps:
        raise EmissionError("a trace needs at least one step")
    graphs = [representative(steps[0].host, "x").formula]
    graphs += [representative(s.result, "z").formula for s in steps]
    for i in range(1, len(steps)):
        if not alpha_eq(representative(steps[i].host, "x").formula, graphs[i]):
            raise EmissionError(f"step {i + 1} does not start where step {i} ended")
    if unrestricted:
        distinct: dict[str, Rule] = {}
        for s in steps:
            distinct.setdefault(s.rule.name, s.rule)
        gamma: Context = tuple((f"p{i}", rule_formula(r)) for i, r in enumerate(distinct.values(), start=1))
        slot = {name: f"p{i}" for i, name in enumerate(distinct, start=1)}
        rule_hyps = [f"c{i}" for i in range(1, len(steps) + 1)]
    else:
        gamma = ()
        rule_hyps = [f"p{i}" for i in range(1, len(steps) + 1)]

    def chain(i: int, hyp: str) -> ProofTree:
        if i == len(steps):
            tree = identity_proof(gamma, hyp, graphs[i])
            if tree is None:
                raise EmissionError("graph formula without identity derivation")
            return tree
        certificate = emit_step_derivation(steps[i], rule_hyps[i])
        if gamma:
            certificate = rules.weak(certificate, gamma)
        source = identity_proof(gamma, hyp, graphs[i])
        if source is None:
            raise EmissionError("graph formula without identity derivation")
        link, following = f"k{i + 1}", f"g{i + 1}"
        consume = rules.lolli_l(source, chain(i + 1, following), link, following)
        tree = rules.cut(certificate, consume, link)
        if unrestricted:
            tree = rules.contr(tree, slot[steps[i].rule.name], rule_hyps[i])
        return tree

    return chain(0, "g0")
