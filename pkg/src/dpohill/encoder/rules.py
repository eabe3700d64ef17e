"""Rules as linear implications between representatives, abstracted over the interface."""
from __future__ import annotations

from dataclasses import dataclass

from dpohill.core.errors import GraphError
from dpohill.dpo.rule import Rule
from dpohill.encoder.graphs import Representative, representative
from dpohill.hill.syntax import Atom, Formula, Lolli, OfCourse, Tensor, forall_all


@dataclass(frozen=True)
class RuleSignature:
    """
    interface: (interface node, variable, sort) in interface order.
    lhs and rhs: representatives with interface nodes free and the rest hidden.
    """

    rule: Rule
    interface: tuple[tuple[str, str, Formula], ...]
    lhs: Representative
    rhs: Representative

    @property
    def binders(self) -> tuple[tuple[str, Formula], ...]:
        return tuple((var, sort) for _, var, sort in self.interface)

    @property
    def formula(self) -> Formula:
        """all interface. lhs -o rhs"""
        return forall_all(self.binders, Lolli(self.lhs.formula, self.rhs.formula))


def rule_signature(rule: Rule, prefix: str = "y", start: int = 1) -> RuleSignature:
    """
    Interface variables first, then hidden lhs nodes, then hidden rhs nodes, numbered from start.
    Every interface node must carry an edge in lhs or rhs.
    """
    problems = rule.violations()
    if problems:
        raise GraphError(f"rule {rule.name}: " + "; ".join(problems))
    isolated = rule.isolated_interface_nodes()
    if isolated:
        raise GraphError(f"rule {rule.name}: interface nodes isolated in both lhs and rhs: {', '.join(isolated)}")
    interface = tuple(
        (k, f"{prefix}{start + i}", Atom(rule.interface.node_type[k])) for i, k in enumerate(rule.interface.nodes)
    )
    names = {k: var for k, var, _ in interface}
    left = {rule.l.node_map[k]: names[k] for k in names}
    right = {rule.r.node_map[k]: names[k] for k in names}
    lhs = representative(rule.lhs, prefix, left, start + len(interface))
    rhs = representative(rule.rhs, prefix, right, start + len(interface) + len(lhs.nodes))
    return RuleSignature(rule, interface, lhs, rhs)


def rule_formula(rule: Rule) -> Formula:
    return rule_signature(rule).formula


def encode_rule(rule: Rule) -> Formula:
    """!all interface. lhs -o rhs: the rule as an unrestricted resource."""
    return OfCourse(rule_formula(rule))


def parallel_rule_formula(first: Rule, second: Rule, sequential: bool = True) -> Formula:
    """
    Both rules under one interface quantifier prefix. sequential gives
    (lhs1 -o rhs1) * (lhs2 -o rhs2), two independent applications; otherwise
    lhs1 * lhs2 -o rhs1 * rhs2, one simultaneous application.
    """
    a = rule_signature(first, "y")
    b = rule_signature(second, "y", start=_used(a) + 1)
    if sequential:
        body: Formula = Tensor(Lolli(a.lhs.formula, a.rhs.formula), Lolli(b.lhs.formula, b.rhs.formula))
    else:
        body = Lolli(Tensor(a.lhs.formula, b.lhs.formula), Tensor(a.rhs.formula, b.rhs.formula))
    return forall_all(a.binders + b.binders, body)


def _used(sig: RuleSignature) -> int:
    return len(sig.interface) + len(sig.lhs.nodes) + len(sig.rhs.nodes)

