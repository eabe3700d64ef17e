"""Proof trees: a rule tag, the concluded sequent, premise subtrees and rule-specific data."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from dpohill.hill.syntax import Sequent, Term


class RuleTag(str, Enum):
    LID = "LId"
    UID = "UId"
    EX_R = "ExR"
    EX_L = "ExL"
    ALL_R = "AllR"
    ALL_L = "AllL"
    LOLLI_R = "LolliR"
    LOLLI_L = "LolliL"
    TENSOR_R = "TensorR"
    TENSOR_L = "TensorL"
    ONE_R = "OneR"
    ONE_L = "OneL"
    BANG_R = "BangR"
    BANG_L = "BangL"
    WEAK = "Weak"
    CONTR = "Contr"
    CUT = "Cut"
    BANG_CUT = "BangCut"

    @property
    def arity(self) -> int:
        return _ARITY[self]


_ARITY = {
    RuleTag.LID: 0,
    RuleTag.UID: 0,
    RuleTag.ONE_R: 0,
    RuleTag.EX_R: 3,
    RuleTag.ALL_L: 2,
    RuleTag.LOLLI_L: 2,
    RuleTag.TENSOR_R: 2,
    RuleTag.CUT: 2,
    RuleTag.BANG_CUT: 2,
}
for _tag in RuleTag:
    _ARITY.setdefault(_tag, 1)

CUT_RULES = frozenset({RuleTag.CUT, RuleTag.BANG_CUT})


@dataclass(frozen=True)
class Instantiation:
    """
    principal: context variable the rule acts on (location n for ExR).
    fresh: names the rule introduces in its premises.
    split: delta names sent to the first premise (TensorR, LolliL, Cut).
    gamma1: gamma names typing the witness (ExR).
    witness: the non-linear term D (ExR, AllL, BangCut).
    discard: gamma names removed by Weak.
    """

    principal: str | None = None
    fresh: tuple[str, ...] = ()
    split: tuple[str, ...] | None = None
    gamma1: tuple[str, ...] | None = None
    witness: Term | None = None
    discard: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class ProofTree:
    """Identity-hashed so shared subtrees form a DAG."""

    rule: RuleTag
    conclusion: Sequent
    premises: tuple[ProofTree, ...] = ()
    inst: Instantiation = field(default_factory=Instantiation)

    def walk(self) -> Iterator[tuple[str, ProofTree]]:
        """Pre-order (path, node); paths are dotted premise indices, root is 'root'."""
        stack: list[tuple[str, ProofTree]] = [("root", self)]
        while stack:
            path, node = stack.pop()
            yield path, node
            for i in reversed(range(len(node.premises))):
                stack.append((f"{path}.{i}", node.premises[i]))

    def unique_nodes(self) -> list[ProofTree]:
        seen: set[int] = set()
        out: list[ProofTree] = []
        stack = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            out.append(node)
            stack.extend(node.premises)
        return out

    def with_conclusion(self, conclusion: Sequent) -> ProofTree:
        return ProofTree(self.rule, conclusion, self.premises, self.inst)


def size(tree: ProofTree) -> int:
    """Number of nodes of the tree with shared subtrees counted at every use."""
    memo: dict[int, int] = {}

    def count(node: ProofTree) -> int:
        key = id(node)
        if key not in memo:
            memo[key] = 1 + sum(count(p) for p in node.premises)
        return memo[key]

    return count(tree)


def height(tree: ProofTree) -> int:
    memo: dict[int, int] = {}

    def measure(node: ProofTree) -> int:
        key = id(node)
        if key not in memo:
            memo[key] = 1 + max((measure(p) for p in node.premises), default=0)
        return memo[key]

    return measure(tree)


def rules_used(tree: ProofTree) -> Counter[str]:
    return Counter(node.rule.value for _, node in tree.walk())


def is_cut_free(tree: ProofTree) -> bool:
    return all(node.rule not in CUT_RULES for node in tree.unique_nodes())
