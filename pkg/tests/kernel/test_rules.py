from __future__ import annotations

import pytest

from dpohill.hill import Atom, Located, Lolli, Nil, One, Var, alpha_eq, parse_formula, parse_term
from dpohill.kernel import RuleTag, check, height, identity_proof, is_cut_free, rules_used, size
from dpohill.kernel.rules import bang_cut, cut, lid, lolli_l, lolli_r, one_l, one_r, tensor_l, tensor_r, uid

P = Atom("p")
Q = Atom("q")


def test_constructors_compute_conclusions() -> None:
    left = lid((), "u", P)
    right = lid((), "v", Q)
    pair = tensor_r(left, right)
    assert pair.rule is RuleTag.TENSOR_R
    assert pair.conclusion.delta == (("u", P), ("v", Q))
    assert pair.inst.split == ("u",)
    assert alpha_eq(pair.conclusion.goal, parse_formula("p * q"))
    assert alpha_eq(pair.conclusion.subject, parse_term("u * v"))  # type: ignore[arg-type]

    unpacked = tensor_l(pair, "w", "u", "v")
    assert unpacked.conclusion.delta == (("w", parse_formula("p * q")),)
    assert alpha_eq(unpacked.conclusion.subject, parse_term("let u * v = w in u * v"))  # type: ignore[arg-type]
    assert check(unpacked).ok


def test_implication_rules() -> None:
    arg = lid((), "a", P)
    rest = lid((), "b", Q)
    applied = lolli_l(arg, rest, "f", "b")
    assert applied.conclusion.delta == (("a", P), ("f", Lolli(P, Q)))
    assert check(applied).ok

    abstraction = lolli_r(lolli_r(applied, "a"), "f")
    assert alpha_eq(abstraction.conclusion.goal, parse_formula("(p -o q) -o p -o q"))
    assert not abstraction.conclusion.delta
    report = check(abstraction)
    assert report.ok, report.failures
    assert report.nodes == 5


def test_unit_rules() -> None:
    unit = one_r(())
    assert unit.conclusion.subject == Nil()
    assert check(unit).ok
    dropped = one_l(lid((), "u", P), "w")
    assert dropped.conclusion.delta[-1] == ("w", One())
    assert check(dropped).ok


@pytest.mark.parametrize(
    "formula",
    [
        "p",
        "p * q",
        "p -o q",
        "one",
        "!p",
        "(p -o q) -o r",
        "ex x:a. E(x)",
        "all x:a. E(x)",
        "ex x y:a. F(x, y) * E(x)",
        "all x:a. (ex y:a. F(x, y)) -o E(x)",
        "!(p -o q)",
    ],
)
def test_identity_proofs_check(formula: str) -> None:
    f = parse_formula(formula)
    tree = identity_proof((), "u", f)
    assert tree is not None
    report = check(tree)
    assert report.ok, [str(x) for x in report.failures]
    assert tree.conclusion.delta == (("u", f),)
    assert alpha_eq(tree.conclusion.goal, f)
    assert is_cut_free(tree)


def test_identity_refuses_location_types() -> None:
    assert identity_proof((), "u", Located(P, Var("x"))) is None


def test_cut_and_bang_cut() -> None:
    f = parse_formula("p * q")
    left = identity_proof((), "u", f)
    right = identity_proof((), "w", f)
    assert left is not None and right is not None
    composed = cut(left, right, "w")
    assert composed.rule is RuleTag.CUT
    assert composed.conclusion.delta == (("u", f),)
    assert check(composed).ok
    assert not is_cut_free(composed)

    gamma = (("c", Atom("a")),)
    shared = bang_cut(uid(gamma, "c"), uid(gamma + (("x", Atom("a")),), "x"), "x")
    assert shared.conclusion.gamma == gamma
    assert alpha_eq(shared.conclusion.subject, parse_term("let x = c in x"))  # type: ignore[arg-type]
    assert check(shared).ok


def test_tree_measures_count_shared_subtrees() -> None:
    leaf = lid((), "u", P)
    tree = tensor_r(leaf, lid((), "v", Q))
    assert size(tree) == 3
    assert height(tree) == 2
    assert rules_used(tree) == {"TensorR": 1, "LId": 2}
