from __future__ import annotations

import pytest

from dpohill.core.errors import HillError, LinearityViolation, SeparationViolation, ShapeMismatch
from dpohill.hill import (
    Atom,
    Ex,
    Let,
    Located,
    One,
    Pair,
    Tensor,
    Var,
    alpha_eq,
    desugar_let,
    equiv,
    free_nominal_vars,
    free_vars,
    infer_sigma,
    is_graph_formula,
    normal_form,
    parse_formula,
    parse_term,
    separation_violations,
    substitute,
)


def test_free_vars_respect_binders() -> None:
    assert free_vars(parse_formula("all x:T. E(x, y)")) == {"y"}
    assert free_vars(parse_formula("ex x:T. loc T @ x * F(z)")) == {"z"}
    assert free_vars(parse_term("lam x. x y")) == {"y"}
    assert free_vars(parse_term("let u * v = w in u ^ v ^ k")) == {"w", "k"}
    assert free_vars(parse_term("eps(x|n). u")) == {"x", "n", "u"}


def test_substitution_avoids_capture() -> None:
    f = parse_formula("all y:T. E(x, y)")
    out = substitute(f, {"x": Var("y")})
    assert free_vars(out) == {"y"}
    assert alpha_eq(out, parse_formula("all z:T. E(y, z)"))
    t = substitute(parse_term("lam y. x y"), {"x": Var("y")})
    assert alpha_eq(t, parse_term("lam z. y z"))


def test_substitution_renames_let_binders() -> None:
    t = substitute(parse_term("let u = w in u ^ x"), {"x": Var("u")})
    assert isinstance(t, Let)
    assert free_vars(t) == {"w", "u"}
    assert alpha_eq(t, parse_term("let q = w in q ^ u"))


def test_linear_substitution_may_not_duplicate() -> None:
    term = parse_term("x * x")
    with pytest.raises(LinearityViolation):
        substitute(term, {"x": Var("u")}, linear=["u"])
    assert substitute(parse_term("x * y"), {"x": Var("u")}, linear=["u"]) == Pair(Var("u"), Var("y"))


def test_location_names_only_take_variables() -> None:
    with pytest.raises(HillError):
        substitute(parse_term("eps(x|n). nil"), {"n": parse_term("a * b")})


def test_alpha_equivalence() -> None:
    assert alpha_eq(parse_formula("ex x:T. E(x)"), parse_formula("ex y:T. E(y)"))
    assert not alpha_eq(parse_formula("ex x:T. E(x)"), parse_formula("ex y:T. E(z)"))
    assert not alpha_eq(parse_formula("ex x y:T. E(x, y)"), parse_formula("ex x y:T. E(y, x)"))


def test_nominal_variables_and_separation() -> None:
    delta = (("n", Located(Atom("T"), Var("x"))), ("m", Located(Atom("T"), parse_term("!(f x)"))))
    assert free_nominal_vars(delta) == {"x", "f"}
    problems = separation_violations(delta)
    assert problems == [("n", "m", frozenset({"x"}))]
    with pytest.raises(SeparationViolation) as info:
        infer_sigma(delta)
    assert info.value.shared == {"x"}
    fine = (("n", Located(Atom("T"), Var("x"))), ("m", Located(Atom("T"), Var("y"))))
    assert infer_sigma(fine) == {"x", "y"}


def test_desugar_let() -> None:
    assert desugar_let(Var("u"), parse_term("a * b"), parse_term("u ^ c")) == parse_term("(a * b) ^ c")
    assert desugar_let(parse_term("u * v"), parse_term("a * b"), parse_term("v ^ u")) == parse_term("b ^ a")
    assert desugar_let(parse_term("eps(z|n). v"), parse_term("eps(x|m). w"), parse_term("f z n v")) == parse_term(
        "f x m w"
    )
    neutral = desugar_let(parse_term("u * v"), Var("w"), Var("u"))
    assert isinstance(neutral, Let)
    with pytest.raises(ShapeMismatch):
        desugar_let(parse_term("u * v"), parse_term("lam x. x"), Var("u"))


def test_normal_form_and_graph_formulas() -> None:
    nf = normal_form(parse_formula("ex x:a y:b. E(x, y) * F(y)"))
    assert nf is not None
    assert nf.prefix == (("x", "a"), ("y", "b"))
    assert [p.name for p in nf.factors] == ["E", "F"]
    assert nf.closed
    assert not normal_form(parse_formula("ex x:a. E(x, z)")).closed
    assert normal_form(parse_formula("ex x:a. one")) is not None
    assert normal_form(parse_formula("ex x:a. E(x) -o F(x)")) is None
    assert normal_form(parse_formula("ex x:a x:a. one")) is None
    assert is_graph_formula(parse_formula("all w:a. ex x:a. loc a @ x * E(w, x)"), ["a"])
    assert not is_graph_formula(parse_formula("ex x:b. one"), ["a"])
    assert not is_graph_formula(parse_formula("!a"))


def test_equiv() -> None:
    a, b = Atom("a"), One()
    assert equiv(a, b) == parse_formula("(a -o one) * (one -o a)")
    assert isinstance(equiv(a, b), Tensor)
    assert Ex("x", a, One()) == parse_formula("ex x:a. one")
