from dpohill.hill.ops import (
    NormalForm,
    all_names,
    alpha_eq,
    canonical,
    desugar_let,
    free_nominal_vars,
    free_vars,
    fresh_name,
    infer_sigma,
    is_graph_formula,
    normal_form,
    occurrences,
    pattern_binders,
    rename,
    separation_violations,
    substitute,
)
from dpohill.hill.parser import HillDocument, parse_formula, parse_hill, parse_sequent, parse_term
from dpohill.hill.printer import format_context, format_formula, format_sequent, format_term
from dpohill.hill.syntax import (
    App,
    Atom,
    Bang,
    Context,
    Copy,
    Discard,
    Entry,
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
    equiv,
    ex_all,
    forall_all,
    is_atomic,
    is_nonlinear_term,
    pair_all,
    tensor_all,
    tensor_factors,
)

__all__ = [
    "Term",
    "Formula",
    "Var",
    "Nil",
    "Pair",
    "Hide",
    "Lam",
    "LinLam",
    "LinApp",
    "App",
    "Bang",
    "Discard",
    "Copy",
    "Let",
    "Atom",
    "Pred",
    "One",
    "Tensor",
    "Lolli",
    "OfCourse",
    "Forall",
    "Ex",
    "Located",
    "Sequent",
    "Context",
    "Entry",
    "equiv",
    "ex_all",
    "forall_all",
    "tensor_all",
    "pair_all",
    "tensor_factors",
    "is_atomic",
    "is_nonlinear_term",
    "free_vars",
    "all_names",
    "fresh_name",
    "occurrences",
    "pattern_binders",
    "substitute",
    "rename",
    "alpha_eq",
    "canonical",
    "free_nominal_vars",
    "separation_violations",
    "infer_sigma",
    "desugar_let",
    "is_graph_formula",
    "normal_form",
    "NormalForm",
    "parse_formula",
    "parse_term",
    "parse_sequent",
    "parse_hill",
    "HillDocument",
    "format_formula",
    "format_term",
    "format_context",
    "format_sequent",
]
