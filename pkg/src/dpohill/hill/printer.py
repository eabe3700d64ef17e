"""Pretty printing in the concrete syntax accepted by hill.parser."""
from __future__ import annotations

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
)

_QUANT, _LOLLI, _TENSOR, _UNARY = 0, 1, 2, 3
_BINDER, _PAIR, _LINAPP, _APP, _BANG = 0, 1, 2, 3, 4


def _wrap(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def format_formula(f: Formula, prec: int = _QUANT) -> str:
    match f:
        case Atom(name):
            return name
        case One():
            return "one"
        case Pred(name, args, sorts):
            if sorts:
                inner = ", ".join(f"{format_term(a)}:{format_formula(s, _UNARY)}" for a, s in zip(args, sorts))
            else:
                inner = ", ".join(format_term(a) for a in args)
            return f"{name}({inner})"
        case Tensor(a, b):
            return _wrap(f"{format_formula(a, _UNARY)} * {format_formula(b, _TENSOR)}", prec > _TENSOR)
        case Lolli(a, b):
            return _wrap(f"{format_formula(a, _TENSOR)} -o {format_formula(b, _LOLLI)}", prec > _LOLLI)
        case OfCourse(body):
            return "!" + format_formula(body, _UNARY)
        case Located(body, name):
            return _wrap(f"loc {format_formula(body, _UNARY)} @ {format_term(name, _BANG)}", prec > _UNARY)
        case Forall() | Ex():
            kind = type(f)
            binders: list[tuple[str, Formula]] = []
            node: Formula = f
            while isinstance(node, kind):
                binders.append((node.var, node.sort))
                node = node.body
            groups: list[str] = []
            i = 0
            while i < len(binders):
                j = i
                while j + 1 < len(binders) and binders[j + 1][1] == binders[i][1]:
                    j += 1
                names = " ".join(v for v, _ in binders[i : j + 1])
                groups.append(f"{names}:{format_formula(binders[i][1], _UNARY)}")
                i = j + 1
            keyword = "all" if kind is Forall else "ex"
            return _wrap(f"{keyword} {' '.join(groups)}. {format_formula(node)}", prec > _QUANT)
    raise TypeError(f"not a formula: {f!r}")


def format_term(t: Term, prec: int = _BINDER) -> str:
    match t:
        case Var(name):
            return name
        case Nil():
            return "nil"
        case Copy(var):
            return f"copy({var})"
        case Bang(body):
            return "!" + format_term(body, _BANG)
        case App(fn, arg):
            return _wrap(f"{format_term(fn, _APP)} {format_term(arg, _BANG)}", prec > _APP)
        case LinApp(fn, arg):
            return _wrap(f"{format_term(fn, _LINAPP)} ^ {format_term(arg, _APP)}", prec > _LINAPP)
        case Pair(a, b):
            return _wrap(f"{format_term(a, _LINAPP)} * {format_term(b, _PAIR)}", prec > _PAIR)
        case Lam(var, body):
            return _wrap(f"lam {var}. {format_term(body)}", prec > _BINDER)
        case LinLam(var, body):
            return _wrap(f"llam {var}. {format_term(body)}", prec > _BINDER)
        case Discard(names, body):
            listed = "".join(f"{n} " for n in names)
            return _wrap(f"discard {listed}in {format_term(body)}", prec > _BINDER)
        case Let(pattern, bound, body):
            return _wrap(
                f"let {format_term(pattern)} = {format_term(bound)} in {format_term(body)}", prec > _BINDER
            )
        case Hide():
            groups: list[str] = []
            node: Term = t
            while isinstance(node, Hide):
                groups.append(f"({format_term(node.witness)}|{node.loc})")
                node = node.body
            return _wrap(f"eps{''.join(groups)}. {format_term(node)}", prec > _BINDER)
    raise TypeError(f"not a term: {t!r}")


def format_context(ctx: Context) -> str:
    if not ctx:
        return "."
    return ", ".join(f"{name} :: {format_formula(f)}" for name, f in ctx)


def format_sequent(s: Sequent) -> str:
    sigma = ", ".join(sorted(s.sigma))
    head = f"[{sigma}] ; {format_context(s.gamma)} ; {format_context(s.delta)} |- "
    if s.subject is None:
        return head + format_formula(s.goal)
    return head + f"{format_term(s.subject)} :: {format_formula(s.goal)}"
