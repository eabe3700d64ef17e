"""Error hierarchy: every failure carries a short code and a human-readable message."""
from __future__ import annotations

from typing import Any


class HillError(Exception):
    """Base error: code names the violated condition, message explains it."""

    code = "ERROR"

    def __init__(self, message: str, *, code: str | None = None) -> None:
        self.code = code or type(self).code
        self.message = message
        super().__init__(f"[{self.code}] {message}")


class GraphError(HillError):
    """Ill-formed graph, type graph or morphism."""

    code = "GRAPH"


class TypeGraphMismatch(GraphError):
    code = "TYPE_GRAPH_MISMATCH"


class GluingViolation(HillError):
    """Pushout complement does not exist: identification and/or dangling condition fails."""

    code = "GLUING"

    def __init__(self, condition: str, witnesses: list[tuple[Any, ...]]) -> None:
        self.condition = condition
        self.witnesses = list(witnesses)
        shown = "; ".join(_describe(w) for w in self.witnesses)
        super().__init__(f"{condition} condition violated at {shown}")


def _describe(witness: tuple[Any, ...]) -> str:
    return ", ".join(str(part) for part in witness)


class SeparationViolation(HillError):
    """Two distinct locations name terms sharing a free variable."""

    code = "SEPARATION"

    def __init__(self, first: str, second: str, shared: set[str]) -> None:
        self.first = first
        self.second = second
        self.shared = frozenset(shared)
        names = ", ".join(sorted(shared))
        super().__init__(f"locations {first} and {second} share nominal variables {{{names}}}")


class ParseError(HillError):
    """Syntax error with 1-based line and column."""

    code = "SYNTAX"

    def __init__(self, message: str, line: int, column: int) -> None:
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


class ShapeMismatch(HillError):
    """Let-pattern and bound term have incompatible shapes."""

    code = "SHAPE"


class LinearityViolation(HillError):
    """A substitution would duplicate or drop a linear variable."""

    code = "LINEARITY"


class NotNormalForm(HillError):
    """Formula is not a closed normal graph formula."""

    code = "NOT_NORMAL"


class EmissionError(HillError):
    """A step certificate could not be assembled."""

    code = "EMISSION"
