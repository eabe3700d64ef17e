from dpohill.core.config import Settings
from dpohill.core.errors import (
    EmissionError,
    GluingViolation,
    GraphError,
    HillError,
    LinearityViolation,
    NotNormalForm,
    ParseError,
    SeparationViolation,
    ShapeMismatch,
    TypeGraphMismatch,
)

__all__ = [
    "Settings",
    "HillError",
    "GraphError",
    "TypeGraphMismatch",
    "GluingViolation",
    "SeparationViolation",
    "ParseError",
    "ShapeMismatch",
    "LinearityViolation",
    "NotNormalForm",
    "EmissionError",
]
