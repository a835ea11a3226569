"""Exact arithmetic for quaternion skew-hermitian forms over valued fields,
their Morita reduction to quadratic forms over conic function fields, and
Witt-ring residue checks."""

from .fields import ConicExtension, FieldElement, FiniteField, FunctionField, Rationals

__all__ = [
    "Rationals",
    "FiniteField",
    "FunctionField",
    "ConicExtension",
    "FieldElement",
]

__version__ = "0.1.0"
