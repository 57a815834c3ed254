"""Exact computation of the omega invariant of numerical semigroups."""

from .oes import OmegaOptions, OmegaResult, omega, omega_j
from .semigroup import (
    FactorizationVector,
    NumericalSemigroup,
    apery,
    contains,
    evaluate,
    frobenius,
    genus,
    multiplicity,
    new_semigroup,
)

__all__ = [
    "FactorizationVector", "NumericalSemigroup", "OmegaOptions", "OmegaResult",
    "apery", "contains", "evaluate", "frobenius", "genus", "multiplicity",
    "new_semigroup", "omega", "omega_j",
]
