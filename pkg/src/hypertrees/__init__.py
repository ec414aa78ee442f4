"""Hypertree divisors on moduli of pointed rational curves."""

from .constructions import BicoloredTriangulation, black_white_hypertrees, fibonacci_extend, octahedron
from .core import (
    Hypertree,
    SubsetCollection,
    capacity,
    contract,
    is_generic,
    restrict,
    stable_model,
    validate,
    valences,
    wheels,
)
from .divisor import KapranovClass, class_coefficients, hypertree_equation, same_divisor
from .enumerate import canonical_form, enumerate_irreducible, is_isomorphic
from .realize import realize, verify_realization

__all__ = [
    "BicoloredTriangulation",
    "Hypertree",
    "KapranovClass",
    "SubsetCollection",
    "black_white_hypertrees",
    "canonical_form",
    "capacity",
    "class_coefficients",
    "contract",
    "enumerate_irreducible",
    "fibonacci_extend",
    "hypertree_equation",
    "is_generic",
    "is_isomorphic",
    "octahedron",
    "realize",
    "restrict",
    "same_divisor",
    "stable_model",
    "validate",
    "valences",
    "verify_realization",
    "wheels",
]
