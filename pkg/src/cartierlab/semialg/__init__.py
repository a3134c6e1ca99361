"""Finite fields, sparse polynomials, Groebner bases and module presentations."""

from .field import FieldElement, FieldSpec, default_modulus, field_arithmetic, is_irreducible
from .groebner import groebner_basis, is_groebner, normal_form, syzygies
from .linalg import nullspace, rank, rref
from .modules import (
    Containment,
    ModuleMap,
    ModulePresentation,
    Submodule,
    annihilator,
    direct_sum,
    ideal_basis,
    ideal_contains,
    ideal_quotient,
    map_kernel_cokernel,
    same_support,
    support_contained,
)
from .poly import DigitDecomposition, Polynomial, PolynomialRing, PolynomialSyntaxError, digit_decompose

__all__ = [
    "Containment", "DigitDecomposition", "FieldElement", "FieldSpec", "ModuleMap", "ModulePresentation",
    "Polynomial", "PolynomialRing", "PolynomialSyntaxError", "Submodule", "annihilator", "default_modulus",
    "digit_decompose", "direct_sum", "field_arithmetic", "groebner_basis", "ideal_basis", "ideal_contains",
    "ideal_quotient", "is_groebner", "is_irreducible", "map_kernel_cokernel", "normal_form", "nullspace",
    "rank", "rref", "same_support", "support_contained", "syzygies",
]
