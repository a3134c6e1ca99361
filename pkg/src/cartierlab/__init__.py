"""Cartier modules over polynomial rings in positive characteristic."""

from .cartier import (
    CartierModule,
    CartierMorphism,
    CartierSubmodule,
    cartier_direct_sum,
    cartier_quotient,
    element_locally_nilpotent,
    elementwise_order,
    image_chain,
    is_nilpotent,
    is_zero_in_crys,
    kappa_apply,
    kappa_image,
    nil_isomorphism,
    nilpotent_filtration,
    nilpotent_part,
    stable_closure,
)
from .geom import (
    CartierComplex,
    crystalline_support,
    dualizing_cartier,
    pointwise_nilpotence,
    pushforward_contract,
    restrict_basic_open,
    shriek_regular_sequence,
    stalk_closed_point,
    verify_kashiwara,
)
from .semialg import FieldSpec, ModulePresentation, Polynomial, PolynomialRing, Submodule

__version__ = "0.1.0"

__all__ = [
    "CartierComplex", "CartierModule", "CartierMorphism", "CartierSubmodule", "FieldSpec",
    "ModulePresentation", "Polynomial", "PolynomialRing", "Submodule", "cartier_direct_sum",
    "cartier_quotient", "crystalline_support", "dualizing_cartier", "element_locally_nilpotent",
    "elementwise_order", "image_chain", "is_nilpotent", "is_zero_in_crys", "kappa_apply", "kappa_image",
    "nil_isomorphism", "nilpotent_filtration", "nilpotent_part", "pointwise_nilpotence",
    "pushforward_contract", "restrict_basic_open", "shriek_regular_sequence", "stable_closure",
    "stalk_closed_point", "verify_kashiwara",
]
