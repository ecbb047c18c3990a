"""Quiver descriptions of D-modules on hyperplane arrangements, computed exactly over Q."""
from .arrangement import Arrangement, Hyperplane, adapted_frame, build_poset, normal_cone_arrangement
from .dmod import (build_sections_model, check_d_squared, check_weyl_relations, dual_complex, gr_model,
                   koszul_differential, theta_spectrum)
from .quiver import Rep, check_relations, dualize, extend_by_zero, find_isomorphism, hom_space
from .specialize import specialize_along_flag, specialize_rep
from .verma import build_verma, build_verma_at, enumerate_flags, irreducible_quotient
from .weights import Weights, in_category, is_nonresonant, lambda_of_arrow, lambda_of_stratum

__all__ = [
    "Arrangement", "Hyperplane", "adapted_frame", "build_poset", "normal_cone_arrangement",
    "build_sections_model", "check_d_squared", "check_weyl_relations", "dual_complex", "gr_model",
    "koszul_differential", "theta_spectrum",
    "Rep", "check_relations", "dualize", "extend_by_zero", "find_isomorphism", "hom_space",
    "specialize_along_flag", "specialize_rep",
    "build_verma", "build_verma_at", "enumerate_flags", "irreducible_quotient",
    "Weights", "in_category", "is_nonresonant", "lambda_of_arrow", "lambda_of_stratum",
]
