"""Prepotentials and the Frobenius-manifold checks built on their third derivatives."""
from .geometry import (FrobeniusPoint, PencilResiduals, TriHamiltonian, check_flat_pencil,
                       check_quasihomogeneity, check_trihamiltonian, check_unit, check_wdvv,
                       check_wwdvv, christoffel_identity_residuals, christoffel_intersection,
                       christoffel_third, curvature_contravariant, evaluate_point,
                       pencil_shift_residual, third_metric_curvature, wdvv_residual_tensor)
from .prepotential import Monomial, Poly, Prepotential, RadicalTerm, antidiagonal, trivial_cubic

__all__ = [
    "Prepotential", "Monomial", "RadicalTerm", "Poly", "antidiagonal", "trivial_cubic",
    "FrobeniusPoint", "evaluate_point", "check_wdvv", "check_unit", "check_quasihomogeneity",
    "check_trihamiltonian", "TriHamiltonian", "christoffel_third", "christoffel_intersection",
    "curvature_contravariant", "christoffel_identity_residuals", "check_flat_pencil",
    "PencilResiduals", "pencil_shift_residual", "check_wwdvv", "third_metric_curvature",
    "wdvv_residual_tensor",
]
