"""Numerical plumbing: paths, ODE flows, differences, quadrature, roots, branches."""
from .branch import PRINCIPAL, BranchTracker, principal_power
from .diff import central_diff, central_diff4, default_step, partial, second_diff4
from .ode import ode_flow
from .paths import CPath, as_cmatrix, ellipse_loop
from .quad import contour_quadrature
from .roots import monic_from_roots, quartic_roots

__all__ = [
    "BranchTracker", "PRINCIPAL", "principal_power",
    "CPath", "as_cmatrix", "ellipse_loop",
    "ode_flow", "central_diff", "central_diff4", "second_diff4", "partial", "default_step",
    "contour_quadrature", "quartic_roots", "monic_from_roots",
]
