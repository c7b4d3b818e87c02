"""Tri-hamiltonian Frobenius manifolds from three-dimensional Painleve VI data."""

__version__ = "0.1.0"
