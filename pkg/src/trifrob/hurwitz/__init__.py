"""Closed-form and quadrature data for three-dimensional Hurwitz examples."""
from . import a3, appell, elliptic, prepotentials
from .registry import EXAMPLES, example

__all__ = ["a3", "appell", "elliptic", "prepotentials", "EXAMPLES", "example"]
