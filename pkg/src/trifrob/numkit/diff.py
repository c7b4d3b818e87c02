"""Central finite differences for complex-valued (array) functions."""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import NonFinite


def default_step(z: complex) -> float:
    return 1e-6 * max(1.0, abs(z))


def _finite(v):
    v = np.asarray(v, dtype=complex)
    if not np.all(np.isfinite(v)):
        raise NonFinite("non-finite sample in finite difference")
    return v


def central_diff(f: Callable, z: complex, h: float | None = None, direction: complex = 1.0):
    """(f(z+h) - f(z-h)) / (2h) along ``direction`` (unit complex number)."""
    if h is None:
        h = default_step(z)
    if h <= 0:
        raise ValueError("h must be positive")
    e = h * direction
    return (_finite(f(z + e)) - _finite(f(z - e))) / (2 * e)


def central_diff4(f: Callable, z: complex, h: float | None = None, direction: complex = 1.0):
    """Fourth-order first derivative from the 4-point stencil z±h, z±2h."""
    if h is None:
        h = default_step(z)
    if h <= 0:
        raise ValueError("h must be positive")
    e = h * direction
    fm2, fm1, fp1, fp2 = (_finite(f(z + k * e)) for k in (-2, -1, 1, 2))
    return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * e)


def second_diff4(f: Callable, z: complex, h: float, direction: complex = 1.0):
    """Fourth-order second derivative from the 5-point stencil."""
    e = h * direction
    fm2, fm1, f0, fp1, fp2 = (_finite(f(z + k * e)) for k in (-2, -1, 0, 1, 2))
    return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * e * e)


def partial(f: Callable, x, i: int, h: float, order: int = 4):
    """Partial derivative of ``f(x)`` in coordinate ``i`` by central differences."""
    x = np.asarray(x, dtype=complex)

    def g(zi):
        y = x.copy()
        y[i] = zi
        return f(y)

    if order == 2:
        return central_diff(g, x[i], h)
    return central_diff4(g, x[i], h)
