"""Adaptive Dormand-Prince 5(4) integration along complex polylines."""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import NonFinite, StepUnderflow
from .paths import CPath

# Dormand-Prince 5(4) tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def _segment(rhs, za, zb, y, tol, h, min_step, max_steps, record):
    d = zb - za
    shape = y.shape

    def f(tau, yy):
        return d * np.asarray(rhs(za + tau * d, yy.reshape(shape)), dtype=complex).ravel()

    y = y.ravel().astype(complex)
    tau = 0.0
    k1 = f(0.0, y)
    steps = 0
    while tau < 1.0:
        h = min(h, 1.0 - tau)
        if h * abs(d) < min_step:
            raise StepUnderflow(f"step {h * abs(d):.3e} below limit near z = {za + tau * d}")
        ks = [k1]
        for i in range(1, 7):
            yi = y + h * sum(a * k for a, k in zip(_A[i], ks) if a != 0)
            ks.append(f(tau + _C[i] * h, yi))
        K = np.array(ks)
        y5 = y + h * (_B5 @ K)
        if not np.all(np.isfinite(y5)):
            raise NonFinite(f"state became non-finite near z = {za + tau * d}")
        err = h * (_E @ K)
        scale = tol * (1.0 + np.maximum(np.abs(y), np.abs(y5)))
        ratio = float(np.max(np.abs(err) / scale)) if err.size else 0.0
        if ratio <= 1.0:
            tau += h
            y = y5
            k1 = K[6]
            if record is not None:
                record.append((za + tau * d, y.reshape(shape).copy()))
        fac = 5.0 if ratio == 0 else min(5.0, max(0.2, 0.9 * ratio ** -0.2))
        h *= fac
        steps += 1
        if steps > max_steps:
            raise StepUnderflow("step budget exhausted")
    return y.reshape(shape), h


def ode_flow(rhs: Callable, path: CPath, y0, tol: float = 1e-10,
             h0: float | None = None, max_steps: int = 200_000, record: list | None = None):
    """Continue the solution of ``dy/dz = rhs(z, y)`` along ``path``.

    ``y0`` may be a scalar, vector or matrix; the result has the same shape.
    Each accepted step has estimated local error at most ``tol`` relative to
    ``1 + |y|`` componentwise.  If ``record`` is a list, (z, y) pairs at the
    accepted steps are appended to it.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    y = np.array(y0, dtype=complex)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    if not np.all(np.isfinite(y)):
        raise NonFinite("initial state is not finite")
    L = path.length
    min_step = 1e-13 * L
    if record is not None:
        record.append((path.start, y.copy()))
    for za, zb in path.segments():
        h = 0.05 if h0 is None else h0 / abs(zb - za)
        y, _ = _segment(rhs, za, zb, y, tol, h, min_step, max_steps, record)
    return y[0] if scalar else y
