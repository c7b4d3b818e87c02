"""Adaptive Gauss-Kronrod quadrature along complex polylines."""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import NoConvergence, NonFinite
from .paths import CPath

# 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule, on [-1, 1]
_XK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])          # ascending, 15 nodes
_WEIGHTS_K = np.concatenate([_WK[:-1], _WK[::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[1:15:2] = np.concatenate([_WG[:-1], _WG[::-1]])


class _Budget:
    def __init__(self, n):
        self.left = n


def _gk(f, za, d, a, b, tracker):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = np.empty(15, dtype=complex)
    for k, x in enumerate(_NODES):
        if tracker is not None:
            tracker.begin()
        vals[k] = f(za + (mid + half * x) * d)
    if not np.all(np.isfinite(vals)):
        raise NonFinite("non-finite integrand value")
    k15 = half * d * (_WEIGHTS_K @ vals)
    g7 = half * d * (_WEIGHTS_G @ vals)
    return k15, abs(k15 - g7)


def _adapt(f, za, d, a, b, tol, tracker, budget, depth):
    snap = tracker.snapshot() if tracker is not None else None
    budget.left -= 15
    if budget.left < 0:
        raise NoConvergence("quadrature refinement budget exhausted")
    val, err = _gk(f, za, d, a, b, tracker)
    if err <= tol or depth >= 60:
        if depth >= 60 and err > tol:
            raise NoConvergence("quadrature interval depth limit")
        return val, err
    if tracker is not None:
        tracker.restore(snap)
    m = 0.5 * (a + b)
    v1, e1 = _adapt(f, za, d, a, m, 0.5 * tol, tracker, budget, depth + 1)
    v2, e2 = _adapt(f, za, d, m, b, 0.5 * tol, tracker, budget, depth + 1)
    return v1 + v2, e1 + e2


def contour_quadrature(f: Callable[[complex], complex], path: CPath, tol: float = 1e-12,
                       tracker=None, max_evals: int = 400_000, pieces: int = 4) -> complex:
    """Integral of ``f(z) dz`` along ``path`` with estimated absolute error <= tol.

    When ``tracker`` (a :class:`BranchTracker`) is supplied, nodes are
    visited in path order and the tracker is rewound whenever an interval is
    refined, so ``f`` may use it to continue multivalued factors.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    L = path.length
    budget = _Budget(max_evals)
    total = 0j
    for za, zb in path.segments():
        d = zb - za
        seg_tol = tol * abs(d) / L
        for j in range(pieces):
            a, b = j / pieces, (j + 1) / pieces
            v, _ = _adapt(f, za, d, a, b, seg_tol / pieces, tracker, budget, 0)
            total += v
    return total
