"""Darboux-Egoroff data in canonical coordinates.

The reduced three-dimensional system is carried by (s, a, b, c) with

    da/ds = bc/s,   db/ds = ac/(1-s),   dc/ds = ab/(s(s-1)),

and a^2 + b^2 + c^2 = -mu^2 is conserved.  The skew matrices V (3x3) and the
lifted W (4x4) are built from (a, b, c); side matrices V_i give the Lax form
d_i V = [V_i, V] and the linear system d_i Psi = V_i Psi.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .errors import CoincidentCoordinates, NonFinite, PoleAtS, SingularFrame, ZeroMetricCoefficient
from .numkit import CPath, central_diff4, ode_flow

MIN_SEPARATION = 1e-6


@dataclass(frozen=True)
class DEState:
    s: complex
    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("s", "a", "b", "c"):
            v = complex(getattr(self, name))
            if not cmath.isfinite(v):
                raise NonFinite(f"{name} is not finite")
            object.__setattr__(self, name, v)
        if self.s in (0, 1):
            raise PoleAtS(f"s = {self.s} is a pole of the reduced system")

    @property
    def casimir(self) -> complex:
        return self.a ** 2 + self.b ** 2 + self.c ** 2

    @property
    def mu_squared(self) -> complex:
        return -self.casimir

    @property
    def abc(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])

    def to_json(self) -> dict:
        from .schema import complex_to_json
        return {k: complex_to_json(getattr(self, k)) for k in ("s", "a", "b", "c")}


def de_rhs(state: DEState) -> np.ndarray:
    """(da/ds, db/ds, dc/ds)."""
    s, a, b, c = state.s, state.a, state.b, state.c
    if s == 0 or s == 1:
        raise PoleAtS(f"s = {s}")
    return np.array([b * c / s, a * c / (1 - s), a * b / (s * (s - 1))])


def _abc_rhs(s, y):
    a, b, c = y
    return np.array([b * c / s, a * c / (1 - s), a * b / (s * (s - 1))])


def _check_path_avoids_poles(path: CPath, poles=(0.0, 1.0), margin=1e-12):
    for za, zb in path.segments():
        d = zb - za
        for p in poles:
            tau = min(1.0, max(0.0, ((p - za) * d.conjugate()).real / abs(d) ** 2))
            if abs(za + tau * d - p) < margin:
                raise PoleAtS(f"path passes through the pole s = {p}")


def de_flow(state0: DEState, path: CPath, tol: float = 1e-10) -> DEState:
    """Continue (a, b, c) along an s-path starting at ``state0.s``."""
    if abs(path.start - state0.s) > 1e-12 * max(1.0, abs(state0.s)):
        raise ValueError("path must start at the state's s")
    _check_path_avoids_poles(path)
    y = ode_flow(_abc_rhs, path, state0.abc, tol)
    return DEState(path.end, *y)


def v_from_state(state: DEState) -> np.ndarray:
    a, b, c = state.a, state.b, state.c
    return np.array([[0, -c, b], [c, 0, -a], [-b, a, 0]], dtype=complex)


def lift_to_w(state: DEState, sign: int = 1) -> np.ndarray:
    """The 4x4 skew lift; ``sign=-1`` negates the last row and column."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a, b, c = state.a, state.b, state.c
    W = np.array([[0, -c, b, -a], [c, 0, -a, -b], [-b, a, 0, -c], [a, b, c, 0]], dtype=complex)
    if sign < 0:
        W[3, :] *= -1
        W[:, 3] *= -1
    return W


def abc_from_v(V: np.ndarray) -> tuple:
    """Inverse of :func:`v_from_state` on the 3x3 block."""
    return V[2, 1], V[0, 2], V[1, 0]


@dataclass(frozen=True)
class CanonicalChart:
    """Pairwise distinct canonical coordinates."""

    coords: tuple

    def __init__(self, coords: Sequence[complex]):
        u = tuple(complex(x) for x in coords)
        if not all(cmath.isfinite(x) for x in u):
            raise NonFinite("chart coordinates must be finite")
        for i in range(len(u)):
            for j in range(i + 1, len(u)):
                if abs(u[i] - u[j]) < MIN_SEPARATION:
                    raise CoincidentCoordinates(f"u_{i + 1} and u_{j + 1} coincide")
        object.__setattr__(self, "coords", u)

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)

    @property
    def U(self) -> np.ndarray:
        return np.diag(self.coords)


def _chart(chart) -> CanonicalChart:
    return chart if isinstance(chart, CanonicalChart) else CanonicalChart(chart)


def side_matrices(V: np.ndarray, chart) -> list:
    """(V_i)_{jk} = (delta_ij - delta_ik) V_jk / (u_j - u_k)."""
    u = _chart(chart).array
    n = len(u)
    V = np.asarray(V, dtype=complex)
    diff = u[:, None] - u[None, :]
    np.fill_diagonal(diff, 1.0)
    Q = V / diff
    np.fill_diagonal(Q, 0.0)
    out = []
    for i in range(n):
        Vi = np.zeros((n, n), dtype=complex)
        Vi[i, :] = Q[i, :]
        Vi[:, i] = -Q[:, i]
        Vi[i, i] = 0.0
        out.append(Vi)
    return out


def euler_combination(V: np.ndarray, chart, power: int) -> np.ndarray:
    """sum_i u_i**power V_i."""
    u = _chart(chart).array
    return sum(ui ** power * Vi for ui, Vi in zip(u, side_matrices(V, chart)))


def lax_identity_residual(V: np.ndarray, chart) -> float:
    """|[U, V^2] - sum_i u_i^2 [V_i, V]|."""
    U = _chart(chart).U
    lhs = U @ V @ V - V @ V @ U
    rhs = sum(ui ** 2 * (Vi @ V - V @ Vi) for ui, Vi in zip(_chart(chart).array, side_matrices(V, chart)))
    return float(np.max(np.abs(lhs - rhs)))


def rotation_coefficients(eta_fn: Callable, chart, h: float = 1e-4) -> np.ndarray:
    """gamma_ij = (1/sqrt(eta_i)) d_i sqrt(eta_j) by 4-point central differences.

    Square roots on the stencil are continued from the values at the centre.
    """
    u = _chart(chart).array
    n = len(u)
    e0 = np.asarray(eta_fn(u), dtype=complex)
    if np.any(np.abs(e0) == 0):
        raise ZeroMetricCoefficient("a metric coefficient vanishes at the chart")
    r0 = np.sqrt(e0)

    def root(v):
        e = np.asarray(eta_fn(v), dtype=complex)
        if np.any(e == 0):
            raise ZeroMetricCoefficient("a metric coefficient vanishes on the stencil")
        r = np.sqrt(e)
        return np.where(np.abs(r - r0) <= np.abs(r + r0), r, -r)

    G = np.zeros((n, n), dtype=complex)
    for i in range(n):
        def along(z, i=i):
            v = u.copy()
            v[i] = z
            return root(v)
        d = central_diff4(along, u[i], h)
        G[i, :] = d / r0[i]
        G[i, i] = 0.0
    return G


def v_from_gamma(G: np.ndarray, chart) -> np.ndarray:
    U = _chart(chart).U
    return G @ U - U @ G


def align_signs(A: np.ndarray, B: np.ndarray) -> tuple:
    """Diagonal D of +-1 (D[0] = 1) minimizing |D A D - B|; returns (D, residual).

    Rotation coefficients are defined only up to the sign of each sqrt(eta_i),
    which acts on V by exactly this conjugation.
    """
    n = A.shape[0]
    best = (None, np.inf)
    for signs in product((1, -1), repeat=n - 1):
        d = np.array((1,) + signs, dtype=float)
        r = float(np.max(np.abs(d[:, None] * A * d[None, :] - B)))
        if r < best[1]:
            best = (np.diag(d), r)
    return best


def frame_flow(state0: DEState, frame0: np.ndarray, path: CPath, tol: float = 1e-11):
    """Transport (a, b, c) together with a frame Phi solving dPhi/ds = V_3 Phi at chart (0, 1, s)."""
    if abs(path.start - state0.s) > 1e-12 * max(1.0, abs(state0.s)):
        raise ValueError("path must start at the state's s")
    _check_path_avoids_poles(path)
    frame0 = np.asarray(frame0, dtype=complex)
    if abs(np.linalg.det(frame0)) < 1e-14:
        raise SingularFrame("initial frame is singular")

    def rhs(s, y):
        a, b, c = y[:3]
        Phi = y[3:].reshape(3, 3)
        V = np.array([[0, -c, b], [c, 0, -a], [-b, a, 0]])
        V3 = side_matrices(V, (0.0, 1.0, s))[2]
        return np.concatenate([_abc_rhs(s, y[:3]), (V3 @ Phi).ravel()])

    y = ode_flow(rhs, path, np.concatenate([state0.abc, frame0.ravel()]), tol)
    return DEState(path.end, *y[:3]), y[3:].reshape(3, 3)
