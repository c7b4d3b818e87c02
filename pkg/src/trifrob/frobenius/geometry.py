"""Frobenius algebra tensors at a point and the metrics built from them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from ..errors import OddDimension, Singular
from ..numkit import central_diff4, second_diff4
from .prepotential import Prepotential


@dataclass(frozen=True)
class FrobeniusPoint:
    """All pointwise tensors.  Index conventions (0-based):

    ``c[a, b, g]`` = c_{abg};  ``c_up[g, a, b]`` = c^g_{ab};
    ``U[a, b]`` = U^a_b;  ``g[a, b]`` = g^{ab};  ``eta_tilde[a, b]`` = eta-tilde^{ab}.
    """

    t: np.ndarray
    value: complex
    c: np.ndarray
    c_up: np.ndarray
    U: np.ndarray
    g: np.ndarray
    eta_tilde: np.ndarray
    mu: np.ndarray
    eta: np.ndarray
    eta_inv: np.ndarray

    @property
    def mu_hat(self) -> np.ndarray:
        return np.diag(self.mu)

    @property
    def n(self) -> int:
        return len(self.t)


def evaluate_point(F: Prepotential, t) -> FrobeniusPoint:
    t = np.asarray(t, dtype=complex)
    if t.shape != (F.n,):
        raise ValueError(f"expected {F.n} coordinates")
    c = F.third_derivatives(t)
    eta_inv = F.eta_inverse
    c_up = np.einsum("gm,abm->gab", eta_inv, c)
    E = F.degree_array * t
    U = np.einsum("m,amb->ab", E, c_up)
    g = eta_inv @ U.T
    et = eta_inv @ (U @ U).T
    mu = np.array([float(m) for m in F.mu_exact])
    return FrobeniusPoint(t, F.value(t), c, c_up, U, g, et, mu, F.eta_matrix, eta_inv)


def wdvv_residual_tensor(c: np.ndarray, eta: np.ndarray) -> float:
    """max |c^m_{ab} c_{mgd} - c^m_{bg} c_{mad}| for a tensor c and metric eta."""
    c_up = np.einsum("gm,abm->gab", np.linalg.inv(eta), c)
    lhs = np.einsum("mab,mgd->abgd", c_up, c)
    rhs = np.einsum("mbg,mad->abgd", c_up, c)
    return float(np.max(np.abs(lhs - rhs)))


def check_wdvv(F: Prepotential, samples: Iterable) -> float:
    worst = 0.0
    for t in samples:
        worst = max(worst, wdvv_residual_tensor(F.third_derivatives(np.asarray(t, complex)),
                                                F.eta_matrix))
    return worst


def check_unit(point: FrobeniusPoint) -> float:
    return float(np.max(np.abs(point.c[0] - point.eta)))


def check_quasihomogeneity(F: Prepotential, lam: float, t, degrees=None, charge=None) -> float:
    """Scaling defect of the third derivatives under t^a -> lam^{d_a} t^a."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    d = np.array([float(x) for x in (F.degrees if degrees is None else degrees)])
    ch = float(F.charge if charge is None else charge)
    t = np.asarray(t, dtype=complex)
    c0 = F.third_derivatives(t)
    c1 = F.third_derivatives(lam ** d * t)
    w = 3 - ch - d[:, None, None] - d[None, :, None] - d[None, None, :]
    return float(np.max(np.abs(c1 - lam ** w * c0)))


@dataclass(frozen=True)
class TriHamiltonian:
    ok: bool
    mu: Fraction | None
    mu_hat: tuple

    @property
    def mu_hat_squared(self) -> np.ndarray:
        return np.diag([float(m) ** 2 for m in self.mu_hat])


def check_trihamiltonian(F: Prepotential) -> TriHamiltonian:
    """Is the grading spectrum split as {mu (n/2 times), -mu (n/2 times)} with mu != 0?

    ``mu`` is reported as the first eigenvalue mu_1 = -d/2 (the value attached
    to the unit direction), so the spectrum reads diag(mu, ..., -mu, ...).
    """
    if F.n % 2:
        raise OddDimension(f"dimension {F.n} is odd")
    mus = F.mu_exact
    m = mus[0]
    ok = m != 0 and sum(1 for x in mus if x == m) == F.n // 2 and sum(1 for x in mus if x == -m) == F.n // 2
    return TriHamiltonian(bool(ok), m if ok else None, mus)


def christoffel_third(point: FrobeniusPoint) -> np.ndarray:
    """Contravariant symbols G[a, b, g] of the third metric."""
    mu = point.mu
    fac = 1.0 - mu[:, None] + mu[None, :]          # (beta, nu)
    return np.einsum("bn,bn,ang->abg", fac, point.g, point.c_up)


def christoffel_intersection(point: FrobeniusPoint) -> np.ndarray:
    """Contravariant symbols (1/2 - mu_b) c^{ab}_g of the intersection form."""
    c_ab_g = np.einsum("al,blg->abg", point.eta_inv, point.c_up)
    return (0.5 - point.mu)[None, :, None] * c_ab_g


def _coord_derivative(field: Callable, t, k: int, h: float):
    t = np.asarray(t, dtype=complex)

    def f(z):
        y = t.copy()
        y[k] = z
        return field(y)

    return central_diff4(f, t[k], h)


def curvature_contravariant(gamma_field: Callable, metric_field: Callable, t, h: float = 1e-4) -> np.ndarray:
    """R^{abg}_d from contravariant symbols, with derivatives of the symbols by differences."""
    t = np.asarray(t, dtype=complex)
    G = np.asarray(gamma_field(t))
    M = np.asarray(metric_field(t))
    if abs(np.linalg.det(M)) < 1e-12 * max(1.0, np.max(np.abs(M))) ** len(t):
        raise Singular("metric is degenerate at the sample point")
    dG = np.array([_coord_derivative(gamma_field, t, k, h) for k in range(len(t))])   # dG[l, b, g, d]
    R = (np.einsum("abl,lgd->abgd", G, G) - np.einsum("agl,lbd->abgd", G, G)
         + np.einsum("al,lbgd->abgd", M, dG) - np.einsum("al,dbgl->abgd", M, dG))
    return R


def christoffel_identity_residuals(field_point: Callable, gamma_of: Callable, metric_of: Callable,
                                   t, h: float = 1e-4) -> tuple:
    """Residuals of d_g M^{ab} = G^{ab}_g + G^{ba}_g and M^{an} G^{bg}_n = M^{bn} G^{ag}_n."""
    t = np.asarray(t, dtype=complex)
    P = field_point(t)
    G = gamma_of(P)
    M = metric_of(P)
    dM = np.array([_coord_derivative(lambda y: metric_of(field_point(y)), t, k, h)
                   for k in range(len(t))])          # dM[g, a, b]
    r1 = np.max(np.abs(np.transpose(dM, (1, 2, 0)) - G - np.transpose(G, (1, 0, 2))))
    lhs = np.einsum("an,bgn->abg", M, G)
    r2 = np.max(np.abs(lhs - np.transpose(lhs, (1, 0, 2))))
    return float(r1), float(r2)


@dataclass(frozen=True)
class PencilResiduals:
    d1_eta_tilde: float
    d11_eta_tilde: float
    d1_U: float

    def max(self) -> float:
        return max(self.d1_eta_tilde, self.d11_eta_tilde, self.d1_U)


def check_flat_pencil(F: Prepotential, t, h: float = 1e-3) -> PencilResiduals:
    """|d1 eta~ - 2g|, |d1^2 eta~ - 2 eta^{-1}|, |d1 U - I| by t^1-differences."""
    t = np.asarray(t, dtype=complex)
    P = evaluate_point(F, t)

    def along(fn):
        def f(z):
            y = t.copy()
            y[0] = z
            return fn(evaluate_point(F, y))
        return f

    d1 = central_diff4(along(lambda p: p.eta_tilde), t[0], h)
    d11 = second_diff4(along(lambda p: p.eta_tilde), t[0], h)
    dU = central_diff4(along(lambda p: p.U), t[0], h)
    return PencilResiduals(float(np.max(np.abs(d1 - 2 * P.g))),
                           float(np.max(np.abs(d11 - 2 * P.eta_inv))),
                           float(np.max(np.abs(dU - np.eye(F.n)))))


def pencil_shift_residual(F: Prepotential, t, eps1: float) -> float:
    """|eta~(t + eps1/2 e_1) - (eta~ + eps1 g + eps1^2/4 eta^{-1})(t)|."""
    t = np.asarray(t, dtype=complex)
    P = evaluate_point(F, t)
    y = t.copy()
    y[0] += eps1 / 2
    Q = evaluate_point(F, y)
    return float(np.max(np.abs(Q.eta_tilde - (P.eta_tilde + eps1 * P.g + eps1 ** 2 / 4 * P.eta_inv))))


def check_wwdvv(point: FrobeniusPoint) -> float:
    m2 = point.mu ** 2
    cu = point.c_up
    lhs = np.einsum("m,mab,nmg->abgn", m2, cu, cu)
    rhs = np.einsum("m,mbg,nam->abgn", m2, cu, cu)
    return float(np.max(np.abs(lhs - rhs)))


def third_metric_curvature(F: Prepotential, t, h: float = 1e-4) -> np.ndarray:
    """Curvature of eta~ with the symbols of :func:`christoffel_third`."""
    return curvature_contravariant(lambda y: christoffel_third(evaluate_point(F, y)),
                                   lambda y: evaluate_point(F, y).eta_tilde, t, h)
