"""2x2 Fuchsian systems with poles {0, 1, s, oo}, twisted-period systems and Painleve VI.

Four residue families are built from a rescaled frame Phi (rows i = 1..3):

    A_i = mu (-p1 p3, p3^2; -p1^2, p1 p3)             residue at oo: mu diag(1, -1)
    B_i = mu (p2^2, 2 p2 p3; p1 p2, 2 p1 p3)          residue at oo: mu diag(-1, -2)
    C_i, D_i                                           gauge-equivalent to the B family

with p_k = Phi[i, k].  The zero y(s) of the top-right entry of
eps(eps-1)(eps-s) sum_i M_i/(eps - p_i) solves Painleve VI; the A family
gives the mu-form and the B family its Okamoto transform.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegeneratePolynomial, GridTooCoarse, PoleAtS, SingularFrame, TrifrobError
from .frames import TransitionFrame
from .numkit import CPath, ode_flow

KINDS = ("A", "B", "C", "D")


@dataclass(frozen=True)
class ResidueSystem:
    s: complex
    kind: str
    residues: tuple
    mu: complex

    def __post_init__(self):
        if self.kind not in KINDS:
            raise TrifrobError(f"unknown kind {self.kind!r}")
        res = tuple(np.asarray(m, dtype=complex).reshape(2, 2) for m in self.residues)
        if len(res) != 3:
            raise TrifrobError("exactly three finite residues are expected")
        object.__setattr__(self, "residues", res)
        object.__setattr__(self, "s", complex(self.s))
        if self.s in (0, 1):
            raise PoleAtS("s must differ from 0 and 1")

    @property
    def poles(self) -> tuple:
        return (0.0, 1.0, self.s)

    @property
    def infinity(self) -> np.ndarray:
        return -sum(self.residues)

    def matrix(self, eps: complex) -> np.ndarray:
        return sum(M / (eps - p) for M, p in zip(self.residues, self.poles))

    def top_right(self) -> np.ndarray:
        return np.array([M[0, 1] for M in self.residues])


def _rows(Phi):
    Phi = np.asarray(Phi, dtype=complex)
    if Phi.shape != (3, 3):
        raise TrifrobError("a 3x3 rescaled frame is expected")
    return Phi


def reduce_A(Phi, mu, s) -> ResidueSystem:
    P = _rows(Phi)
    res = [mu * np.array([[-p[0] * p[2], p[2] ** 2], [-p[0] ** 2, p[0] * p[2]]]) for p in P]
    return ResidueSystem(s, "A", tuple(res), mu)


def reduce_B(Phi, mu, s) -> ResidueSystem:
    P = _rows(Phi)
    res = [mu * np.array([[p[1] ** 2, 2 * p[1] * p[2]], [p[0] * p[1], 2 * p[0] * p[2]]]) for p in P]
    return ResidueSystem(s, "B", tuple(res), mu)


def build_C_D(Phi, mu, s) -> tuple:
    """The systems satisfied by the coefficients in the two eigenspaces of W."""
    P = _rows(Phi)
    I = np.eye(2)
    C = [mu * np.array([[p[1] ** 2, -2 * p[1] * p[2]], [-p[0] * p[1], 2 * p[0] * p[2]]]) for p in P]
    C[2] = C[2] - mu * I
    D = [mu * np.array([[p[1] ** 2, p[1] * p[2]], [2 * p[0] * p[1], 2 * p[0] * p[2]]]) for p in P]
    D[0] = D[0] - mu * I
    D[1] = D[1] - mu * I
    return ResidueSystem(s, "C", tuple(C), mu), ResidueSystem(s, "D", tuple(D), mu)


def gauge_transform(sys: ResidueSystem, P, shifts: Sequence[complex], kind: str) -> ResidueSystem:
    """Residues of chi = prod (eps - p_i)^{k_i} P alpha:  M_i -> P M_i P^{-1} + k_i I."""
    P = np.asarray(P, dtype=complex)
    Pi = np.linalg.inv(P)
    res = tuple(P @ M @ Pi + k * np.eye(2) for M, k in zip(sys.residues, shifts))
    return ResidueSystem(sys.s, kind, res, sys.mu)


def c_to_b(sysC: ResidueSystem) -> ResidueSystem:
    """Gauge (eps - s)^mu diag(-1, 1)."""
    return gauge_transform(sysC, np.diag([-1.0, 1.0]), (0, 0, sysC.mu), "B")


def d_to_b(sysD: ResidueSystem) -> ResidueSystem:
    """Gauge eps^mu (eps - 1)^mu diag(2, 1)."""
    return gauge_transform(sysD, np.diag([2.0, 1.0]), (sysD.mu, sysD.mu, 0), "B")


def residue_distance(s1: ResidueSystem, s2: ResidueSystem) -> float:
    return float(max(np.max(np.abs(a - b)) for a, b in zip(s1.residues, s2.residues)))


def _avoid(path: CPath, points, margin=1e-12):
    for za, zb in path.segments():
        d = zb - za
        for p in points:
            tau = min(1.0, max(0.0, ((p - za) * np.conj(d)).real / abs(d) ** 2))
            if abs(za + tau * d - p) < margin:
                raise PoleAtS(f"path passes through the pole {p}")


def integrate_system(sys: ResidueSystem, path: CPath, chi0, tol: float = 1e-12) -> np.ndarray:
    """Continue a (fundamental) solution of d chi/d eps = M(eps) chi along an eps-path."""
    _avoid(path, sys.poles)
    return ode_flow(lambda e, y: sys.matrix(e) @ y, path, np.asarray(chi0, dtype=complex), tol)


def wronskian_residual(sys: ResidueSystem, chi_fn: Callable, eps: complex, h: float = 1e-5) -> float:
    """|d log det chi/d eps - sum tr M_i/(eps - p_i)| relative to the right-hand side.

    Any fundamental solution has det chi = C prod (eps - p_i)^{tr M_i}.
    """
    vals = [complex(np.linalg.det(chi_fn(eps + k * h))) for k in (-2, -1, 1, 2)]
    w0 = complex(np.linalg.det(chi_fn(eps)))
    if w0 == 0:
        raise SingularFrame("chi is not fundamental")
    d = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h) / w0
    rhs = sum(np.trace(M) / (eps - p) for M, p in zip(sys.residues, sys.poles))
    return float(abs(d - rhs) / max(abs(rhs), 1.0))


@dataclass(frozen=True)
class TwistedPeriodSystem:
    n: int
    u: tuple
    residues: tuple
    nu: complex

    def matrix(self, lam: complex) -> np.ndarray:
        return sum(R / (lam - ui) for R, ui in zip(self.residues, self.u))


def residues_R(frame: TransitionFrame, nu: complex) -> TwistedPeriodSystem:
    """R_i = -Psi^{-1} E_i Psi (1/2 - nu + mu_hat)."""
    psi = frame.psi
    inv = frame.inverse()
    n = frame.n
    tail = (0.5 - nu) * np.eye(n) + frame.mu_hat
    res = []
    for i in range(n):
        res.append(-np.outer(inv[:, i], psi[i, :]) @ tail)
    return TwistedPeriodSystem(n, frame.chart.coords, tuple(res), nu)


def isomonodromy_residual(sys_family: Callable, chi_family: Callable, s: complex, eps: complex,
                          h: float = 1e-5) -> float:
    """|d chi/ds + B_3 chi/(eps - s)| with d/ds by 4-point differences.

    ``sys_family(s)`` returns the ResidueSystem; ``chi_family(eps, s)`` the solution.
    """
    vals = [np.asarray(chi_family(eps, s + k * h)) for k in (-2, -1, 1, 2)]
    d = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
    chi = np.asarray(chi_family(eps, s))
    M3 = sys_family(s).residues[2]
    return float(np.max(np.abs(d + M3 @ chi / (eps - s))))


def isomonodromy_residual_u(res_family: Callable, chi_family: Callable, u, lam: complex, i: int,
                            h: float = 1e-5) -> float:
    """|d chi/du_i + M_i chi/(lam - u_i)| for systems with poles at the u_i."""
    u = np.asarray(u, dtype=complex)

    def at(k):
        v = u.copy()
        v[i] += k * h
        return np.asarray(chi_family(lam, v))

    vals = [at(k) for k in (-2, -1, 1, 2)]
    d = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
    Mi = res_family(u)[i]
    return float(np.max(np.abs(d + Mi @ at(0) / (lam - u[i]))))


def painleve_y(sys: ResidueSystem) -> complex:
    """Zero of b1(eps-1)(eps-s) + b2 eps(eps-s) + b3 eps(eps-1), b_i the top-right entries."""
    b1, b2, b3 = sys.top_right()
    s = sys.s
    lin = b1 * (1 + s) + b2 * s + b3
    scale = max(abs(b1), abs(b2), abs(b3))
    if scale == 0 or abs(lin) <= 1e-13 * scale * max(1.0, abs(s)):
        raise DegeneratePolynomial("the polynomial in eps has no linear term")
    if abs(b1 + b2 + b3) > 1e-8 * scale:
        raise DegeneratePolynomial("top-right entry at infinity is nonzero; the polynomial is quadratic")
    return b1 * s / lin


@dataclass(frozen=True)
class PainleveSample:
    s: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=complex)
        y = np.asarray(self.y, dtype=complex)
        if s.shape != y.shape or s.ndim != 1:
            raise TrifrobError("s and y must be 1-d arrays of equal length")
        for si, yi in zip(s, y):
            if min(abs(yi), abs(yi - 1), abs(yi - si)) < 1e-14:
                raise TrifrobError(f"y({si}) sits on a fixed singularity")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "y", y)


VARIANTS = ("pvimu", "okamoto")


def pvi_rhs(s, y, yp, mu, variant: str):
    """Right-hand side of the mu-form or the Okamoto-transformed form of Painleve VI."""
    base = 0.5 * (1 / y + 1 / (y - 1) + 1 / (y - s)) * yp ** 2 - (1 / s + 1 / (s - 1) + 1 / (y - s)) * yp
    pre = 0.5 * y * (y - 1) * (y - s) / (s ** 2 * (s - 1) ** 2)
    if variant == "pvimu":
        br = (2 * mu - 1) ** 2 + s * (s - 1) / (y - s) ** 2
    elif variant == "okamoto":
        br = ((mu - 1) ** 2 - mu ** 2 * s / y ** 2 + mu ** 2 * (s - 1) / (y - 1) ** 2
              + (1 - mu ** 2) * s * (s - 1) / (y - s) ** 2)
    else:
        raise TrifrobError(f"unknown variant {variant!r}")
    return base + pre * br


def _stencil_residuals(s, y, step, mu, variant):
    """Residuals at interior points using samples spaced by ``step`` grid cells."""
    n = len(s)
    h = (s[step] - s[0]) if n > step else None
    out = np.full(n, np.nan, dtype=complex)
    for k in range(2 * step, n - 2 * step):
        ym2, ym1, y0, yp1, yp2 = (y[k + j * step] for j in (-2, -1, 0, 1, 2))
        d1 = (ym2 - 8 * ym1 + 8 * yp1 - yp2) / (12 * h)
        d2 = (-ym2 + 16 * ym1 - 30 * y0 + 16 * yp1 - yp2) / (12 * h * h)
        out[k] = d2 - pvi_rhs(s[k], y0, d1, mu, variant)
    return out


def pvi_residuals(samples: PainleveSample, mu, variant: str) -> np.ndarray:
    """Pointwise residuals on a uniform grid (NaN where the 5-point stencil does not fit)."""
    s = samples.s
    if len(s) < 5:
        raise GridTooCoarse("at least five samples are needed")
    d = np.diff(s)
    if np.max(np.abs(d - d[0])) > 1e-9 * abs(d[0]):
        raise GridTooCoarse("grid must be uniform")
    return _stencil_residuals(s, samples.y, 1, mu, variant)


def pvi_residual(samples: PainleveSample, mu, variant: str, tol: float | None = None) -> float:
    """Max residual over interior points.

    With ``tol`` set, a Richardson comparison against the doubled spacing
    estimates the differencing error; if that estimate exceeds ``tol`` the grid
    is declared too coarse.
    """
    r = pvi_residuals(samples, mu, variant)
    worst = float(np.nanmax(np.abs(r)))
    if tol is not None:
        if len(samples.s) < 9:
            raise GridTooCoarse("Richardson check needs at least nine samples")
        r2 = _stencil_residuals(samples.s, samples.y, 2, mu, variant)
        mask = ~np.isnan(r2)
        est = float(np.max(np.abs(r2[mask] - r[mask]))) / 15.0
        if est > tol:
            raise GridTooCoarse(f"estimated differencing error {est:.2e} exceeds {tol:.2e}")
    return worst


def pvi_point_residual(y_fn: Callable, s0: complex, mu, variant: str, h: float = 1e-3,
                       tol: float = 1e-4, min_h: float = 1e-6) -> tuple:
    """Residual at one point with the step halved until the Richardson estimate is below tol/10.

    Returns (residual, y(s0), h_used).
    """
    def res(hh):
        ys = [y_fn(s0 + k * hh) for k in (-2, -1, 0, 1, 2)]
        d1 = (ys[0] - 8 * ys[1] + 8 * ys[3] - ys[4]) / (12 * hh)
        d2 = (-ys[0] + 16 * ys[1] - 30 * ys[2] + 16 * ys[3] - ys[4]) / (12 * hh * hh)
        return d2 - pvi_rhs(s0, ys[2], d1, mu, variant), ys[2]

    r_h, y0 = res(h)
    while True:
        r_half, _ = res(h / 2)
        est = abs(r_h - r_half) / 15.0
        if est <= tol / 10:
            return abs(r_half), y0, h / 2
        h /= 2
        if h < min_h:
            raise GridTooCoarse(f"no step down to {min_h:g} resolves s = {s0}")
        r_h = r_half
