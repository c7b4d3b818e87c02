"""Lift of a three-dimensional solution to a four-dimensional transition frame.

For canonical coordinates v = (v1, .., v4) put

    s = v31 v42 / (v21 v43),    eps = v24 / v21        (v_ij = v_i - v_j)

and, from a rescaled 3x3 frame Phi(s) with grading diag(mu, 0, -mu) and a
fundamental solution chi(eps, s) of the 2x2 system of kind B,

    Psi = Phi4 . diag(-v21^mu/(eps-s)^mu,  v21^mu/(eps-s)^mu,
                      v21^-mu/(2 [eps(eps-1)]^mu),  v21^-mu/[eps(eps-1)]^mu) . blockdiag(chi, chi)

with Phi4 the eigenframe of the skew lift W of V.  Psi then solves
d Psi/dv_i = W_i Psi.

Values at a chart are obtained by transporting the state
(Phi, a, b, c, chi, log v21, log(eps - s), log(eps(eps - 1))) along a path in
v-space, each piece by its own differential equation, from an anchor chart
where chi = I and every bracket is positive real.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .darboux_egoroff import (CanonicalChart, DEState, abc_from_v, lift_to_w, side_matrices, v_from_state)
from .errors import (BranchInconsistency, CoincidentCoordinates, DegenerateCrossRatio, EigenCheckFailed,
                     MarkedColumnZero, NonClosedForms, NonFinite, TrifrobError)
from .frames import TransitionFrame
from .frobenius.geometry import wdvv_residual_tensor
from .fuchsian import reduce_B
from .numkit import CPath, ode_flow

PARAM_MARGIN = 1e-9


@dataclass(frozen=True)
class Chart4Params:
    v: tuple
    s: complex
    eps: complex


def chart_params(v) -> Chart4Params:
    v = tuple(complex(x) for x in v)
    if len(v) != 4:
        raise TrifrobError("four coordinates are expected")
    if not all(cmath.isfinite(x) for x in v):
        raise NonFinite("coordinates must be finite")
    CanonicalChart(v)
    v1, v2, v3, v4 = v
    s = (v3 - v1) * (v4 - v2) / ((v2 - v1) * (v4 - v3))
    eps = (v2 - v4) / (v2 - v1)
    for val, bad, name in ((s, 0, "s"), (s, 1, "s"), (eps, 0, "eps"), (eps, 1, "eps"), (eps, s, "eps")):
        if abs(val - bad) < PARAM_MARGIN * max(1.0, abs(bad)):
            raise DegenerateCrossRatio(f"{name} = {val} is degenerate")
    return Chart4Params(v, s, eps)


def _dlog_s(v, dv):
    v1, v2, v3, v4 = v
    d1, d2, d3, d4 = dv
    return ((d3 - d1) / (v3 - v1) + (d4 - d2) / (v4 - v2)
            - (d2 - d1) / (v2 - v1) - (d4 - d3) / (v4 - v3))


def _dlog_eps(v, dv):
    v1, v2, v3, v4 = v
    d1, d2, d3, d4 = dv
    return (d2 - d4) / (v2 - v4) - (d2 - d1) / (v2 - v1)


def eigenframe4(Phi, mu, sign: int = 1, V=None, tol: float = 1e-10) -> np.ndarray:
    """Columns (phi_1, 0), (phi_2, i), (phi_2, -i), (phi_3, 0) spanning the +-mu eigenspaces of W.

    With ``V`` given, the eigen-relations W x = mu x (first two columns) and
    W x = -mu x (last two) are verified.  ``sign = -1`` refers to the lift with
    last row and column of W negated, whose eigenframe has the last row negated.
    """
    Phi = np.asarray(Phi, dtype=complex)
    H = np.zeros((4, 4), dtype=complex)
    H[:3, 0] = Phi[:, 0]
    H[:3, 1] = Phi[:, 1]
    H[:3, 2] = Phi[:, 1]
    H[:3, 3] = Phi[:, 2]
    H[3, 1], H[3, 2] = 1j, -1j
    if sign < 0:
        H[3, :] *= -1
    if V is not None:
        W = lift_to_w(DEState(0.5, *abc_from_v(V)), sign)
        ev = np.array([mu, mu, -mu, -mu])
        r = float(np.max(np.abs(W @ H - H * ev)))
        if r > tol * max(1.0, float(np.max(np.abs(H)))):
            raise EigenCheckFailed(f"eigen-relation residual {r:.2e}")
    return H


def diagonal_factor(v21_mu, eps_s_mu, epseps_mu) -> np.ndarray:
    """diag(-X, X, Y/2, Y), X = v21^mu/(eps-s)^mu, Y = v21^-mu/[eps(eps-1)]^mu."""
    X = v21_mu / eps_s_mu
    Y = 1.0 / (v21_mu * epseps_mu)
    return np.diag([-X, X, 0.5 * Y, Y])


def assemble_psi_hat(Phi, chi, params: Chart4Params, mu, sign: int = 1, logs=None) -> np.ndarray:
    """Psi from its pieces.

    ``logs`` = (log v21, log(eps - s), log(eps(eps - 1))) selects the branches of the
    powers; without it principal logarithms are used, which is only consistent
    with chi on a chart where every bracket lies off the negative real axis.
    """
    v = params.v
    if logs is None:
        brackets = (v[1] - v[0], params.eps - params.s, params.eps * (params.eps - 1))
        for b in brackets:
            if b.real < 0 and abs(b.imag) < 1e-12 * abs(b):
                raise BranchInconsistency("a bracket sits on the principal cut; pass continued logarithms")
        logs = tuple(cmath.log(b) for b in brackets)
    L1, L2, L3 = logs
    D = diagonal_factor(cmath.exp(mu * L1), cmath.exp(mu * L2), cmath.exp(mu * L3))
    chi = np.asarray(chi, dtype=complex)
    K = np.zeros((4, 4), dtype=complex)
    K[:2, :2] = chi
    K[2:, 2:] = chi
    return eigenframe4(Phi, mu, sign) @ D @ K


def side_matrices4(W, v) -> list:
    return side_matrices(W, CanonicalChart(tuple(v)))


@dataclass
class LiftState:
    v: np.ndarray
    Phi: np.ndarray
    abc: np.ndarray
    chi: np.ndarray
    logs: np.ndarray
    extra: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    def pack(self) -> np.ndarray:
        return np.concatenate([self.Phi.ravel(), self.abc, self.chi.ravel(), self.logs, self.extra])

    @classmethod
    def unpack(cls, v, y, n_extra=0) -> "LiftState":
        return cls(np.asarray(v, complex), y[:9].reshape(3, 3), y[9:12], y[12:16].reshape(2, 2),
                   y[16:19], y[19:19 + n_extra])

    @property
    def s(self) -> complex:
        return chart_params(self.v).s


class Lift:
    """A three-dimensional solution (Phi, a, b, c) at s0 lifted to four dimensions.

    Parameters
    ----------
    s0, Phi0 : base point and rescaled 3x3 frame there, Phi0 mu_hat Phi0^{-1} = V(s0)
    mu : eigenvalue attached to the first column of Phi0
    eps0 : anchor value of eps, real and > max(1, Re s0) when s0 is real
    sign : which of the two lifts of V
    """

    def __init__(self, s0: complex, Phi0, mu: complex, eps0: float = 10.0, sign: int = 1,
                 tol: float = 1e-12, clearance: float = 0.05):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.mu = complex(mu) if complex(mu).imag else float(complex(mu).real)
        self.sign = sign
        self.tol = tol
        self.clearance = clearance
        Phi0 = np.asarray(Phi0, dtype=complex)
        V0 = Phi0 @ np.diag([self.mu, 0, -self.mu]) @ np.linalg.inv(Phi0)
        if np.max(np.abs(V0 + V0.T)) > 1e-9 * max(1.0, np.max(np.abs(V0))):
            raise EigenCheckFailed("Phi0 mu_hat Phi0^{-1} is not skew")
        eigenframe4(Phi0, self.mu, sign, V=V0, tol=1e-9)
        s0 = complex(s0)
        eps0 = complex(eps0)
        # anchor chart (0, 1, v3, v4): eps = 1 - v4 and s = v3 (v4 - 1)/(v4 - v3)
        v4 = 1 - eps0
        v3 = s0 * v4 / (s0 + v4 - 1)
        self.anchor_v = np.array([0.0, 1.0, v3, v4], dtype=complex)
        p = chart_params(self.anchor_v)
        if abs(p.s - s0) > 1e-12 * max(1.0, abs(s0)) or abs(p.eps - eps0) > 1e-12 * abs(eps0):
            raise TrifrobError("anchor chart reconstruction failed")
        logs = np.array([0.0, cmath.log(eps0 - s0), cmath.log(eps0 * (eps0 - 1))])
        self.anchor = LiftState(self.anchor_v, Phi0, np.array(abc_from_v(V0)), np.eye(2, dtype=complex), logs)

    # -- kappa ----------------------------------------------------------------
    @property
    def kappa(self) -> complex:
        """Psi^t Psi = kappa antidiag(-1, 1, 1, -1)."""
        P = self.psi_hat(self.anchor)
        return complex((P.T @ P)[1, 2])

    # -- transport ------------------------------------------------------------
    def _rhs(self, va, dv, extra_rhs):
        mu = self.mu

        def rhs(tau, y):
            tau = tau.real
            v = va + tau * dv
            st = LiftState.unpack(v, y, len(y) - 19)
            v1, v2, v3, v4 = v
            s = (v3 - v1) * (v4 - v2) / ((v2 - v1) * (v4 - v3))
            eps = (v2 - v4) / (v2 - v1)
            ds = s * _dlog_s(v, dv)
            deps = eps * _dlog_eps(v, dv)
            a, b, c = st.abc
            V = v_from_state(DEState(s, a, b, c))
            dPhi = _side3(V, s) @ st.Phi * ds
            dabc = np.array([b * c / s, a * c / (1 - s), a * b / (s * (s - 1))]) * ds
            sysB = reduce_B(st.Phi, mu, s)
            B3 = sysB.residues[2]
            dchi = sysB.matrix(eps) @ st.chi * deps - B3 @ st.chi * (ds / (eps - s))
            d21 = dv[1] - dv[0]
            dlogs = np.array([d21 / (v2 - v1), (deps - ds) / (eps - s), deps * (2 * eps - 1) / (eps * (eps - 1))])
            out = [dPhi.ravel(), dabc, dchi.ravel(), dlogs]
            if extra_rhs is not None:
                out.append(extra_rhs(self, st, v, dv))
            return np.concatenate(out)

        return rhs

    def _segment(self, st: LiftState, target, extra_rhs=None) -> LiftState:
        va = np.asarray(st.v, complex)
        dv = np.asarray(target, complex) - va
        if np.max(np.abs(dv)) == 0:
            return st
        y = ode_flow(self._rhs(va, dv, extra_rhs), CPath.segment(0.0, 1.0), st.pack(), tol=self.tol)
        return LiftState.unpack(np.asarray(target, complex), y, len(st.extra))

    def _clearance(self, v) -> float:
        try:
            p = chart_params(v)
        except (CoincidentCoordinates, DegenerateCrossRatio):
            return 0.0
        s, e = p.s, p.eps
        vals = [abs(s), abs(s - 1), abs(e), abs(e - 1), abs(e - s), 1 / max(abs(s), 1e-300),
                1 / max(abs(e), 1e-300)]
        v = np.asarray(v)
        scale = max(1.0, float(np.max(np.abs(v))))
        sep = min(abs(v[i] - v[j]) for i in range(4) for j in range(i + 1, 4)) / scale
        return min(min(vals), sep)

    def _path_clearance(self, a, b, thr=None) -> float:
        a, b = np.asarray(a, complex), np.asarray(b, complex)
        thr = self.clearance if thr is None else thr
        n = int(min(20000, max(200, 8 * np.max(np.abs(b - a)) / thr)))
        return min(self._clearance(a + k / n * (b - a)) for k in range(n + 1))

    def plan(self, target, start=None) -> list:
        """Waypoints in v-space from ``start`` (default: anchor) to ``target``.

        The straight segment is used when it keeps (s, eps) away from their
        degenerations, measured against the clearance wanted for the path or,
        if smaller, that of the endpoints themselves; otherwise one
        intermediate point is tried from a fixed list and the path with the
        largest clearance wins.
        """
        a = self.anchor_v if start is None else np.asarray(start, complex)
        b = np.asarray(target, complex)
        cb = self._clearance(b)
        if cb == 0.0:
            chart_params(b)
            raise DegenerateCrossRatio("target chart is degenerate")
        thr = min(self.clearance, 0.9 * min(cb, self._clearance(a)))
        best = ([a, b], self._path_clearance(a, b, thr))
        if best[1] >= thr:
            return best[0]
        mid = 0.5 * (a + b)
        scale = max(1.0, float(np.max(np.abs(b - a))))
        offsets = []
        for k in range(8):
            ph = np.exp(2j * np.pi * np.array([k, 2 * k + 1, 3 * k + 2, 5 * k + 3]) / 8)
            offsets.append(0.5 * scale * ph * np.array([0, 0, 1, 1]))
            offsets.append(0.5 * scale * ph * np.array([1, 1, 1, 1]) * np.array([0, 0, 1, -1]))
        for off in offsets:
            m = mid + off
            c = min(self._path_clearance(a, m, thr), self._path_clearance(m, b, thr))
            if c > best[1]:
                best = ([a, m, b], c)
            if c >= thr:
                break
        if best[1] < 1e-6:
            raise DegenerateCrossRatio("no admissible path to the target chart")
        return best[0]

    def transport(self, target, path: Sequence | None = None, start: LiftState | None = None,
                  extra_rhs: Callable | None = None, extra0=None) -> LiftState:
        st = self.anchor if start is None else start
        if extra0 is not None:
            st = LiftState(st.v, st.Phi, st.abc, st.chi, st.logs, np.asarray(extra0, complex))
        pts = self.plan(target, st.v) if path is None else [np.asarray(p, complex) for p in path]
        if np.max(np.abs(np.asarray(pts[0]) - st.v)) > 1e-12:
            raise TrifrobError("path must start at the current chart")
        for p in pts[1:]:
            st = self._segment(st, p, extra_rhs)
        return st

    # -- assembly -------------------------------------------------------------
    def psi_hat(self, st: LiftState) -> np.ndarray:
        return assemble_psi_hat(st.Phi, st.chi, chart_params(st.v), self.mu, self.sign, tuple(st.logs))

    def w_matrix(self, st: LiftState) -> np.ndarray:
        return lift_to_w(DEState(chart_params(st.v).s, *st.abc), self.sign)

    def frame(self, st: LiftState) -> TransitionFrame:
        mu = self.mu
        return TransitionFrame(self.psi_hat(st), CanonicalChart(tuple(st.v)), np.array([mu, mu, -mu, -mu]))

    def stencil(self, st: LiftState, i: int, offsets, h: float) -> list:
        """States at v + k h e_i for k in ``offsets``, transported from ``st`` along the i-th axis."""
        out = []
        for k in offsets:
            tgt = st.v.copy()
            tgt[i] += k * h
            out.append(self._segment(st, tgt))
        return out


def _side3(V, s):
    """Side matrix V_3 at the chart (0, 1, s)."""
    u = (0.0, 1.0, s)
    M = np.zeros((3, 3), dtype=complex)
    for j in range(3):
        if j != 2:
            M[2, j] = V[2, j] / (u[2] - u[j])
            M[j, 2] = -V[j, 2] / (u[j] - u[2])
    return M


def a3_lift(sign: int = 1, eps0: float = 10.0, tol: float = 1e-12) -> Lift:
    """Lift anchored at t = 2 (s = 128/125) with the closed-form frame."""
    from .hurwitz import a3
    return Lift(a3.s_of_t(a3.T_ANCHOR), a3.a3_phi(a3.T_ANCHOR), a3.MU, eps0, sign, tol)


def frame_from_state(state: DEState, mu: complex) -> np.ndarray:
    """A rescaled frame for V(state) with Phi^t Phi = antidiag(1, 1, 1).

    V x = k x x (cross product) with k = (a, b, c).  Columns: an isotropic
    eigenvector for mu, the kernel vector -i k/mu (the sign the lift to W
    requires), and the eigenvector for -mu scaled against the first.  The
    remaining freedom phi_1 -> l phi_1, phi_3 -> phi_3/l is fixed by unit
    2-norm of phi_1 with a real positive largest entry.
    """
    V = v_from_state(state)
    if abs(mu) < 1e-12:
        raise EigenCheckFailed("mu must be nonzero")
    if abs(mu ** 2 + state.casimir) > 1e-8 * max(1.0, abs(mu) ** 2):
        raise EigenCheckFailed("mu^2 differs from -(a^2 + b^2 + c^2)")
    w, X = np.linalg.eig(V)
    cols = []
    for target in (mu, -mu):
        k = int(np.argmin(np.abs(w - target)))
        if abs(w[k] - target) > 1e-6 * max(1.0, abs(mu)):
            raise EigenCheckFailed("spectrum of V is not (mu, 0, -mu)")
        cols.append(X[:, k])
    p1, p3 = cols
    p1 = p1 / np.linalg.norm(p1)
    p1 = p1 * np.exp(-1j * np.angle(p1[np.argmax(np.abs(p1))]))
    p2 = -1j * state.abc / mu
    p3 = p3 / (p1 @ p3)
    return np.column_stack([p1, p2, p3])


# -- verification ---------------------------------------------------------------

@dataclass(frozen=True)
class LinearSystemReport:
    residual: float
    euler_residual: float
    per_direction: tuple


def check_linear_system(lift: Lift, st: LiftState, h: float = 1e-5) -> LinearSystemReport:
    """max_i |d Psi/dv_i - W_i Psi| (4-point differences) and |sum v_i^2 d_i Psi - (UW + WU) Psi|."""
    P = lift.psi_hat(st)
    W = lift.w_matrix(st)
    Ws = side_matrices4(W, st.v)
    scale = max(1.0, float(np.max(np.abs(P))))
    per = []
    derivs = []
    for i in range(4):
        sts = lift.stencil(st, i, (-2, -1, 1, 2), h)
        Ps = [lift.psi_hat(x) for x in sts]
        d = (Ps[0] - 8 * Ps[1] + 8 * Ps[2] - Ps[3]) / (12 * h)
        derivs.append(d)
        per.append(float(np.max(np.abs(d - Ws[i] @ P))) / scale)
    U = np.diag(st.v)
    lhs = sum(st.v[i] ** 2 * derivs[i] for i in range(4))
    eul = float(np.max(np.abs(lhs - (U @ W + W @ U) @ P))) / scale
    return LinearSystemReport(max(per), eul, tuple(per))


def check_linear_system_family(psi_fn: Callable, w_fn: Callable, v, h: float = 1e-5) -> float:
    """The same check for explicitly given families Psi(v), W(v)."""
    v = np.asarray(v, complex)
    P = np.asarray(psi_fn(v))
    Ws = side_matrices(np.asarray(w_fn(v)), CanonicalChart(tuple(v)))
    worst = 0.0
    for i in range(len(v)):
        def at(k):
            x = v.copy()
            x[i] += k * h
            return np.asarray(psi_fn(x))
        d = (at(-2) - 8 * at(-1) + 8 * at(1) - at(2)) / (12 * h)
        worst = max(worst, float(np.max(np.abs(d - Ws[i] @ P))))
    return worst


def metric_pattern(P) -> tuple:
    """(kappa, off-pattern residual) for P^t P = kappa antidiag(-1, 1, 1, -1)."""
    G = np.asarray(P).T @ np.asarray(P)
    kappa = complex(G[1, 2])
    target = kappa * np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])
    return kappa, float(np.max(np.abs(G - target)))


def diagonalization_residual(lift: Lift, st: LiftState) -> float:
    """|Psi^{-1} W Psi - diag(mu, mu, -mu, -mu)|."""
    P = lift.psi_hat(st)
    mu = lift.mu
    D = np.linalg.solve(P, lift.w_matrix(st) @ P)
    return float(np.max(np.abs(D - np.diag([mu, mu, -mu, -mu]))))


# -- reconstruction ---------------------------------------------------------------

@dataclass(frozen=True)
class Reconstruction:
    eta: np.ndarray
    dt: np.ndarray       # dt[alpha, i]: coefficient of du_i in dt^alpha
    c: np.ndarray        # c[alpha, beta, gamma]
    marked: int


def reconstruct(psi, marked: int = 0, zero_tol: float = 1e-12) -> Reconstruction:
    """eta = Psi^t Psi,  dt^a = sum eta^{ab} psi_i1 psi_ib du_i,  c_abg = sum psi_ia psi_ib psi_ig / psi_i1."""
    P = np.asarray(psi.psi if isinstance(psi, TransitionFrame) else psi, dtype=complex)
    col = P[:, marked]
    if np.any(np.abs(col) <= zero_tol * max(1.0, float(np.max(np.abs(P))))):
        raise MarkedColumnZero(f"column {marked + 1} has a vanishing entry")
    eta = P.T @ P
    dt = np.linalg.solve(eta, (P * col[:, None]).T)
    c = np.einsum("ia,ib,ig,i->abg", P, P, P, 1.0 / col)
    return Reconstruction(eta, dt, c, marked)


def reconstruction_wdvv(rec: Reconstruction) -> float:
    return wdvv_residual_tensor(rec.c, rec.eta)


def closure_residual(psi_at: Callable, v, marked: int = 0, h: float = 1e-4) -> float:
    """max |d_j (dt^a)_i - d_i (dt^a)_j| by 4-point differences of the reconstructed forms."""
    v = np.asarray(v, complex)
    n = len(v)

    def forms(x):
        return reconstruct(psi_at(x), marked).dt

    D = []
    for j in range(n):
        def at(k):
            x = v.copy()
            x[j] += k * h
            return forms(x)
        D.append((at(-2) - 8 * at(-1) + 8 * at(1) - at(2)) / (12 * h))
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            worst = max(worst, float(np.max(np.abs(D[j][:, i] - D[i][:, j]))))
    scale = max(1.0, float(np.max(np.abs(forms(v)))))
    return worst / scale


def lift_closure_residual(lift: Lift, st: LiftState, marked: int = 0, h: float = 1e-4) -> float:
    cache = {}
    for i in range(4):
        for k, x in zip((-2, -1, 1, 2), lift.stencil(st, i, (-2, -1, 1, 2), h)):
            cache[(i, k)] = lift.psi_hat(x)

    def psi_at(x):
        d = x - st.v
        if np.max(np.abs(d)) == 0:
            return lift.psi_hat(st)
        i = int(np.argmax(np.abs(d)))
        return cache[(i, int(round((d[i] / h).real)))]

    return closure_residual(psi_at, st.v, marked, h)


# -- prepotential by quadrature ------------------------------------------------------

def prepotential_rhs(P, du, marked: int = 0) -> Callable:
    """Derivative of (t, H, G, F) along du, H_ab = d_a d_b F, G_a = d_a F.

    Returns a function of the packed extra state.
    """
    rec = reconstruct(P, marked)
    n = P.shape[0]
    dt = rec.dt @ du

    def f(x):
        H = x[n:n + n * n].reshape(n, n)
        G = x[n + n * n:n + n * n + n]
        dH = np.einsum("abg,g->ab", rec.c, dt)
        return np.concatenate([dt, dH.ravel(), H @ dt, [G @ dt]])

    return f


def _extra_size(n):
    return n + n * n + n + 1


def integrate_prepotential_family(psi_fn: Callable, path: Sequence, marked: int = 0,
                                  tol: float = 1e-11) -> np.ndarray:
    """(t, H, G, F) integrated along a polyline in canonical coordinates, zero at the start.

    ``psi_fn(u)`` returns the transition frame at u.
    """
    pts = [np.asarray(p, complex) for p in path]
    n = len(pts[0])
    x = np.zeros(_extra_size(n), dtype=complex)
    for a, b in zip(pts[:-1], pts[1:]):
        du = b - a

        def rhs(tau, y, a=a, du=du):
            return prepotential_rhs(np.asarray(psi_fn(a + tau.real * du)), du, marked)(y)

        x = ode_flow(rhs, CPath.segment(0.0, 1.0), x, tol=tol)
    return x


def unpack_prepotential(x, n) -> tuple:
    return x[:n], x[n:n + n * n].reshape(n, n), x[n + n * n:n + n * n + n], x[-1]


def integrate_prepotential(lift: Lift, start: LiftState, path: Sequence, marked: int = 0) -> tuple:
    """Transport the lift along ``path`` while integrating (t, H, G, F); returns (state, t, F)."""
    def extra_rhs(lf, st, v, dv):
        return prepotential_rhs(lf.psi_hat(st), dv, marked)(st.extra)

    st = lift.transport(path[-1], path=path, start=start, extra_rhs=extra_rhs,
                        extra0=np.zeros(_extra_size(4), complex))
    t, H, G, F = unpack_prepotential(st.extra, 4)
    return st, t, F


@dataclass(frozen=True)
class GridSample:
    v: np.ndarray
    t: np.ndarray
    F: complex
    F_alt: complex


def prepotential_grid(lift: Lift, base, axes: Sequence, marked: int = 0, tol: float = 1e-6) -> list:
    """F on a two-parameter grid v = base + x e_3 + y e_4, integrated along two orders of legs.

    ``axes`` = (xs, ys).  Raises NonClosedForms when the two paths disagree by more than ``tol``.
    """
    base = np.asarray(base, complex)
    st0 = lift.transport(base)
    xs, ys = axes
    out = []
    for x in xs:
        for y in ys:
            p1 = base + np.array([0, 0, x, 0])
            p2 = base + np.array([0, 0, 0, y])
            end = base + np.array([0, 0, x, y])
            path1 = [base] + ([p1] if x else []) + ([end] if y else [])
            path2 = [base] + ([p2] if y else []) + ([end] if x else [])
            if len(path1) == 1:
                out.append(GridSample(end, np.zeros(4, complex), 0j, 0j))
                continue
            _, t1, F1 = integrate_prepotential(lift, st0, path1, marked)
            _, t2, F2 = integrate_prepotential(lift, st0, path2, marked)
            if abs(F1 - F2) > tol * max(1.0, abs(F1)) or np.max(np.abs(t1 - t2)) > tol:
                raise NonClosedForms(f"path dependence {abs(F1 - F2):.2e} at v = {end}")
            out.append(GridSample(end, t1, F1, F2))
    return out


@dataclass(frozen=True)
class ChartReport:
    v: np.ndarray
    s: complex
    eps: complex
    linear: float
    euler: float
    kappa: complex
    metric_off: float
    diagonalization: float
    wdvv: float
    closure: float

    def row(self) -> dict:
        return {"linear": self.linear, "euler": self.euler, "metric_off": self.metric_off,
                "diagonalization": self.diagonalization, "wdvv": self.wdvv, "closure": self.closure}


def verify_chart(lift: Lift, st: LiftState, h: float = 1e-5, marked: int = 0) -> ChartReport:
    """All pointwise checks at one chart from a single set of stencil transports."""
    P = lift.psi_hat(st)
    W = lift.w_matrix(st)
    Ws = side_matrices4(W, st.v)
    scale = max(1.0, float(np.max(np.abs(P))))
    derivs, dforms = [], []
    for i in range(4):
        Ps = [lift.psi_hat(x) for x in lift.stencil(st, i, (-2, -1, 1, 2), h)]
        derivs.append((Ps[0] - 8 * Ps[1] + 8 * Ps[2] - Ps[3]) / (12 * h))
        F = [reconstruct(x, marked).dt for x in Ps]
        dforms.append((F[0] - 8 * F[1] + 8 * F[2] - F[3]) / (12 * h))
    lin = max(float(np.max(np.abs(derivs[i] - Ws[i] @ P))) for i in range(4)) / scale
    U = np.diag(st.v)
    eul = float(np.max(np.abs(sum(st.v[i] ** 2 * derivs[i] for i in range(4)) - (U @ W + W @ U) @ P))) / scale
    rec = reconstruct(P, marked)
    clos = max(float(np.max(np.abs(dforms[j][:, i] - dforms[i][:, j])))
               for i in range(4) for j in range(i + 1, 4)) / max(1.0, float(np.max(np.abs(rec.dt))))
    kappa, off = metric_pattern(P)
    p = chart_params(st.v)
    return ChartReport(st.v.copy(), p.s, p.eps, lin, eul, kappa, off, diagonalization_residual(lift, st),
                       reconstruction_wdvv(rec), clos)


def lift_from_state(state: DEState, mu: complex, eps0: float = 10.0, sign: int = 1, tol: float = 1e-12) -> Lift:
    """Lift of generic initial data (s, a, b, c); mu must satisfy mu^2 = -(a^2 + b^2 + c^2)."""
    return Lift(state.s, frame_from_state(state, mu), mu, eps0, sign, tol)
