"""Closed-form data of the three-dimensional A3 example.

The rescaled transition matrix Phi is an algebraic function of the parameter
t, with s = t (2 + t)^3 / (1 + 2t)^3 and grading spectrum diag(-1/4, 0, 1/4).
It is written through four radicals

    r_a = (2 + t)^{1/2},  r_b = (t - 1)^{1/2},  r_c = (1 + 2t)^{1/4},  r_d = (1 - t)^{1/2},

all principal at the anchor t = 2 and continued along a path from there.
The same r_c enters the rescaled quartic superpotential whose four roots
feed the Appell-type fundamental solution of the 2x2 Fuchsian system.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..darboux_egoroff import DEState, abc_from_v
from ..errors import BranchInconsistency, DomainViolation, RootCollision
from ..numkit import BranchTracker, quartic_roots
from .appell import appell_f, appell_g

MU = -0.25
MU_HAT = np.diag([-0.25, 0.0, 0.25])
T_ANCHOR = 2.0
BRANCH_POINTS = (-2.0, 1.0, -0.5)
EXCLUDED_T = (-2.0, -1.0, -0.5, 0.0, 1.0)


def s_of_t(t: complex) -> complex:
    t = complex(t)
    if abs(1 + 2 * t) < 1e-14:
        raise DomainViolation("1 + 2t vanishes")
    return t * (2 + t) ** 3 / (1 + 2 * t) ** 3


def t_roots(s: complex) -> np.ndarray:
    """The four solutions t of s(t) = s."""
    s = complex(s)
    return quartic_roots(1, 6 - 8 * s, 12 - 12 * s, 8 - 6 * s, -s)


def t_from_s(s: complex, t_ref: complex | None = None) -> complex:
    """A solution of s(t) = s: nearest to ``t_ref``, else the one with largest real part."""
    r = t_roots(s)
    if t_ref is None:
        return complex(r[np.argmax(r.real)])
    return complex(r[np.argmin(np.abs(r - t_ref))])


def _check_t(t: complex):
    for p in EXCLUDED_T:
        if abs(t - p) < 1e-9:
            raise DomainViolation(f"t = {t} is an excluded point")
    s = s_of_t(t)
    if abs(s) < 1e-12 or abs(s - 1) < 1e-12:
        raise DomainViolation(f"s(t) = {s} is degenerate")


def default_t_path(t: complex) -> list:
    """Waypoints from the anchor t = 2 to ``t``: straight when safe, else via the upper half plane."""
    t = complex(t)
    a = complex(T_ANCHOR)
    if _segment_clearance(a, t) > 0.05:
        return [a, t]
    sigma = 1.0 if t.imag >= 0 else -1.0
    return [a, a + 2j * sigma, complex(t.real, 2 * sigma), t]


def _segment_clearance(a, b) -> float:
    d = b - a
    out = np.inf
    for p in BRANCH_POINTS:
        tau = 0.0 if d == 0 else min(1.0, max(0.0, ((p - a) * np.conj(d)).real / abs(d) ** 2))
        out = min(out, abs(a + tau * d - p))
    return out


@dataclass(frozen=True)
class Radicals:
    t: complex
    ra: complex
    rb: complex
    rc: complex
    rd: complex


def _eval_radicals(t, br) -> Radicals:
    return Radicals(t, br.sqrt(2 + t, "ra"), br.sqrt(t - 1, "rb"),
                    br.power(1 + 2 * t, 0.25, "rc"), br.sqrt(1 - t, "rd"))


def a3_radicals(t: complex, path: Sequence[complex] | None = None) -> Radicals:
    """Radicals at ``t``, continued from principal values at t = 2 along ``path``."""
    t = complex(t)
    _check_t(t)
    pts = [complex(p) for p in (path if path is not None else default_t_path(t))]
    if abs(pts[0] - T_ANCHOR) > 1e-14 or abs(pts[-1] - t) > 1e-14:
        raise ValueError("t-path must run from 2 to t")
    br = BranchTracker(max_jump=0.6)
    cur = pts[0]
    _eval_radicals(cur, br)
    for nxt in pts[1:]:
        while cur != nxt:
            clear = min(abs(cur - p) for p in BRANCH_POINTS)
            if clear < 1e-10:
                raise DomainViolation("t-path runs through a branch point")
            step = 0.2 * clear
            cur = nxt if abs(nxt - cur) <= step else cur + step * (nxt - cur) / abs(nxt - cur)
            _eval_radicals(cur, br)
    return _eval_radicals(t, br)


def phi_from_radicals(r: Radicals) -> np.ndarray:
    t, ra, rb, rc, rd = r.t, r.ra, r.rb, r.rc, r.rd
    return np.array([
        [rc / (2 * ra), (-1 - t) / (ra * rc ** 2), (1 + 3 * t + t * t) / (ra * rc ** 5)],
        [rc / (2 * rb), t / (rb * rc ** 2), (-1 - t + t * t) / (rb * rc ** 5)],
        [rc ** 3 / (2 * rd * ra), 1 / (rd * ra), (1 - t - t * t) / (rd * ra * rc ** 3)],
    ])


def a3_phi(t: complex, path: Sequence[complex] | None = None) -> np.ndarray:
    """Rescaled transition matrix Phi at chart (0, 1, s(t))."""
    return phi_from_radicals(a3_radicals(t, path))


def a3_abc(t: complex, path: Sequence[complex] | None = None) -> DEState:
    """(s, a, b, c) read off V = Phi mu_hat Phi^{-1}."""
    Phi = a3_phi(t, path)
    V = Phi @ MU_HAT @ np.linalg.inv(Phi)
    return DEState(s_of_t(t), *abc_from_v(V))


def quartic_coefficients(r: Radicals, eps: complex) -> tuple:
    """Coefficients (highest first) of the rescaled quartic minus eps."""
    t, rc = r.t, r.rc
    return (1.0, 0.0, -2 * (1 + t + t * t) / rc ** 6, 4 * t * (1 + t) / rc ** 9,
            (1 + t) ** 2 * (1 + 4 * t + t * t) / rc ** 12 - eps)


def critical_values(r: Radicals, eps: complex) -> np.ndarray:
    c = np.array(quartic_coefficients(r, eps), dtype=complex)
    crit = np.roots(np.polyder(c))
    return np.polyval(c, crit)


def residues_b(Phi: np.ndarray, mu: float = MU) -> list:
    return [mu * np.array([[P[1] ** 2, 2 * P[1] * P[2]], [P[0] * P[1], 2 * P[0] * P[2]]]) for P in Phi]


def chi_closed(xi: np.ndarray, br=None, key=(), columns=(0, 1)) -> np.ndarray:
    """Columns chi_(i) (default i = 1, 2) from ordered roots xi, indices cyclic mod 4."""
    if br is None:
        br = BranchTracker()
    cols = []
    for i in columns:
        def X(a, b):
            return xi[a % 4] - xi[b % 4]
        x1 = X(i + 1, i)
        x = x1 / X(i + 2, i)
        y = x1 / X(i + 3, i)
        k = key + (i,)
        pre = 1.0 / (br.sqrt(x1, k + ("pre1",)) * br.power(X(i + 2, i) * X(i, i + 3), 0.75, k + ("pre2",)))
        gv = appell_g(x, y, br, k)
        fv = appell_f(x, y, br, k)
        cols.append(pre * np.array([x1 * fv + 2 * xi[i] * gv, gv]))
    return np.array(cols).T


def _min_separation(xi):
    return min(abs(xi[i] - xi[j]) for i in range(4) for j in range(i + 1, 4))


@dataclass
class A3Chi:
    """Closed-form solution at one (eps, t) with the root ordering that makes it valid."""

    eps: complex
    radicals: Radicals
    order: tuple
    chi: np.ndarray
    residual: float
    tracker: BranchTracker
    xi: np.ndarray

    def continue_to(self, eps: complex) -> np.ndarray:
        """Move to a nearby eps (same t), continuing roots and branches; returns chi."""
        eps = complex(eps)
        xi = _ordered_roots(self.radicals, eps, ref_roots=self.xi)
        chi = chi_closed(xi, self.tracker)
        self.eps, self.xi, self.chi = eps, xi, chi
        return chi

    def nearby(self, eps: complex, t: complex) -> np.ndarray:
        """chi at a nearby (eps, t), continued from this point without moving it."""
        r = a3_radicals(t)
        xi = _ordered_roots(r, complex(eps), ref_roots=self.xi)
        snap = self.tracker.snapshot()
        try:
            return chi_closed(xi, self.tracker)
        finally:
            self.tracker.restore(snap)

    def all_columns(self) -> np.ndarray:
        """The four cyclic columns chi_(1..4) at the current point, on fresh principal branches."""
        return chi_closed(self.xi, BranchTracker(), columns=(0, 1, 2, 3))

    @property
    def t(self):
        return self.radicals.t

    @property
    def s(self):
        return s_of_t(self.radicals.t)


def _ordered_roots(r, eps, ref_roots=None, order=None):
    xi = quartic_roots(*quartic_coefficients(r, eps))
    if _min_separation(xi) < 1e-8:
        raise RootCollision(f"quartic roots collide at eps = {eps}")
    if ref_roots is not None:
        idx = [int(np.argmin(np.abs(xi - z))) for z in ref_roots]
        if len(set(idx)) != 4:
            raise BranchInconsistency("root tracking is ambiguous; take a smaller step")
        return xi[idx]
    return xi[list(order)]


def _chi_residual(r, eps, order, h=1e-5):
    """Relative residual of d chi/d eps - B(eps) chi, differences continued from the centre."""
    br = BranchTracker(max_jump=0.5)
    xi0 = _ordered_roots(r, eps, order=order)
    chi0 = chi_closed(xi0, br)
    snap = br.snapshot()
    vals = {}
    for k in (-2, -1, 1, 2):
        br.restore(snap)
        vals[k] = chi_closed(_ordered_roots(r, eps + k * h, ref_roots=xi0), br)
    br.restore(snap)
    d = (vals[-2] - 8 * vals[-1] + 8 * vals[1] - vals[2]) / (12 * h)
    s = s_of_t(r.t)
    B = residues_b(phi_from_radicals(r))
    M = B[0] / eps + B[1] / (eps - 1) + B[2] / (eps - s)
    scale = max(np.max(np.abs(chi0)), 1e-300)
    return float(np.max(np.abs(d - M @ chi0)) / scale), chi0, br, abs(np.linalg.det(chi0)) / scale ** 2


def a3_chi(eps: complex, t: complex, path: Sequence[complex] | None = None,
           order: Sequence[int] | None = None, h: float = 1e-5, accept: float = 1e-5) -> A3Chi:
    """Appell-type fundamental solution of the 2x2 system at (eps, s(t)).

    The cyclic labelling of the four roots is not fixed by the formulas; when
    ``order`` is None every permutation is tried and the one with the smallest
    residual and a non-degenerate Wronskian is kept.
    """
    eps = complex(eps)
    r = a3_radicals(t, path)
    s = s_of_t(r.t)
    if min(abs(eps), abs(eps - 1), abs(eps - s)) < 1e-9:
        raise RootCollision("eps sits at a pole of the system")
    orders = [tuple(order)] if order is not None else list(itertools.permutations(range(4)))
    best = None
    for o in orders:
        try:
            res, chi0, br, wr = _chi_residual(r, eps, o, h)
        except BranchInconsistency:
            continue
        if wr < 1e-8:
            continue
        if best is None or res < best[0]:
            best = (res, o, chi0, br)
    if best is None or best[0] > accept:
        got = "none" if best is None else f"{best[0]:.2e}"
        raise BranchInconsistency(f"no root labelling solves the system (best residual {got})")
    return A3Chi(eps, r, best[1], best[2], best[0], best[3], _ordered_roots(r, eps, order=best[1]))


def phi_orthonormality_defect(Phi: np.ndarray) -> float:
    return float(np.max(np.abs(Phi.T @ Phi - np.fliplr(np.eye(3)))))
