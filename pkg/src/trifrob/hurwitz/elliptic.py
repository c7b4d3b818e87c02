"""Genus-one double covers: periods by contour quadrature and the matrices V, W.

Three finite branch points:  rho^2 = (l - u1)(l - u2)(l - u3),  eta_i = 1/(2 w1 u_ij u_ik).
Four finite branch points:   rho^2 = prod (l - v_i),            eta_i = 2/(W1^2 v_ij v_ik v_il).

w1 and W1 are a-periods, the a-cycle encircling the segment [u1, u2] (resp.
[v1, v2]) on a fixed sheet.  Square roots along the loop are continued with a
branch tracker, so the loop may be deformed around branch points freely.

On the normalized chart (0, 1, s) the rotation matrix is

    a = I(s)/(2 sqrt(-s)),  b = -(I(s) - 1)/(2 sqrt(s - 1)),  c = (I(s) - s)/(2 sqrt(s(1 - s))),

with I(s) = (1/w1) loop-integral of l dl/(2 rho), principal square roots.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import elliprf

from ..darboux_egoroff import CanonicalChart, DEState, align_signs, lift_to_w, rotation_coefficients, v_from_gamma
from ..errors import BranchCut, BranchInconsistency, CoincidentCoordinates, DomainViolation
from ..numkit import BranchTracker, CPath, contour_quadrature, ellipse_loop

QUAD_TOL = 1e-13
SLOT_ZONE = 0.02


def _slot_loop(p: complex, side: int, margin: float = 0.25) -> CPath:
    """Counterclockwise loop around [0, 1] leaving out a point p close to the segment.

    The loop is notched at Re p, the notch opening upward (side = +1) or
    downward (side = -1), so p is outside.  For real p this is the
    limit of the ordinary loop with p moved off the segment to the side.
    """
    x, y = p.real, p.imag
    w = 0.5 * min(x, 1 - x, 0.1)
    m = margin
    if side > 0:
        pts = [-m - m * 1j, 1 + m - m * 1j, 1 + m + m * 1j,
               x + w + m * 1j, x + w + (y - w) * 1j, x - w + (y - w) * 1j, x - w + m * 1j, -m + m * 1j]
    else:
        pts = [-m + m * 1j, -m - m * 1j, x - w - m * 1j, x - w + (y + w) * 1j,
               x + w + (y + w) * 1j, x + w - m * 1j, 1 + m - m * 1j, 1 + m + m * 1j]
    return CPath.polygon(pts)


def unit_segment_loop(avoid, side: int = 1) -> CPath:
    """A counterclockwise loop around [0, 1] with every point of ``avoid`` outside."""
    avoid = [complex(p) for p in avoid]
    for p in avoid:
        if min(abs(p), abs(p - 1)) < 1e-9:
            raise CoincidentCoordinates("a branch point coincides with an end of the cycle")
    near = [p for p in avoid if SLOT_ZONE < p.real < 1 - SLOT_ZONE and abs(p.imag) < SLOT_ZONE]
    if len(near) > 1:
        raise DomainViolation("more than one branch point close to the cycle")
    if near:
        p = near[0]
        sd = int(np.sign(p.imag)) if p.imag != 0 else side
        loop = _slot_loop(p, sd)
        others = [q for q in avoid if q != p]
        for q in others:
            if abs(q - 0.5) < 1.0:
                raise DomainViolation("branch points too crowded for the notched cycle")
        return loop
    dist = min((_dist_to_unit_segment(p) for p in avoid), default=1.0)
    m = min(0.3, 0.5 * dist)
    if m < 1e-7:
        raise BranchCut("a branch point sits on the cycle")
    return ellipse_loop(0.5, 0.5 + m, m / (0.5 + m), n=96)


def _dist_to_unit_segment(p: complex) -> float:
    x = min(1.0, max(0.0, p.real))
    return abs(p - x)


def loop_integral(numerator, roots, loop: CPath, tol: float = QUAD_TOL) -> complex:
    """Loop integral of numerator(l) dl / sqrt(prod(l - r)), the root continued along the loop.

    The sheet is fixed at the loop's start z0 by sqrt(prod(z0 - r)) = prod sqrt(z0 - r),
    principal square roots factor by factor.
    """
    roots = np.asarray(roots, dtype=complex)
    br = BranchTracker(max_jump=1.0)

    def f(z):
        return numerator(z) / br.sqrt(np.prod(z - roots), "rho")

    start = loop.start
    r0 = np.prod(np.sqrt(start - roots))
    br.seed("rho", np.prod(start - roots), r0)
    val = contour_quadrature(f, loop, tol=tol, tracker=br)
    br.begin()
    r1 = br.sqrt(np.prod(start - roots), "rho")
    if abs(r1 - r0) > 1e-6 * abs(r0):
        raise BranchInconsistency("the square root does not close up along the loop")
    return val


def _check_s(s: complex):
    s = complex(s)
    if not np.isfinite(s):
        raise DomainViolation("s must be finite")
    if abs(s) < 1e-12 or abs(s - 1) < 1e-12:
        raise DomainViolation("s must differ from 0 and 1")
    return s


@dataclass(frozen=True)
class PeriodData:
    s: complex
    omega: complex      # loop integral of dl/(2 rho)
    ibar: complex       # (1/omega) loop integral of l dl/(2 rho)


def elliptic_period_data(s: complex, side: int = 1) -> PeriodData:
    """(w1, I(s)) on the curve rho^2 = l(l - 1)(l - s).

    For real s in (0, 1) the cycle is taken with s displaced to the ``side``
    (+1: upper half plane) of the segment.
    """
    s = _check_s(s)
    loop = unit_segment_loop([s], side)
    roots = (0.0, 1.0, s)
    w = loop_integral(lambda z: 0.5, roots, loop)
    i1 = loop_integral(lambda z: 0.5 * z, roots, loop)
    return PeriodData(s, w, i1 / w)


def carlson_omega(s: complex) -> complex:
    """Independent evaluation -2 R_F(0, s - 1, s) of the a-period (principal branches).

    Real s in (0, 1) is read as s + i0, matching the default cycle.
    """
    s = complex(s)
    if s.imag == 0:
        s = complex(s.real, 1e-300)
    return -2 * complex(elliprf(0j, s - 1, s))


def elliptic_v(s: complex) -> DEState:
    """(s, a, b, c) of the three-point genus-one metric; principal square roots, Im s != 0."""
    s = _check_s(s)
    if abs(s.imag) <= 1e-14 * max(1.0, abs(s)):
        raise BranchCut("real s lies on a cut of the principal square roots")
    I = elliptic_period_data(s).ibar
    a = I / (2 * np.sqrt(-s))
    b = -(I - 1) / (2 * np.sqrt(s - 1))
    c = (I - s) / (2 * np.sqrt(s * (1 - s)))
    return DEState(s, a, b, c)


def eta3(u, omega: complex | None = None) -> np.ndarray:
    """eta_i = 1/(2 w1^2 u_ij u_ik), w1 the a-period of the curve with branch points u.

    This is Res phi^2/dl at the branch points for phi = dl/(2 w1 rho).
    """
    u = np.asarray(u, dtype=complex)
    if omega is None:
        omega = three_point_omega(u)
    out = np.empty(3, dtype=complex)
    for i in range(3):
        j, k = [m for m in range(3) if m != i]
        out[i] = 1.0 / (2 * omega ** 2 * (u[i] - u[j]) * (u[i] - u[k]))
    return out


def three_point_omega(u) -> complex:
    u = np.asarray(u, dtype=complex)
    d = u[1] - u[0]
    loop = unit_segment_loop([(u[2] - u[0]) / d])
    # substitute l = u1 + d z: dl/(2 rho) = d^{-1/2} dz/(2 rho_bar)
    rb = loop_integral(lambda z: 0.5, (0.0, 1.0, (u[2] - u[0]) / d), loop)
    return rb / np.sqrt(d)


def four_point_omega(v, loop: CPath | None = None) -> complex:
    """W1 = loop integral of dl/rho around [v1, v2] (in the normalized variable)."""
    v = np.asarray(v, dtype=complex)
    d = v[1] - v[0]
    P, Q = (v[2] - v[0]) / d, (v[3] - v[0]) / d
    if loop is None:
        loop = unit_segment_loop([P, Q])
    # l = v1 + d z: dl/rho = d^{-1} dz/rho_bar (sign fixed by the root continuation)
    return loop_integral(lambda z: 1.0, (0.0, 1.0, P, Q), loop) / d


def eta4(v, loop: CPath | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    W = four_point_omega(v, loop)
    out = np.empty(4, dtype=complex)
    for i in range(4):
        p = np.prod([v[i] - v[j] for j in range(4) if j != i])
        out[i] = 2.0 / (W * W * p)
    return out


def s_eps_of_v(v) -> tuple:
    v = np.asarray(v, dtype=complex)
    s = (v[2] - v[0]) * (v[3] - v[1]) / ((v[1] - v[0]) * (v[3] - v[2]))
    eps = (v[1] - v[3]) / (v[1] - v[0])
    return s, eps


def jbar1(s: complex, eps: complex) -> complex:
    """(1/W1) loop integral of dl/(l rho) on rho^2 = l(l - 1)(l - P)(l - Q)."""
    P = s * (eps - 1) / (eps - s)
    Q = 1 - eps
    loop = unit_segment_loop([P, Q])
    roots = (0.0, 1.0, P, Q)
    W = loop_integral(lambda z: 1.0, roots, loop)
    return loop_integral(lambda z: 1.0 / z, roots, loop) / W


def ibar1(s: complex) -> complex:
    """(1/w1) loop integral of dl/(2 l rho) on rho^2 = l(l - 1)(l - s)."""
    loop = unit_segment_loop([s])
    roots = (0.0, 1.0, s)
    w = loop_integral(lambda z: 0.5, roots, loop)
    return loop_integral(lambda z: 0.5 / z, roots, loop) / w


@dataclass(frozen=True)
class EllipticCheck:
    s: complex
    eps: complex
    w_residual: float
    omega_identity_residual: float
    jbar_residual: float
    jbar_limit_residual: float
    signs: np.ndarray

    def summary(self) -> dict:
        return {"W": self.w_residual, "omega_identity": self.omega_identity_residual,
                "jbar1": self.jbar_residual, "jbar1_limit": self.jbar_limit_residual}


def omega_identity_residual(v, h: float = 1e-4) -> float:
    """|sum v_i^2 d_i W1 + (1/2) sum v_i W1| / |W1|, derivative along the Euler-squared field."""
    v = np.asarray(v, dtype=complex)
    d = v ** 2
    dd = v[1] - v[0]
    loop = unit_segment_loop([(v[2] - v[0]) / dd, (v[3] - v[0]) / dd])

    def om(x):
        w = v + x * d
        return four_point_omega(w, loop)

    vals = [om(k * h) for k in (-2, -1, 1, 2)]
    der = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
    W0 = four_point_omega(v, loop)
    return float(abs(der + 0.5 * np.sum(v) * W0) / abs(W0))


def elliptic_w_check(v, h: float = 1e-4, eps_large: float = 1e9) -> EllipticCheck:
    """Compare the four-point rotation matrix with the lift of the three-point one."""
    v = np.asarray(v, dtype=complex)
    chart = CanonicalChart(tuple(v))
    s, eps = s_eps_of_v(v)
    if abs(s.imag) <= 1e-12 * max(1.0, abs(s)):
        raise BranchCut("s(v) is real; the three-point data uses principal roots off the real axis")
    d = v[1] - v[0]
    loop = unit_segment_loop([(v[2] - v[0]) / d, (v[3] - v[0]) / d])
    G = rotation_coefficients(lambda w: eta4(w, loop), chart, h)
    Wn = v_from_gamma(G, chart)
    W = lift_to_w(elliptic_v(s))
    D, res = align_signs(Wn, W)
    j = jbar1(s, eps)
    i1 = ibar1(s)
    jres = abs(j - (eps * i1 - 1) / (eps - 1))
    lim = abs(jbar1(s, eps_large) - i1)
    return EllipticCheck(s, eps, res, omega_identity_residual(v, h), float(jres), float(lim), np.diag(D))
