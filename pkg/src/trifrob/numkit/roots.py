"""Roots of quartic polynomials."""
from __future__ import annotations

import numpy as np

from ..errors import Degenerate, NonFinite


def quartic_roots(c4, c3, c2, c1, c0) -> np.ndarray:
    """Four roots of ``c4 z^4 + c3 z^3 + c2 z^2 + c1 z + c0``.

    Companion-matrix eigenvalues, then two Newton corrections per simple root
    (skipped when the derivative is tiny, i.e. near a multiple root).
    """
    c = np.array([c4, c3, c2, c1, c0], dtype=complex)
    if not np.all(np.isfinite(c)):
        raise NonFinite("non-finite coefficient")
    if c[0] == 0:
        raise Degenerate("leading coefficient vanishes")
    m = c / c[0]
    comp = np.zeros((4, 4), dtype=complex)
    comp[0, :] = -m[1:]
    comp[1:, :3] = np.eye(3)
    z = np.linalg.eigvals(comp)
    dm = np.polyder(m)
    scale = max(1.0, float(np.max(np.abs(z))))
    for k in range(4):
        for _ in range(2):
            d = np.polyval(dm, z[k])
            if abs(d) < 1e-6 * scale ** 3:
                break
            step = np.polyval(m, z[k]) / d
            if not np.isfinite(step) or abs(step) > 1e-3 * scale:
                break
            z[k] -= step
    return _merge_clusters(z, m, scale)


def _recon_error(z, m):
    return float(np.max(np.abs(np.poly(z) - m)) / max(1.0, np.max(np.abs(m))))


def _merge_clusters(z, m, scale):
    # A multiple root comes out of the eigensolver split by ~eps**(1/k); the
    # cluster mean is far more accurate and is kept if the fit does not degrade.
    z = z.copy()
    base = _recon_error(z, m)
    used = np.zeros(4, bool)
    for k in range(4):
        if used[k]:
            continue
        cl = [j for j in range(4) if not used[j] and abs(z[j] - z[k]) < 1e-4 * scale]
        used[cl] = True
        if len(cl) < 2:
            continue
        trial = z.copy()
        c = np.mean(z[cl])
        dm = np.polyder(m, len(cl) - 1)
        d1 = np.polyder(dm)
        for _ in range(2):
            dd = np.polyval(d1, c)
            if dd == 0:
                break
            c -= np.polyval(dm, c) / dd
        if abs(c - np.mean(z[cl])) > 1e-4 * scale:
            c = np.mean(z[cl])
        trial[cl] = c
        if _recon_error(trial, m) <= max(1e-13, 10 * base):
            z = trial
    return z


def monic_from_roots(r) -> np.ndarray:
    """Coefficients (highest first) of prod (z - r_i)."""
    return np.poly(np.asarray(r, dtype=complex))
