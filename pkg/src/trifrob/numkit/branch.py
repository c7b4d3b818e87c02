"""Continuous branch selection for multivalued powers.

A :class:`BranchTracker` remembers, for every call site, the logarithm used
at the previous evaluation.  A new evaluation picks the logarithm of the
argument closest to that reference, so powers ``x**p`` vary continuously as
the caller walks along a path.  Call sites are named by an explicit key, or
else by the order of calls inside one evaluation (bracketed by :meth:`begin`).
"""
from __future__ import annotations

import cmath
import math

from ..errors import BranchInconsistency

TWO_PI = 2.0 * math.pi


class BranchTracker:
    """Tracks logarithm branches per call site.

    A call site is named by ``key``; without a key, sites are numbered by the
    order of calls since the last :meth:`begin`.

    Parameters
    ----------
    max_jump : float
        Largest allowed change of arg x between two consecutive evaluations
        of a site.  Larger jumps mean the caller stepped too far
        or too close to a branch point, and raise BranchInconsistency.
    """

    def __init__(self, max_jump: float = 1.2):
        self.max_jump = max_jump
        self._refs: dict = {}
        self._pos = 0

    def begin(self) -> "BranchTracker":
        self._pos = 0
        return self

    def reset(self) -> None:
        self._refs = {}
        self._pos = 0

    def snapshot(self) -> dict:
        return dict(self._refs)

    def restore(self, snap: dict) -> None:
        self._refs = dict(snap)
        self._pos = 0

    def seed(self, key, x: complex, root: complex, p=0.5) -> None:
        """Make ``root`` (one value of x**p) the reference branch at ``key``."""
        L = cmath.log(complex(x))
        n = round(((cmath.log(complex(root)) / p).imag - L.imag) / TWO_PI)
        self._refs[key] = complex(L.real, L.imag + n * TWO_PI)

    def forget(self, prefix) -> None:
        """Drop every key whose tuple form starts with ``prefix``."""
        p = prefix if isinstance(prefix, tuple) else (prefix,)
        for k in [k for k in self._refs if isinstance(k, tuple) and k[:len(p)] == p]:
            del self._refs[k]

    @property
    def depth(self) -> int:
        return len(self._refs)

    def _key(self, key):
        if key is None:
            key = ("#", self._pos)
            self._pos += 1
        return key

    def log(self, x: complex, key=None) -> complex:
        x = complex(x)
        key = self._key(key)
        if x == 0:
            raise BranchInconsistency(f"logarithm of zero at site {key}")
        L = cmath.log(x)
        ref = self._refs.get(key)
        if ref is not None:
            n = round((ref.imag - L.imag) / TWO_PI)
            L = complex(L.real, L.imag + n * TWO_PI)
            if abs(L.imag - ref.imag) > self.max_jump:
                raise BranchInconsistency(
                    f"argument jumped by {abs(L.imag - ref.imag):.3f} rad at site {key}")
        self._refs[key] = L
        return L

    def power(self, x: complex, p, key=None) -> complex:
        """x**p on the continued branch."""
        if complex(x) == 0:
            self._key(key)
            if complex(p).real > 0:
                return 0j
            raise BranchInconsistency("non-positive power of zero")
        return cmath.exp(complex(p) * self.log(x, key))

    def sqrt(self, x: complex, key=None) -> complex:
        return self.power(x, 0.5, key)


def principal_power(x: complex, p) -> complex:
    """Principal value of x**p (cut along the negative real axis)."""
    x = complex(x)
    if x == 0:
        return 0j
    return cmath.exp(complex(p) * cmath.log(x))


class _Principal:
    """Stand-in tracker that always returns principal values."""

    def begin(self):
        return self

    def power(self, x, p, key=None):
        return principal_power(x, p)

    def sqrt(self, x, key=None):
        return principal_power(x, 0.5)

    def log(self, x, key=None):
        return cmath.log(complex(x))

    def snapshot(self):
        return {}

    def restore(self, snap):
        pass


PRINCIPAL = _Principal()
