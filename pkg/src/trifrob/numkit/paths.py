"""Polyline paths in the complex plane and small matrix helpers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import NonFinite, TrifrobError


@dataclass(frozen=True)
class CPath:
    """Polyline through ``waypoints`` (at least two, consecutive ones distinct)."""

    waypoints: tuple

    def __init__(self, waypoints: Iterable[complex]):
        pts = tuple(complex(w) for w in waypoints)
        if len(pts) < 2:
            raise TrifrobError("a path needs at least two waypoints")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise TrifrobError("consecutive waypoints must differ")
        if not all(np.isfinite(z) for z in pts):
            raise NonFinite("non-finite waypoint")
        object.__setattr__(self, "waypoints", pts)

    @classmethod
    def segment(cls, a: complex, b: complex) -> "CPath":
        return cls((a, b))

    @classmethod
    def polygon(cls, vertices: Sequence[complex]) -> "CPath":
        """Closed polyline: the first vertex is repeated at the end."""
        v = list(vertices)
        return cls(v + [v[0]])

    @property
    def start(self) -> complex:
        return self.waypoints[0]

    @property
    def end(self) -> complex:
        return self.waypoints[-1]

    @property
    def length(self) -> float:
        w = np.asarray(self.waypoints)
        return float(np.sum(np.abs(np.diff(w))))

    def segments(self):
        return list(zip(self.waypoints, self.waypoints[1:]))

    def reversed(self) -> "CPath":
        return CPath(self.waypoints[::-1])

    def __add__(self, other: "CPath") -> "CPath":
        if abs(self.end - other.start) > 1e-15 * max(1.0, abs(self.end)):
            raise TrifrobError("paths do not join")
        return CPath(self.waypoints + other.waypoints[1:])


def ellipse_loop(center: complex, semi_major: complex, ratio: float, n: int = 64) -> CPath:
    """Closed polygon approximating an ellipse; ``semi_major`` fixes size and tilt.

    The loop is counterclockwise and starts at ``center + semi_major``.
    """
    th = 2 * np.pi * np.arange(n) / n
    pts = center + semi_major * (np.cos(th) + 1j * ratio * np.sin(th))
    return CPath.polygon(pts)


def as_cmatrix(a, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Validate and return a finite complex 2-d array."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise TrifrobError(f"expected a matrix, got shape {m.shape}")
    if rows is not None and m.shape[0] != rows or cols is not None and m.shape[1] != cols:
        raise TrifrobError(f"expected shape ({rows}, {cols}), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix has non-finite entries")
    return m
