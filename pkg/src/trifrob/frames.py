"""Transition frames Psi (rows: canonical coordinates, columns: flat directions)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .darboux_egoroff import CanonicalChart
from .errors import SingularFrame, TrifrobError
from .schema import complex_to_json, matrix_to_json


@dataclass(frozen=True)
class TransitionFrame:
    psi: np.ndarray
    chart: CanonicalChart
    mu: np.ndarray
    marked: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex)
        n = self.chart.n
        if psi.shape != (n, n):
            raise TrifrobError(f"frame shape {psi.shape} does not match chart dimension {n}")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "mu", np.asarray(self.mu, dtype=complex).reshape(n))
        if not 0 <= self.marked < n:
            raise TrifrobError("marked column out of range")

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def mu_hat(self) -> np.ndarray:
        return np.diag(self.mu)

    def inverse(self) -> np.ndarray:
        if abs(np.linalg.det(self.psi)) < 1e-300 or np.linalg.cond(self.psi) > 1e14:
            raise SingularFrame("transition frame is singular")
        return np.linalg.inv(self.psi)

    def gram(self) -> np.ndarray:
        return self.psi.T @ self.psi

    def to_json(self) -> dict:
        return {"chart": [complex_to_json(u) for u in self.chart.coords],
                "mu": [complex_to_json(m) for m in self.mu],
                "marked_column": self.marked + 1,
                "psi": matrix_to_json(self.psi)}
