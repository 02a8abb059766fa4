"""Smooth weights accepting real or complex arguments."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Bump:
    """exp(1 - 1/(1 - s^2)) on (a, b), s the affine image in (-1, 1); peak value 1 at the centre."""

    a: float
    b: float

    def s(self, y):
        return (2 * np.asarray(y) - (self.a + self.b)) / (self.b - self.a)

    def __call__(self, y):
        s = self.s(y)
        complex_in = np.iscomplexobj(s)
        out = np.zeros(np.shape(s), dtype=complex if complex_in else float)
        inside = np.abs(np.real(s)) < 1
        si = s[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - si * si))
        return out

    def d2_over_value(self, y) -> np.ndarray:
        """w''/w, which controls the first stationary-phase correction."""
        s = np.asarray(self.s(y), dtype=float)
        f1 = -2 * s / (1 - s * s) ** 2
        f2 = -2 * (1 + 3 * s * s) / (1 - s * s) ** 3
        return (f2 + f1 * f1) * (2 / (self.b - self.a)) ** 2


@dataclass(frozen=True)
class GaussianWindow:
    """exp(-((y - centre)/width)^2), entire; treated as supported where it exceeds machine epsilon."""

    centre: float
    width: float

    def __call__(self, y):
        return np.exp(-(((np.asarray(y) - self.centre) / self.width) ** 2))

    @property
    def support(self) -> tuple[float, float]:
        r = 8.0 * self.width  # exp(-64) ~ 1e-28, far below what gamma growth can amplify
        return self.centre - r, self.centre + r
