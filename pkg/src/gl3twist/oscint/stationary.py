"""Derivative-test bounds, first-order stationary phase, and the closed-form stationary points."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateSecondDerivative, NoStationaryPoint, OutOfWindow, RegimeViolation
from .quadrature import ArrayFn, PhaseSpec


def derivative_test_bound(a: float, b: float, Z: float, U: float, Y: float, Q_scale: float,
                          R: float, A: float) -> float:
    """(b - a) Z (Y/(R^2 Q^2) + 1/(R Q) + 1/(R U))^A for a phase with |phase'| >= R."""
    for name, v in (("Z", Z), ("U", U), ("Y", Y), ("Q_scale", Q_scale), ("R", R)):
        if v <= 0:
            raise ValueError(f"{name} must be positive")
    if A < 0 or b <= a:
        raise ValueError("need A >= 0 and b > a")
    base = Y / (R * R * Q_scale * Q_scale) + 1 / (R * Q_scale) + 1 / (R * U)
    return (b - a) * Z * base**A


def find_stationary_point(phase: PhaseSpec, interval: tuple[float, float],
                          seed: float | None = None, max_iter: int = 60) -> float:
    """The unique root of phase' in the interval: Newton from ``seed`` kept inside a bisection bracket."""
    a, b = interval
    fa, fb = float(phase.d1(np.array(a))), float(phase.d1(np.array(b)))
    if fa == 0:
        return a
    if fb == 0:
        return b
    if fa * fb > 0:
        raise NoStationaryPoint(f"phase' keeps one sign on [{a}, {b}]")
    lo, hi = (a, b) if fa < 0 else (b, a)  # phase'(lo) < 0 < phase'(hi)
    y = 0.5 * (a + b) if seed is None or not min(a, b) < seed < max(a, b) else float(seed)
    for _ in range(max_iter):
        g = float(phase.d1(np.array(y)))
        if g == 0:
            return y
        if g < 0:
            lo = y
        else:
            hi = y
        h = float(phase.d2(np.array(y)))
        step = y - g / h if h != 0 else None
        if step is None or not min(lo, hi) < step < max(lo, hi):
            step = 0.5 * (lo + hi)
        if abs(step - y) <= 4e-16 * max(1.0, abs(y)):
            return step
        y = step
    return y


def stationary_phase_main(weight: ArrayFn, phase: PhaseSpec, interval: tuple[float, float],
                          seed: float | None = None) -> complex:
    """sqrt(2 pi/|phase''(y0)|) exp(i phase(y0) + i sgn(phase''(y0)) pi/4) weight(y0)."""
    y0 = find_stationary_point(phase, interval, seed)
    h = float(phase.d2(np.array(y0)))
    if h == 0 or not math.isfinite(h):
        raise DegenerateSecondDerivative(f"phase''({y0}) = {h}")
    amp = math.sqrt(2 * math.pi / abs(h)) * complex(np.asarray(weight(np.array([y0])))[0])
    return amp * complex(np.exp(1j * (float(phase.phase(np.array(y0))) + math.copysign(math.pi / 4, h))))


# -- the y-integral of the character-sum correlation ---------------------------

@dataclass(frozen=True)
class YSeries:
    y0: float
    y1: float
    y2: float
    g1: float
    g2: float
    g2_printed: float  # the coefficient -(4 pi/(9 t)) y0^(2/3) as usually displayed

    @property
    def y_approx(self) -> float:
        return self.y0 + self.y1 + self.y2


def y_phase(C: float, D: float, t: float, u: float) -> PhaseSpec:
    """2 pi g(y) with g(y) = -t log(y)/(2 pi) + D y + 3 C (u y)^(1/3)."""
    cu = C * u ** (1 / 3)
    return PhaseSpec(
        lambda y: -t * np.log(y) + 2 * np.pi * (D * y + 3 * cu * np.power(y, 1 / 3)),
        lambda y: -t / y + 2 * np.pi * (D + cu * np.power(y, -2 / 3)),
        lambda y: t / y**2 - 2 * np.pi * (2 / 3) * cu * np.power(y, -5 / 3),
    )


def y_stationary_series(C: float, D: float, t: float, u: float) -> YSeries:
    """Perturbative root of g'(y) = 0 around y0 = t/(2 pi D) and the expansion of g(y*).

    Needs D > 0 (so y0 > 0) and |C| <= t^0.9.
    """
    if not (t > 0 and D > 0 and u > 0):
        raise RegimeViolation("need t > 0, u > 0 and D > 0 so that y0 = t/(2 pi D) is positive")
    if abs(C) > t**0.9:
        raise RegimeViolation("perturbation too large: |C| > t^0.9")
    y0 = t / (2 * math.pi * D)
    cu = C * u ** (1 / 3)
    y1 = -2 * math.pi * cu * y0 ** (4 / 3) / t
    y2 = 4 * math.pi**2 * cu**2 * y0 ** (5 / 3) / (3 * t**2)
    g1 = 3 * y0 ** (1 / 3)
    # envelope theorem: d g(y*)/dC = 3 (u y*)^(1/3); differentiate once more at C = 0
    g2 = -math.pi * y0 ** (2 / 3) / t
    return YSeries(y0, y1, y2, g1, g2, -4 * math.pi * y0 ** (2 / 3) / (9 * t))


def y_stationary_newton(C: float, D: float, t: float, u: float) -> tuple[float, float]:
    """(y*, g(y*)) from Newton's method on g'(y) = 0, seeded at y0; g in cycles."""
    ser = y_stationary_series(C, D, t, u)
    cu = C * u ** (1 / 3)
    y = ser.y0
    for _ in range(100):
        gp = -t / (2 * math.pi * y) + D + cu * y ** (-2 / 3)
        gpp = t / (2 * math.pi * y * y) - (2 / 3) * cu * y ** (-5 / 3)
        step = gp / gpp
        y -= step
        if abs(step) <= 1e-16 * y:
            break
    g = -t * math.log(y) / (2 * math.pi) + D * y + 3 * cu * y ** (1 / 3)
    return y, g


def y_series_value(ser: YSeries, C: float, D: float, t: float, u: float, printed: bool = False) -> float:
    """-(t/2 pi) log y0 + D y0 + g1 C u^(1/3) + g2 C^2 u^(2/3)."""
    g2 = ser.g2_printed if printed else ser.g2
    return (-t * math.log(ser.y0) / (2 * math.pi) + D * ser.y0 + ser.g1 * C * u ** (1 / 3)
            + g2 * C * C * u ** (2 / 3))


# -- the v-integral of the dual sum ----------------------------------------------------------

@dataclass(frozen=True)
class VStationary:
    v0: float
    h_v0: float  # cycles
    h2_v0: float  # cycles per unit v squared


def v_phase_cycles(n1: float, n2: float, N: float, y: float, Q: float, X: float, q: float,
                   p_lambda: float, eta: int):
    """The v-phase h(v) = eta L v + eta 2 c v^(-1/2), in cycles, with its first two derivatives.

    L = N X y / (Q q p^lam) comes from the additive twist and
    c = (n1^2 n2 Q)^(1/2) / (X^(1/2) q p^lam) from the Voronoi oscillation.
    Returns (h, h', h'', v0) with v0 the closed-form root of h'.
    """
    L = N * X * y / (Q * q * p_lambda)
    c = math.sqrt(n1 * n1 * n2 * Q) / (math.sqrt(X) * q * p_lambda)
    v0 = (n1 * n1 * n2) ** (1 / 3) * Q / (X * (N * y) ** (2 / 3))
    h = lambda v: eta * (L * v + 2 * c / np.sqrt(v))
    h1 = lambda v: eta * (L - c * np.power(v, -1.5))
    h2 = lambda v: eta * 1.5 * c * np.power(v, -2.5)
    return h, h1, h2, v0


def v_stationary(n1: float, n2: float, N: float, y: float, Q: float, X: float, q: float,
                 p_lambda: float, eta: int) -> VStationary:
    """v0, h(v0) and h''(v0) for the v-integral; raises OutOfWindow unless 1/2 <= v0 <= 5/2."""
    if min(n1, n2, N, y, Q, X, q, p_lambda) <= 0:
        raise ValueError("all magnitudes must be positive")
    if eta not in (1, -1):
        raise ValueError("eta must be +1 or -1")
    v0 = (n1 * n1 * n2) ** (1 / 3) * Q / (X * (N * y) ** (2 / 3))
    if not 0.5 <= v0 <= 2.5:
        raise OutOfWindow(f"v0 = {v0} outside [1/2, 5/2]")
    B = (n1 * n1 * n2 * N * y) ** (1 / 3) / (q * p_lambda)
    return VStationary(v0, 3 * eta * B, 1.5 * eta * B / v0**2)
