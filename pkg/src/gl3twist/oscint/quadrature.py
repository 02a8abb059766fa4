"""Oscillation-aware adaptive quadrature and a Filon rule for linear phases."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import spherical_jn

from ..errors import QuadratureFailure

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PhaseSpec:
    """A real phase (in radians) with analytic first and second derivatives."""

    phase: ArrayFn
    d1: ArrayFn
    d2: ArrayFn

    def derivative_mismatch(self, points, step: float = 1e-4) -> float:
        """Largest disagreement between the handles and five-point central differences.

        Errors are measured against the largest handle value over ``points`` so
        that a derivative passing through zero does not blow up the ratio.
        """
        y = np.asarray(points, dtype=float)
        h = step * np.maximum(1.0, np.abs(y))

        def fd(f):
            return (-f(y + 2 * h) + 8 * f(y + h) - 8 * f(y - h) + f(y - 2 * h)) / (12 * h)

        worst = 0.0
        for analytic, numeric in ((self.d1(y), fd(self.phase)), (self.d2(y), fd(self.d1))):
            scale = max(np.abs(analytic).max(), 1e-300)
            worst = max(worst, float(np.abs(analytic - numeric).max() / scale))
        return worst


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    err_estimate: float
    subdivisions: int


@lru_cache(maxsize=8)
def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _panel_sums(f: ArrayFn, a: np.ndarray, b: np.ndarray, n: int, with_abs: bool = False):
    x, w = _gauss(n)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    pts = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=complex).reshape(pts.shape)
    total = (vals * w[None, :]).sum(axis=1) * half
    if with_abs:
        return total, (np.abs(vals) * w[None, :]).sum(axis=1) * half
    return total


def _initial_edges(phase: PhaseSpec | None, a: float, b: float, rad_per_panel: float,
                   min_panels: int) -> np.ndarray:
    if phase is None:
        return np.linspace(a, b, min_panels + 1)
    probe = np.linspace(a, b, 4097)
    speed = np.abs(np.asarray(phase.d1(probe), dtype=float))
    # cumulative total variation of the phase on the probe grid
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(probe))])
    panels = max(min_panels, int(math.ceil(cum[-1] / rad_per_panel)))
    targets = np.linspace(0.0, cum[-1], panels + 1)
    if cum[-1] == 0.0:
        return np.linspace(a, b, panels + 1)
    edges = np.interp(targets, cum, probe)
    edges[0], edges[-1] = a, b
    # fall back to uniform spacing if the map collapsed any panel
    return edges if np.all(np.diff(edges) > 0) else np.linspace(a, b, panels + 1)


def _shifted_path(phase: PhaseSpec, a: float, b: float, lift: float):
    """z(x) = x + i eps(x) with eps = lift * (b-a)/2 * (1 - s^2) * tanh(phase'(x)/G).

    Shifting along sign(phase') makes exp(i phase(z)) decay like exp(-eps |phase'|),
    and near a stationary point the path tilts toward the steepest-descent
    direction.  It meets the real axis at both endpoints, so the weight and
    phase need only be analytic in a neighbourhood of (a, b).
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    probe = np.linspace(a, b, 4097)
    G = math.sqrt(max(float(np.abs(phase.d2(probe)).max()), 1e-300))

    def z_and_dz(x):
        s = (x - mid) / half
        d1 = np.asarray(phase.d1(x), dtype=float)
        d2 = np.asarray(phase.d2(x), dtype=float)
        th = np.tanh(d1 / G)
        env = 1.0 - s * s
        eps = lift * half * env * th
        deps = lift * half * (-2.0 * s / half * th + env * (1.0 - th * th) * d2 / G)
        return x + 1j * eps, 1.0 + 1j * deps

    return z_and_dz


def integrate_osc(weight: ArrayFn, phase: PhaseSpec | None, interval: tuple[float, float],
                  tol: float = 1e-10, order: int = 16, max_panels: int = 2**20,
                  rad_per_panel: float = 2.0, min_panels: int = 8, lift: float = 0.0) -> QuadratureResult:
    """int_a^b weight(y) exp(i phase(y)) dy.

    Panels are laid out so the phase turns by at most ``rad_per_panel`` on
    each, then Gauss-Legendre of order n and 2n are compared panel by panel;
    panels whose share of the error budget is exceeded are bisected.  The
    reported value is the 2n rule and ``err_estimate`` the summed n vs 2n gap.

    With ``lift > 0`` the real segment is replaced by a complex path with the
    same endpoints (see ``_shifted_path``); weight and phase must then accept
    complex arguments.  By Cauchy's theorem the value is unchanged, while the
    integrand becomes exponentially small away from stationary points.
    """
    a, b = map(float, interval)
    if not b > a:
        raise ValueError("interval must have b > a")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if phase is None:
        f = weight
    elif lift > 0:
        path = _shifted_path(phase, a, b, lift)

        def f(x):
            z, dz = path(x)
            return np.asarray(weight(z), dtype=complex) * np.exp(1j * phase.phase(z)) * dz
    else:
        def f(y):
            return np.asarray(weight(y), dtype=complex) * np.exp(1j * np.asarray(phase.phase(y), dtype=float))

    # evaluating exp(i phase) loses about eps * |phase| in absolute terms
    if phase is None:
        phase_mag = 0.0
    else:
        probe = np.linspace(a, b, 257)
        phase_mag = float(np.abs(np.asarray(phase.phase(probe), dtype=float)).max())
    noise_factor = 2 * np.finfo(float).eps * (1.0 + phase_mag)

    if phase is not None and lift > 0:
        edges = _damped_edges(f, phase, a, b, rad_per_panel, min_panels, tol)
    else:
        edges = _initial_edges(phase, a, b, rad_per_panel, min_panels)
    lo, hi = edges[:-1], edges[1:]
    done_val, done_err = 0j, 0.0
    length = b - a
    subdivisions = 0
    while True:
        low = _panel_sums(f, lo, hi, order)
        high, mass = _panel_sums(f, lo, hi, 2 * order, with_abs=True)
        # a panel is finished once the n vs 2n gap fits its budget or is pure roundoff
        gap = np.abs(high - low)
        budget = tol * (hi - lo) / length
        ok = (gap <= budget) | (gap <= noise_factor * mass)
        done_val += complex(high[ok].sum())
        done_err += float(gap[ok].sum())
        if ok.all():
            break
        lo, hi = lo[~ok], hi[~ok]
        if len(lo) * 2 + len(edges) > max_panels:
            total_err = done_err + float(gap[~ok].sum())
            raise QuadratureFailure(f"err_estimate {total_err:.3e} > tol {tol:.1e} at the panel cap")
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        order_idx = np.argsort(lo, kind="stable")
        lo, hi = lo[order_idx], hi[order_idx]
        subdivisions += len(mid)
    if done_err > tol:
        raise QuadratureFailure(f"err_estimate {done_err:.3e} > tol {tol:.1e}")
    return QuadratureResult(done_val, done_err, subdivisions)


def _damped_edges(f: ArrayFn, phase: PhaseSpec, a: float, b: float, rad_per_panel: float,
                  min_panels: int, tol: float) -> np.ndarray:
    """Panel edges that resolve the phase only where the shifted integrand is not negligible."""
    probe = np.linspace(a, b, 8193)
    amp = np.abs(f(probe))
    live = amp > 1e-3 * tol / (b - a)
    speed = np.abs(np.asarray(phase.d1(probe), dtype=float)) * live + 1e-12
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(probe))])
    panels = max(min_panels, int(math.ceil(cum[-1] / rad_per_panel)))
    edges = np.interp(np.linspace(0.0, cum[-1], panels + 1), cum, probe)
    # never let a dead stretch become a single huge panel
    uniform = np.linspace(a, b, 4 * min_panels + 1)
    edges = np.unique(np.concatenate([edges, uniform]))
    edges[0], edges[-1] = a, b
    return edges


# -- Filon rule for a linear phase ---------------------------------------------------

@dataclass(frozen=True)
class FilonGrid:
    """Samples of a smooth amplitude on Gauss-Legendre nodes of a fixed panel grid.

    ``integrate(omega)`` then returns int f(u) e(-omega u) du for any frequency
    by integrating the per-panel Legendre interpolant against the exponential
    exactly, so the amplitude is evaluated once for all frequencies.
    """

    edges: np.ndarray
    coeffs: np.ndarray  # (panels, order) Legendre coefficients on each panel

    @staticmethod
    def nodes(a: float, b: float, panels: int, order: int = 24) -> np.ndarray:
        """The (panels, order) sample points that ``from_samples`` expects."""
        edges = np.linspace(a, b, panels + 1)
        x, _ = _gauss(order)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        return mid[:, None] + half[:, None] * x[None, :]

    @classmethod
    def from_samples(cls, a: float, b: float, vals: np.ndarray) -> "FilonGrid":
        panels, order = vals.shape
        x, w = _gauss(order)
        leg = np.polynomial.legendre.legvander(x, order - 1)  # (order, order)
        scale = (2 * np.arange(order) + 1) / 2.0
        coeffs = (np.asarray(vals, dtype=complex) * w[None, :]) @ leg * scale[None, :]
        return cls(np.linspace(a, b, panels + 1), coeffs)

    @classmethod
    def from_function(cls, f: ArrayFn, a: float, b: float, panels: int, order: int = 24) -> "FilonGrid":
        pts = cls.nodes(a, b, panels, order)
        return cls.from_samples(a, b, np.asarray(f(pts.ravel()), dtype=complex).reshape(pts.shape))

    @property
    def tail(self) -> float:
        """Size of the highest Legendre coefficients: a proxy for interpolation error."""
        half = 0.5 * np.diff(self.edges)
        return float((np.abs(self.coeffs[:, -3:]).sum(axis=1) * 2 * half).sum())

    def integrate(self, omega: float) -> QuadratureResult:
        half = 0.5 * np.diff(self.edges)
        mid = 0.5 * (self.edges[:-1] + self.edges[1:])
        order = self.coeffs.shape[1]
        j = np.arange(order)
        kappa = 2 * np.pi * omega * half  # per panel
        # int_{-1}^{1} P_j(s) e^{-i kappa s} ds = 2 (-i)^j j_j(kappa)
        moments = 2.0 * ((-1j) ** j)[None, :] * spherical_jn(j[None, :], np.abs(kappa)[:, None])
        if omega < 0:
            moments = np.conj(moments)
        per_panel = (self.coeffs * moments).sum(axis=1) * half * np.exp(-2j * np.pi * omega * mid)
        return QuadratureResult(complex(per_panel.sum()), self.tail, 0)
