"""The GL(3) Voronoi transform Psi^{+-} evaluated as a Mellin-Barnes integral.

    Psi^{+-}(z) = (2 pi i)^{-1} int_(sigma) z^{-s} gamma_{+-}(s) psi~(-s) ds,
    gamma_l(s) = pi^{-3(s+1/2)}/2 prod_j Gamma((1+s+mu_j+l)/2) / Gamma((-s-mu_j+l)/2),
    gamma_{+-} = gamma_0 -+ i gamma_1.

For psi(y) = W(y/N) e(B y/N) the transform depends on z only through X = zN.
The Mellin transform of the weight is taken by FFT in w = log v and the gamma
ratios by mpmath at ``precision_bits``; the contour is the vertical line
Re s = sigma truncated where the integrand has decayed below the tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from ..errors import ContourViolation, TailBoundExceeded
from .windows import GaussianWindow


@dataclass(frozen=True)
class LanglandsParams:
    mu: tuple[complex, complex, complex]

    def __post_init__(self):
        mu = tuple(complex(m) for m in self.mu)
        if len(mu) != 3:
            raise ValueError("need exactly three Langlands parameters")
        if abs(sum(mu)) > 1e-12:
            raise ValueError(f"Langlands parameters must sum to zero (sum = {sum(mu)})")
        object.__setattr__(self, "mu", mu)

    def dual(self) -> "LanglandsParams":
        m1, m2, m3 = self.mu
        return LanglandsParams((-m3, -m2, -m1))

    @property
    def sigma_floor(self) -> float:
        """Contours must lie strictly right of max_j(-1 - Re mu_j)."""
        return max(-1.0 - m.real for m in self.mu)

    def default_sigma(self) -> float:
        return self.sigma_floor + 0.6


def _log_gamma_factor(s: mpmath.mpc, mu: tuple[complex, ...], ell: int) -> mpmath.mpc:
    acc = -mpmath.log(2) - 3 * (s + mpmath.mpf(1) / 2) * mpmath.log(mpmath.pi)
    for m in mu:
        mm = mpmath.mpc(m.real, m.imag)
        acc += mpmath.loggamma((1 + s + mm + ell) / 2) - mpmath.loggamma((-s - mm + ell) / 2)
    return acc


def gamma_factor(s: complex, params: LanglandsParams, ell: int, precision_bits: int = 166) -> complex:
    """gamma_l(s) for l in {0, 1}."""
    with mpmath.workprec(precision_bits):
        return complex(mpmath.exp(_log_gamma_factor(mpmath.mpc(s.real, s.imag), params.mu, ell)))


@lru_cache(maxsize=16)
def _gamma_pm_on_line(mu: tuple[complex, ...], sigma: float, dtau: float, count: int,
                      precision_bits: int) -> tuple[np.ndarray, np.ndarray]:
    """gamma_+ and gamma_- at s = sigma + i k dtau, k = -count..count."""
    gp = np.empty(2 * count + 1, dtype=complex)
    gm = np.empty(2 * count + 1, dtype=complex)
    with mpmath.workprec(precision_bits):
        for idx, k in enumerate(range(-count, count + 1)):
            s = mpmath.mpc(sigma, k * dtau)
            g0 = mpmath.exp(_log_gamma_factor(s, mu, 0))
            g1 = mpmath.exp(_log_gamma_factor(s, mu, 1))
            gp[idx] = complex(g0 - 1j * g1)
            gm[idx] = complex(g0 + 1j * g1)
    gp.setflags(write=False)
    gm.setflags(write=False)
    return gp, gm


@dataclass(frozen=True)
class PsiWeight:
    """psi(y) = window(y/N) e(B y/N)."""

    N: float
    B: float
    window: GaussianWindow = GaussianWindow(1.5, 0.09)


@dataclass(frozen=True)
class PsiResult:
    value: complex
    err_estimate: float
    sigma: float
    cutoff: float  # truncation height Lambda of the contour


@dataclass(frozen=True)
class MellinContour:
    """Everything about the contour integral that does not depend on X = zN."""

    tau: np.ndarray
    sigma: float
    dtau: float
    weight_hat: np.ndarray  # psi~(-s)/N^{-s} on the grid
    gamma_plus: np.ndarray
    gamma_minus: np.ndarray
    edge_size: float  # largest |integrand| magnitude at the truncation edge, before the X factor

    @classmethod
    def build(cls, B: float, params: LanglandsParams, window: GaussianWindow = GaussianWindow(1.5, 0.09),
              sigma: float | None = None, precision_bits: int = 166, period: float = 32.0,
              tail_tol: float = 1e-13, B_max: float | None = None) -> "MellinContour":
        sigma = params.default_sigma() if sigma is None else float(sigma)
        if sigma <= params.sigma_floor:
            raise ContourViolation(f"sigma = {sigma} must exceed {params.sigma_floor}")
        lo, hi = window.support
        lo = max(lo, 1e-3)
        wa, wb = math.log(lo), math.log(hi)
        Bref = abs(B) if B_max is None else max(abs(B), abs(B_max))
        # the phase 2 pi B e^w turns at most 2 pi |B| hi per unit w; leave room for the window's own spread
        spread = 20.0 / (window.width / window.centre)
        tau_max = 2 * math.pi * Bref * hi + spread
        h = math.pi / tau_max
        M = 1 << int(math.ceil(math.log2(period / h)))
        w = wa + h * np.arange(M)
        v = np.exp(w)
        inside = w <= wb
        f = np.where(inside, window(v) * np.exp(2j * np.pi * B * v) * np.exp(-sigma * w), 0.0)
        F = h * np.fft.fft(f)  # sum_j f_j e^{-2 pi i jk/M} = int f e^{-i tau w} dw shifted by e^{i tau wa}
        k = np.fft.fftfreq(M, d=1.0 / M)
        tau_all = 2 * np.pi * k / (M * h)
        F = F * np.exp(-1j * tau_all * wa)
        dtau = 2 * np.pi / (M * h)
        count = min(int(math.floor(tau_max / dtau)), M // 2 - 1)
        order = np.argsort(tau_all)
        tau_sorted, F_sorted = tau_all[order], F[order]
        centre = np.searchsorted(tau_sorted, 0.0)
        sel = slice(centre - count, centre + count + 1)
        tau, Wt = tau_sorted[sel], F_sorted[sel]
        gp, gm = _gamma_pm_on_line(params.mu, sigma, dtau, count, precision_bits)
        # truncation is justified once the weight transform has hit its FFT roundoff floor;
        # the gamma ratio only amplifies that floor, which the error estimate carries
        aw = np.abs(Wt)
        w_edge = float(max(aw[:8].max(), aw[-8:].max()))
        if w_edge > max(tail_tol, 1e3 * np.finfo(float).eps) * float(aw.max()):
            raise TailBoundExceeded(f"weight transform at |Im s| = {tau_max:.1f} is {w_edge:.2e} of its peak")
        integrand = aw * np.maximum(np.abs(gp), np.abs(gm))
        edge = float(max(integrand[:8].max(), integrand[-8:].max()))
        return cls(tau, sigma, dtau, Wt, gp, gm, edge)

    def evaluate(self, X: float, sign: int) -> PsiResult:
        """Psi^{sign}(z) with X = z N (sign +1 or -1)."""
        g = self.gamma_plus if sign > 0 else self.gamma_minus
        kern = np.exp(-(self.sigma + 1j * self.tau) * math.log(X)) * g * self.weight_hat
        total = kern.sum() * self.dtau / (2 * np.pi)
        coarse = kern[::2].sum() * 2 * self.dtau / (2 * np.pi)
        # the half-grid sum of a smooth integrand agrees once both are resolved
        err = abs(total - coarse) + self.edge_size * X ** (-self.sigma) * self.tau[-1] / np.pi
        return PsiResult(complex(total), float(err), self.sigma, float(self.tau[-1]))


def psi_transform(z: float, params: LanglandsParams, sign: int, weight: PsiWeight,
                  sigma: float | None = None, precision_bits: int = 166) -> PsiResult:
    if z <= 0:
        raise ValueError("z must be positive")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    contour = MellinContour.build(weight.B, params, weight.window, sigma, precision_bits)
    return contour.evaluate(z * weight.N, sign)


def psi_phase_law(X: float, B: float, eta: int) -> float:
    """The leading phase 2 eta (X / (-eta B))^(1/2) in cycles; needs eta B < 0."""
    if eta * B >= 0:
        raise ValueError("the oscillatory law needs sgn(B) = -sgn(eta)")
    return 2 * eta * math.sqrt(X / (-eta * B))
