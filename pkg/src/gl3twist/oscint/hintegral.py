"""The u-integrals H(n2) built from two y-integrals, and their decay regimes.

Everything is in scale form.  With

    J(u; C, D) = int V(y) e(-t log(y)/(2 pi) + D y + 3 C (u y)^(1/3)) dy,

the oscillatory kind is

    H(n2) = int W(u) J(u; C, D) conj(J(u; C', D')) e(-n2 F u) du

and the flat kind is int Phi(u) e(-n2 F0 u) du.  ``HParams.from_physical``
maps the sizes N, X, Q, q, q', p^lam, p^k, m, m', n1'' onto (C, D, C', D', F).
Implied constants in the bounds are made explicit with the stationary-phase
amplitude; the "t^eps" factors are dropped and callers supply their own guards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import QuadratureFailure, RegimeViolation
from .quadrature import FilonGrid, QuadratureResult, _gauss
from .windows import Bump

Y_WINDOW = Bump(1.0, 2.0)
U_WINDOW = Bump(2.0 / 3.0, 3.0)
FLAT_WINDOW = Bump(1.0, 2.0)


@dataclass(frozen=True)
class HParams:
    t: float
    C: float
    D: float
    Cp: float
    Dp: float
    F: float  # frequency per unit n2 in the u-exponential

    def __post_init__(self):
        if self.t <= 0 or self.F <= 0:
            raise ValueError("t and F must be positive")

    @classmethod
    def from_physical(cls, t: float, N: float, X: float, Q: float, q: int, qp: int, p_lambda: int,
                      p_k: int, m: int, mp: int, n1pp: int, eta: int) -> "HParams":
        """N1 = N^2 X^3 / Q^3, C = eta (N1 N)^(1/3)/(q p^lam), D = -m N/(q p^k), F = N1/(q q' p^lam n1'')."""
        N1 = N * N * X**3 / Q**3
        C = eta * (N1 * N) ** (1 / 3) / (q * p_lambda)
        Cp = eta * (N1 * N) ** (1 / 3) / (qp * p_lambda)
        return cls(t, C, -m * N / (q * p_k), Cp, -mp * N / (qp * p_k), N1 / (q * qp * p_lambda * n1pp))

    @property
    def y0(self) -> float:
        return self.t / (2 * math.pi * self.D)

    @property
    def y0p(self) -> float:
        return self.t / (2 * math.pi * self.Dp)


@dataclass(frozen=True)
class FlatHParams:
    F0: float  # N0/(q q' p^lam n1'')
    n2_threshold: float  # R^2 p^lam n1''/N0

    @classmethod
    def from_physical(cls, N0: float, q: int, qp: int, p_lambda: int, n1pp: int, R: float) -> "FlatHParams":
        return cls(N0 / (q * qp * p_lambda * n1pp), R * R * p_lambda * n1pp / N0)


# -- the y-integral for many u at once -------------------------------------------------

def _y_phase_parts(z, cu, t: float, D: float):
    """phase, phase', phase'' in radians; z and cu broadcast together."""
    z13 = np.power(z, 1 / 3)
    phase = -t * np.log(z) + 2 * np.pi * (D * z + 3 * cu * z13)
    d1 = -t / z + 2 * np.pi * (D + cu / (z13 * z13))
    d2 = t / (z * z) - (4 * np.pi / 3) * cu / (z13 * z13 * z)
    return phase, d1, d2


def _y_phase_d3(z, cu, t: float):
    return -2 * t / z**3 + (20 * np.pi / 9) * cu * np.power(z, -8 / 3)


def _lifted_integrand(x: np.ndarray, cu: np.ndarray, t: float, D: float, height: float, G: float,
                      window: Bump) -> np.ndarray:
    """V(z) e^{i phase(z)} dz/dx on the path z = x + i eps(x), rows indexed by cu.

    eps = height (1 - s^2) tanh(phase'/G).  To first order in eps the modulus
    is exp(-eps phase') <= 1; ``height`` is kept small enough that the cubic
    term eps^3 phase_3/6 cannot undo that.
    """
    a, b = window.a, window.b
    half, mid = 0.5 * (b - a), 0.5 * (a + b)
    xx = x[None, :]
    s = (xx - mid) / half
    _, d1, d2 = _y_phase_parts(xx, cu[:, None], t, D)
    th = np.tanh(d1 / G)
    env = 1.0 - s * s
    z = xx + 1j * height * env * th
    dz = 1.0 + 1j * height * (-2.0 * s / half * th + env * (1.0 - th * th) * d2 / G)
    phase, _, _ = _y_phase_parts(z, cu[:, None], t, D)
    return window(z) * np.exp(1j * phase) * dz


def j_values(us, C: float, D: float, t: float, window: Bump = Y_WINDOW, lift: float = 0.5,
             order: int = 20, rad_per_panel: float = 5.0, chunk: int = 64,
             rel_tol: float = 1e-8, max_refine: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """J(u; C, D) for every u in ``us`` with a per-u error estimate.

    The y-path is lifted into the complex plane so the integrand dies away
    from the stationary point; panels resolve the real phase and those dead
    for every u are dropped.  A high lift can outpace the panel resolution
    (mostly when |C| is small against t), so while the estimate exceeds
    ``rel_tol`` times the largest |J| and is not just rounding noise, the
    lift is halved and the rule rerun.
    """
    us = np.atleast_1d(np.asarray(us, dtype=float))
    if np.any(us <= 0):
        raise ValueError("u must be positive")
    for _ in range(max_refine + 1):
        vals, err, gap = _j_values_once(us, C, D, t, window, lift, order, rad_per_panel, chunk)
        if gap < err[0] or err[0] <= rel_tol * max(float(np.abs(vals).max()), 1e-300):
            break
        lift *= 0.5
    return vals, err


def _j_values_once(us: np.ndarray, C: float, D: float, t: float, window: Bump, lift: float,
                   order: int, rad_per_panel: float, chunk: int) -> tuple[np.ndarray, np.ndarray, float]:
    cus = C * np.cbrt(us)
    a, b = window.a, window.b
    probe = np.linspace(a, b, 8193)
    refs = np.array([cus.min(), cus.mean(), cus.max()])
    _, d1, d2 = _y_phase_parts(probe[None, :], refs[:, None], t, D)
    G = math.sqrt(max(float(np.abs(d2).max()), 1e-300))
    d3 = float(np.abs(_y_phase_d3(probe[None, :], refs[:, None], t)).max())
    height = lift * min(0.5 * (b - a), math.sqrt(6 * G / max(d3, 1e-300)))
    speed = np.abs(d1).max(axis=0)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(probe))])
    panels = max(16, int(math.ceil(cum[-1] / rad_per_panel)))
    edges = np.interp(np.linspace(0.0, cum[-1], panels + 1), cum, probe)
    edges[0], edges[-1] = a, b

    xg, wg = _gauss(order)
    xh, wh = _gauss(2 * order)

    def nodes(lo, hi, xs, ws):
        h = 0.5 * (hi - lo)
        pts = (0.5 * (hi + lo))[:, None] + h[:, None] * xs[None, :]
        return pts.ravel(), (h[:, None] * ws[None, :]).ravel()

    # keep the hull of panels that are alive for some reference u
    pts, _ = nodes(edges[:-1], edges[1:], xg, wg)
    amp = np.abs(_lifted_integrand(pts, refs, t, D, height, G, window)).reshape(3, panels, order)
    per_panel = amp.max(axis=(0, 2))
    live = np.nonzero(per_panel > 1e-18 * per_panel.max())[0]
    lo, hi = edges[live[0]:live[-1] + 1], edges[live[0] + 1:live[-1] + 2]

    ptsg, wgrid = nodes(lo, hi, xg, wg)
    # values use the order-2n rule; its gap to order n, measured at the reference u, is the error estimate
    ptsh, whgrid = nodes(lo, hi, xh, wh)
    fh = _lifted_integrand(ptsh, refs, t, D, height, G, window)
    gap = np.abs(fh @ whgrid - _lifted_integrand(ptsg, refs, t, D, height, G, window) @ wgrid)
    noise = 4 * np.finfo(float).eps * (1 + t * math.log(b)) * (np.abs(fh) @ np.abs(whgrid))
    err = float(np.maximum(gap, noise).max())
    gap_max = float(gap.max())
    vals = np.empty(len(us), dtype=complex)
    for i in range(0, len(us), chunk):
        vals[i:i + chunk] = _lifted_integrand(ptsh, cus[i:i + chunk], t, D, height, G, window) @ whgrid
    return vals, np.full(len(us), err), gap_max


# -- H(n2) --------------------------------------------------------------------------

def stationary_y(C: float, D: float, t: float, us, window: Bump = Y_WINDOW) -> np.ndarray:
    """Root of the y-phase derivative for each u by bisection, clipped to the window."""
    cus = C * np.cbrt(np.atleast_1d(np.asarray(us, dtype=float)))
    lo = np.full(cus.shape, window.a)
    hi = np.full(cus.shape, window.b)

    def d1(y):
        return -t / (2 * np.pi * y) + D + cus * np.power(y, -2 / 3)

    f_lo = d1(lo)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        same = np.sign(d1(mid)) == np.sign(f_lo)
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _u_cycles(params: HParams, window: Bump) -> float:
    """Winding of J conj(J') across the u-window.

    By the envelope theorem d/du arg J = 2 pi C y*^(1/3) u^(-2/3), so the product
    turns at the difference of the two rates.
    """
    us = np.linspace(window.a, window.b, 401)
    ys = stationary_y(params.C, params.D, params.t, us)
    yps = stationary_y(params.Cp, params.Dp, params.t, us)
    rate = np.abs(params.C * np.cbrt(ys) - params.Cp * np.cbrt(yps)) * np.power(us, -2 / 3)
    return float(np.trapezoid(rate, us))


@dataclass(frozen=True)
class HEvaluator:
    """Samples of W J conj(J') on a u-grid, reusable for any n2."""

    params: HParams
    grid: FilonGrid
    j_err: float

    @classmethod
    def build(cls, params: HParams, u_window: Bump = U_WINDOW, y_window: Bump = Y_WINDOW,
              panels: int | None = None, lift: float = 0.5, order: int = 24) -> "HEvaluator":
        if panels is None:
            panels = max(12, int(math.ceil(_u_cycles(params, u_window) / 3)))
        a, b = u_window.a, u_window.b
        pts = FilonGrid.nodes(a, b, panels, order)
        us = pts.ravel()
        J, eJ = j_values(us, params.C, params.D, params.t, y_window, lift)
        if params.Cp == params.C and params.Dp == params.D:
            Jp, eJp = J, eJ
        else:
            Jp, eJp = j_values(us, params.Cp, params.Dp, params.t, y_window, lift)
        Wu = u_window(us)
        grid = FilonGrid.from_samples(a, b, (Wu * J * np.conj(Jp)).reshape(pts.shape))
        j_err = float(((eJ * np.abs(Jp) + np.abs(J) * eJp) * Wu).max() * (b - a))
        return cls(params, grid, j_err)

    def __call__(self, n2: float) -> QuadratureResult:
        res = self.grid.integrate(n2 * self.params.F)
        return QuadratureResult(res.value, res.err_estimate + self.j_err, 0)


def flat_h(params: FlatHParams, n2: float, window: Bump = FLAT_WINDOW, panels: int = 16) -> QuadratureResult:
    grids = [FilonGrid.from_function(window, window.a, window.b, P) for P in (panels, 2 * panels)]
    lo, hi = (g.integrate(n2 * params.F0) for g in grids)
    return QuadratureResult(hi.value, abs(hi.value - lo.value) + grids[1].tail, 0)


def H_integral(kind: str, params, n2: float, tol: float = 1e-8) -> QuadratureResult:
    """H(n2) for kind 'oscillatory' (params: HParams) or 'flat' (params: FlatHParams)."""
    if kind == "oscillatory":
        res = HEvaluator.build(params)(n2)
    elif kind == "flat":
        res = flat_h(params, n2)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if res.err_estimate > tol:
        raise QuadratureFailure(f"H({n2}) err_estimate {res.err_estimate:.3e} > tol {tol:.1e}")
    return res


# -- regime thresholds and bounds --------------------------------------------------

def _require_moderate(params: HParams) -> None:
    if max(abs(params.C), abs(params.Cp)) > params.t:
        raise RegimeViolation("needs |C| <= t (the moderate-C regime)")
    if params.D <= 0 or params.Dp <= 0:
        raise RegimeViolation("needs D, D' > 0 so the y-integrals have stationary points")


def n3_threshold(params: HParams) -> float:
    """n2 beyond which the u-exponential outruns the phase of J conj(J')."""
    return max(abs(params.C), abs(params.Cp)) / params.F


def n3_lower(params: HParams) -> float:
    return (1 + max(abs(params.C), abs(params.Cp)) ** 3 / params.t**2) / params.F


def trivial_bound(params: HParams, u_window: Bump = U_WINDOW) -> float:
    """|W| integrated times the stationary-phase sizes y0 (2 pi/t)^(1/2) of both J."""
    _require_moderate(params)
    us = np.linspace(u_window.a, u_window.b, 2001)
    mass = float(np.trapezoid(u_window(us), us))
    return 2 * math.pi * params.y0 * params.y0p * mass / params.t


def middle_bound(params: HParams, n2: float) -> float:
    """The second-derivative-test size of the u-integral between N3' and N3."""
    _require_moderate(params)
    return 2 * math.pi * params.y0 * params.y0p * (3 / math.sqrt(2)) / (params.t * math.sqrt(params.F * n2))


def zero_frequency_threshold(params: HParams) -> float:
    """|D - D'|/|D| below which H(0) need not be small (for q = q', so C = C')."""
    C = abs(params.C)
    return C * C / params.t**2 + 1 / C


def large_c_bound(params: HParams) -> float:
    """1/|C|, the size of H for n2 below N3 once |C| exceeds t."""
    if abs(params.C) < params.t:
        raise RegimeViolation("needs |C| >= t (the large-C regime)")
    return 1 / abs(params.C)


def flat_threshold(params: FlatHParams) -> float:
    return params.n2_threshold
