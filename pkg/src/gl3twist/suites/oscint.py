"""Oscillatory integrals: stationary phase, the Voronoi transform and the H integral."""
from __future__ import annotations

import math

import numpy as np

from ..config import RunConfig
from ..oscint.hintegral import (FlatHParams, HEvaluator, HParams, flat_h, flat_threshold, large_c_bound,
                                middle_bound, n3_lower, n3_threshold, trivial_bound, zero_frequency_threshold)
from ..oscint.quadrature import PhaseSpec, integrate_osc
from ..oscint.stationary import stationary_phase_main, y_stationary_newton, y_stationary_series
from ..oscint.voronoi import LanglandsParams, MellinContour
from ..oscint.windows import Bump
from ..report import record
from . import Task

SUITE = "oscint"
MU = (0.1j, -0.1j, 0.0)  # a tempered spectral parameter away from the symmetric point
PSI_C0 = 1.5 ** (-2 / 3)  # |B| = c0 X^(1/3) puts the Voronoi stationary point at v = 1.5
WEIGHTS = {"bump[1,2]": (1.0, 2.0), "bump[0.8,2.2]": (0.8, 2.2)}


# -- first-order stationary phase ---------------------------------------------------

def _quadratic(H: float, y0: float, sign: int) -> PhaseSpec:
    return PhaseSpec(lambda y: sign * H * (y - y0) ** 2,
                     lambda y: 2 * sign * H * (y - y0),
                     lambda y: 2 * sign * H + 0 * y)


def check_stationary_line(weight: str, y0: float, sign: int, Hs, tol_low: float, tol_high: float):
    """Relative error of the main term against quadrature along one grid line in H."""
    a, b = WEIGHTS[weight]
    w = Bump(a, b)
    errs = []
    for H in Hs:
        ph = _quadratic(H, y0, sign)
        ref = integrate_osc(w, ph, (a, b), tol=1e-10).value
        errs.append(abs(stationary_phase_main(w, ph, (a, b)) - ref) / abs(ref))
    line = {"weight": weight, "y0": y0, "sign": sign}
    tag = f"{weight}.y{y0}.s{sign:+d}"
    for H, e in zip(Hs, errs):
        bound = tol_low if H <= 1e4 else tol_high if H >= 1e6 else None
        if bound is not None:
            yield record(SUITE, f"oscint.stationary.{tag}.H{H:.0e}", "stationary-phase main term vs quadrature",
                         {**line, "H": H}, e, bound)
    worst_step = max(e1 / e0 for e0, e1 in zip(errs, errs[1:]))
    yield record(SUITE, f"oscint.stationary.{tag}.decreasing", "main-term error decreases with H",
                 {**line, "errors": errs}, worst_step, 1.0, passed=worst_step < 1.0)


def check_y_series(t: float, C: float, us, const: float):
    """Two-term perturbative stationary point against Newton's root."""
    for u in us:
        D = t / (2 * math.pi * 1.4)
        ser = y_stationary_series(C, D, t, u)
        y_star, _ = y_stationary_newton(C, D, t, u)
        yield record(SUITE, f"oscint.y_series.t{t:.0e}.C{C:.0e}.u{u}",
                     "perturbed stationary point y0 + y1 + y2", {"t": t, "C": C, "D": D, "u": u},
                     abs(ser.y_approx - y_star), const * (abs(C) / t) ** 3)


# -- the Voronoi transform ----------------------------------------------------------

def _contour(B: float, B_max: float, bits: int) -> MellinContour:
    return MellinContour.build(B, LanglandsParams(MU), B_max=B_max, precision_bits=bits)


def check_psi_point(X: float, B_max: float, bits: int, wrong_tol: float, phase_tol: float):
    """Both signs at one X: the oscillatory law on the right sign, suppression on the wrong one."""
    B = PSI_C0 * X ** (1 / 3)
    contours = {s: _contour(s * B, B_max, bits) for s in (1, -1)}
    d = 1e-3
    for eta in (1, -1):
        right = contours[-eta]  # sgn(B) = -eta
        val = right.evaluate(X, eta)
        hi, lo = right.evaluate(X * (1 + d), eta).value, right.evaluate(X * (1 - d), eta).value
        measured = float(np.angle(hi / lo)) / (2 * d * X)
        law = 2 * math.pi * eta / math.sqrt(B * X)  # d/dX of 2 pi * 2 eta sqrt(X/|B|)
        size = abs(val.value) / math.sqrt(X)
        params = {"X": X, "eta": eta, "B": -eta * B, "size_over_sqrtX": size, "err_estimate": val.err_estimate}
        yield record(SUITE, f"oscint.psi.phase.X{X:.4g}.eta{eta:+d}", "oscillatory Voronoi transform phase law",
                     params, abs(measured / law - 1), phase_tol,
                     passed=abs(measured / law - 1) <= phase_tol and 0.01 <= size <= 100)
        wrong = contours[eta].evaluate(X, eta)
        yield record(SUITE, f"oscint.psi.wrong_sign.X{X:.4g}.eta{eta:+d}",
                     "Voronoi transform negligible unless sgn(B) = -sgn(eta)",
                     {"X": X, "eta": eta, "B": eta * B, "err_estimate": wrong.err_estimate},
                     wrong.value, wrong_tol * math.sqrt(X))


def check_psi_small(B: float, Xs, B_max: float, bits: int, cap: float):
    c = _contour(B, B_max, bits)
    for X in Xs:
        for eta in (1, -1):
            r = c.evaluate(X, eta)
            yield record(SUITE, f"oscint.psi.small.B{B}.X{X}.eta{eta:+d}", "Voronoi transform bounded for small zN",
                         {"X": X, "B": B, "eta": eta, "err_estimate": r.err_estimate}, r.value, cap)


def tasks(cfg: RunConfig) -> list[Task]:
    sw, tol = cfg.sweeps, cfg.tolerances
    out = []
    for weight in WEIGHTS:
        for y0 in sw["oscint.stationary_y0"]:
            for sign in (1, -1):
                out.append(Task.make(5, "oscint", "check_stationary_line", weight=weight, y0=y0, sign=sign,
                                     Hs=sw["oscint.stationary_H"], tol_low=tol["oscint.stationary_h1e4"],
                                     tol_high=tol["oscint.stationary_h1e6"]))
    out.append(Task.make(5, "oscint", "check_y_series", t=1e6, C=1e3, us=[0.7, 1.2, 2.5],
                         const=tol["oscint.y_series_constant"]))
    x_lo, x_hi = sw["oscint.psi_X"]
    Xs = np.geomspace(x_lo, x_hi, sw["oscint.psi_points"]).tolist()
    B_max = PSI_C0 * x_hi ** (1 / 3)
    bits = cfg.precision_bits
    for X in Xs:
        out.append(Task.make(6, "oscint", "check_psi_point", X=X, B_max=B_max, bits=bits,
                             wrong_tol=tol["oscint.psi_wrong_sign"], phase_tol=tol["oscint.psi_phase"]))
    for B in (-1.0, -0.3, 0.5, 1.0):
        out.append(Task.make(6, "oscint", "check_psi_small", B=B, Xs=[0.01, 0.1, 1.0], B_max=B_max, bits=bits,
                             cap=tol["oscint.psi_small_z"]))
    regimes = sw["oscint.h_regimes"]
    dbl, sup, C = sw["oscint.h_doublings"], tol["oscint.h_suppression"], tol["oscint.h_bound_constant"]
    if "decay_large_n2" in regimes:
        out.append(Task.make(7, "oscint", "check_h_decay_large_n2", doublings=dbl, tol=sup, const=C))
    if "middle" in regimes:
        out.extend(Task.make(7, "oscint", "check_h_middle", n2=n2, const=C) for n2 in (127.0, 195.0, 300.0))
    if "zero_frequency" in regimes:
        out.append(Task.make(7, "oscint", "check_h_zero_frequency", doublings=dbl, tol=sup, const=C))
    if "large_c" in regimes:
        out.append(Task.make(7, "oscint", "check_h_large_c", doublings=dbl, tol=sup, const=C))
    if "flat" in regimes:
        out.append(Task.make(7, "oscint", "check_h_flat", doublings=dbl, tol=sup))
    return out


# -- the H integral ----------------------------------------------------------------

def _ladder(check_id: str, anchor: str, params: dict, values, floors, size: float, tol: float):
    """Suppression along a doubling ladder, relative to the in-range size.

    A step counts as decreasing when the value drops or is already at the
    quadrature error floor, where further decrease cannot be resolved.
    """
    rel = [v / size for v in values]
    monotone = all(b <= a or vb <= fb for a, b, vb, fb in zip(values, values[1:], values[1:], floors[1:]))
    worst = max(rel)
    return record(SUITE, check_id, anchor, {**params, "relative": rel, "floors": [f / size for f in floors],
                                            "monotone": monotone},
                  worst, tol, passed=worst <= tol and monotone)


def _moderate_base(t: float, C: float) -> HParams:
    D = t / (2 * math.pi * 1.5)
    return HParams(t, C, D, C, D, 1.0)


def check_h_decay_large_n2(doublings: int, tol: float, const: float):
    """Moderate C: H is a trivial-size integral for small n2 and negligible once n2 >> N3."""
    base = _moderate_base(1e4, 100.0)
    P = HParams(base.t, base.C, base.D, base.Cp, base.D * 1.01, base.F)
    ev = HEvaluator.build(P)
    size = trivial_bound(P)
    h0 = ev(0.0)
    params = {"t": P.t, "C": P.C, "D": P.D, "Dp": P.Dp, "F": P.F}
    yield record(SUITE, "oscint.h.moderate.in_range", "H at most its trivial size",
                 {**params, "n2": 0.0}, abs(h0.value), const * size)
    n3 = n3_threshold(P)
    ladder = [100 * n3 * 2**j for j in range(doublings + 1)]
    res = [ev(n2) for n2 in ladder]
    yield _ladder("oscint.h.moderate.decay", "H negligible unless n2 << N3", {**params, "n2": ladder},
                  [abs(r.value) for r in res], [r.err_estimate for r in res], size, tol)


def check_h_middle(n2: float, const: float):
    """Between N3' and N3: the second-derivative-test size, with the stationary u placed inside the window."""
    t, C, F = 1e7, 3e4, 1.0
    y0 = 1.5
    y0p = (y0 ** (1 / 3) - n2 * F * 1.5 ** (2 / 3) / C) ** 3
    P = HParams(t, C, t / (2 * math.pi * y0), C, t / (2 * math.pi * y0p), F)
    lo, hi = n3_lower(P), n3_threshold(P)
    r = HEvaluator.build(P)(n2)
    yield record(SUITE, f"oscint.h.middle.n2_{n2:g}", "H between N3' and N3 is of second-derivative size",
                 {"t": t, "C": C, "Dp": P.Dp, "n2": n2, "n3_lower": lo, "n3": hi, "err_estimate": r.err_estimate},
                 abs(r.value), const * middle_bound(P, n2), passed=(abs(r.value) <= const * middle_bound(P, n2)
                                                               and 100 * lo <= n2 and 100 * n2 <= hi))


def check_h_zero_frequency(doublings: int, tol: float, const: float):
    """n2 = 0 and q = q': H(0) negligible once D and D' separate by more than the threshold."""
    base = _moderate_base(1e6, 1e4)
    thr = zero_frequency_threshold(base)
    h0 = HEvaluator.build(base)(0.0)
    size = trivial_bound(base)
    params = {"t": base.t, "C": base.C, "D": base.D, "threshold": thr}
    yield record(SUITE, "oscint.h.zero_freq.in_range", "H(0) at most its trivial size when D = D'",
                 params, abs(h0.value), const * size)
    gaps = [100 * thr * 2**j for j in range(doublings + 1)]
    vals, floors, sizes = [], [], []
    for g in gaps:
        P = HParams(base.t, base.C, base.D, base.Cp, base.D * (1 + g), base.F)
        r = HEvaluator.build(P)(0.0)
        s = trivial_bound(P)
        vals.append(abs(r.value) / s)
        floors.append(r.err_estimate / s)
        sizes.append(s)
    yield _ladder("oscint.h.zero_freq.decay", "H(0) negligible unless |D - D'| is below the threshold",
                  {**params, "relative_gap": gaps}, vals, floors, 1.0, tol)


def check_h_large_c(doublings: int, tol: float, const: float):
    """|C| >= t: H of size 1/|C| for n2 <= N3 and negligible beyond."""
    t, C = 10.0, 1e4
    D = t / (2 * math.pi * 1.5) - C * 1.5 ** (-1 / 3)
    P = HParams(t, C, D, C, D, 1.0)
    ev = HEvaluator.build(P)
    size = large_c_bound(P)
    n3 = n3_threshold(P)
    params = {"t": t, "C": C, "D": D, "n3": n3}
    for n2 in (0.0, 1.0, 10.0, 100.0):
        r = ev(n2)
        yield record(SUITE, f"oscint.h.large_c.n2_{n2:g}", "H at most 1/|C| for large C",
                     {**params, "n2": n2, "err_estimate": r.err_estimate}, abs(r.value), const * size)
    ladder = [100 * n3 * 2**j for j in range(doublings + 1)]
    res = [ev(n2) for n2 in ladder]
    yield _ladder("oscint.h.large_c.decay", "H negligible unless n2 << N3 for large C", {**params, "n2": ladder},
                  [abs(r.value) for r in res], [r.err_estimate for r in res], size, tol)


def check_h_flat(doublings: int, tol: float):
    """Flat kind: negligible once n2 exceeds R^2 p^lam n1''/N0."""
    FP = FlatHParams.from_physical(1e4, 5, 5, 9, 1, 5.0)
    thr = flat_threshold(FP)
    size = abs(flat_h(FP, 0.0).value)
    ladder = [100 * thr * 2**j for j in range(doublings + 1)]
    res = [flat_h(FP, n2) for n2 in ladder]
    yield _ladder("oscint.h.flat.decay", "flat H negligible beyond R^2 p^lam n1''/N0",
                  {"N0": 1e4, "F0": FP.F0, "threshold": thr, "n2": ladder},
                  [abs(r.value) for r in res], [r.err_estimate for r in res], size, tol)
