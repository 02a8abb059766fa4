"""Exponent balancing of the final error-term list."""
from __future__ import annotations

from fractions import Fraction

from ..config import RunConfig
from ..expcalc import balance, cross_check, load_ledger, optimize
from ..report import record
from . import Task

SUITE = "expcalc"
TARGET = Fraction(3, 4) - Fraction(3, 40)


def check_balance(theta: str, rho: str):
    terms = load_ledger("final_terms")
    res = balance(terms, Fraction(theta), Fraction(rho))
    params = {"theta": theta, "rho": rho, "exponent": str(res.exponent), "target": str(TARGET),
              "dominant": list(res.dominant)}
    yield record(SUITE, "expcalc.balance.exponent", "balanced exponent of (p^k t) in S(N)/N^(1/2)",
                 params, float(res.exponent), float(TARGET), passed=res.exponent == TARGET)
    yield record(SUITE, "expcalc.balance.p_slack", "leftover constant power of p",
                 {"p_slack": str(res.p_slack), "floor_slack": str(res.floor_slack)},
                 float(res.p_slack), 0.75, passed=res.p_slack == Fraction(3, 4))


def check_optimize(tol: float):
    terms = load_ledger("final_terms")
    res = optimize(terms)
    dist = max(abs(float(res.theta) - 0.4), abs(float(res.rho) - 0.4))
    params = {"theta": str(res.theta), "rho": str(res.rho), "exponent": str(res.exponent),
              "grid_theta": res.grid_theta, "grid_rho": res.grid_rho, "active": list(res.active)}
    yield record(SUITE, "expcalc.optimize.location", "minimax balancing point (theta, rho)",
                 params, dist, tol, passed=dist <= tol and res.exponent == TARGET)
    yield record(SUITE, "expcalc.optimize.active_terms", "terms tight at the optimum",
                 {"active": list(res.active)}, len(res.active), 2.0, passed=len(res.active) >= 2)


def check_upstream():
    """Audit: substitute each per-case bound and look for it in the final list.

    A mismatch is reported as a failing record with both sides; nothing is corrected.
    """
    final = load_ledger("final_terms")
    for i, rec in enumerate(cross_check(load_ledger("upstream_terms"), final)):
        yield record(SUITE, f"expcalc.cross_check.{i:02d}", rec.upstream,
                     {"derived": rec.derived, "closest": rec.closest, "status": rec.status,
                      "differences": list(rec.differences)},
                     0.0, None, passed=rec.status == "match")


def tasks(cfg: RunConfig) -> list[Task]:
    return [Task.make(8, "expcalc", "check_balance", theta="2/5", rho="2/5"),
            Task.make(8, "expcalc", "check_optimize", tol=cfg.tolerances["expcalc.optimizer"]),
            Task.make(0, "expcalc", "check_upstream")]
