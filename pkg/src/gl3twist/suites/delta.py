"""Exactness of the delta expansion and of its p-adic refinement."""
from __future__ import annotations

import math

import numpy as np

from ..config import RunConfig
from ..deltacore import DeltaExpansion, delta_exact_many, delta_padic_many, residue_recombination_check
from ..report import record
from . import Task

SUITE = "delta"


def _n_limit(Q: float, n_max: int) -> int:
    """Largest |n| <= n_max with |n| < Q^2/4, the range where the expansion is an identity."""
    return min(n_max, math.ceil(Q * Q / 4) - 1)


def check_exact(Q: float, n_max: int, tol: float):
    lim = _n_limit(Q, n_max)
    ns = np.arange(-lim, lim + 1)
    err = delta_exact_many(DeltaExpansion(Q), ns) - (ns == 0)
    worst = int(ns[np.argmax(np.abs(err))])
    yield record(SUITE, f"delta.exact.Q{Q}", "delta expansion detects n = 0 exactly",
                 {"Q": Q, "n_max_requested": n_max, "n_max_used": lim, "worst_n": worst},
                 float(np.abs(err).max()), tol)


def check_padic(p: int, lam: int, Q: float, n_max: int, tol: float):
    lim = _n_limit(Q, n_max)
    ns = np.arange(-lim, lim + 1)
    padic = delta_padic_many(DeltaExpansion(Q, p, lam), ns * p**lam)
    exact = delta_exact_many(DeltaExpansion(Q), ns)
    yield record(SUITE, f"delta.padic.p{p}.lam{lam}", "p-adic delta expansion equals the plain one",
                 {"p": p, "lam": lam, "Q": Q, "n_max_used": lim}, float(np.abs(padic - exact).max()), tol)


def check_recombination(p: int, lam_max: int, q_max: int, tol: float):
    """Every residue n mod q p^lam, for all q <= q_max coprime to p and lam <= lam_max."""
    for lam in range(1, lam_max + 1):
        worst, cases = 0.0, 0
        for q in range(1, q_max + 1):
            if q % p == 0:
                continue
            for n in range(q * p**lam):
                lhs, rhs = residue_recombination_check(q, p, lam, n)
                worst = max(worst, abs(lhs - rhs))
                cases += 1
        yield record(SUITE, f"delta.recombination.p{p}.lam{lam}",
                     "unit residues mod q p^lam split into Ramanujan sums",
                     {"p": p, "lam": lam, "q_max": q_max, "cases": cases}, worst, tol)


def tasks(cfg: RunConfig) -> list[Task]:
    sw, tol = cfg.sweeps, cfg.tolerances
    out = [Task.make(1, "delta", "check_exact", Q=Q, n_max=sw["delta.n_max"], tol=tol["delta.exact"])
           for Q in sw["delta.Q"]]
    for p in sw["delta.padic_primes"]:
        for lam in range(1, sw["delta.lam_max"] + 1):
            out.append(Task.make(2, "delta", "check_padic", p=p, lam=lam, Q=sw["delta.padic_Q"],
                                 n_max=sw["delta.padic_n_max"], tol=tol["delta.padic"]))
    for p in sw["delta.recombination_primes"]:
        out.append(Task.make(2, "delta", "check_recombination", p=p, lam_max=sw["delta.lam_max"],
                             q_max=sw["delta.recombination_q_max"], tol=tol["delta.recombination"]))
    return out
