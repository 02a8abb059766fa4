"""Composite character sums, Gauss sums and Kloosterman sums."""
from __future__ import annotations

import itertools
import math
import random

import numpy as np

from ..charsums import (CharSumParams, c1_star_many, c2_bound_nonzero, c2_bound_zero, c2_star_many,
                        c_star_bound, frak_C_star_many, frak_C_vector, quintic_root_count,
                        quintic_root_count_mod_p, zero_frequency_condition)
from ..config import RunConfig
from ..expsums import gauss_sum, kloosterman_value
from ..modarith import DirichletCharacter, mod_inv, prime_factors, valuation
from ..report import record
from . import Task

SUITE = "charsum"


def _char_indices(p: int, k: int) -> list[int]:
    """A few primitive characters: the generator, its square and its conjugate."""
    phi = p ** (k - 1) * (p - 1)
    return sorted({j % phi for j in (1, 2, -1) if (j % phi) % p})


def _instances(p: int, k: int, lam: int, moduli, m_values):
    for q, qp in itertools.product(moduli, repeat=2):
        for n1p in (d for d in moduli if q % d == 0 and qp % d == 0):
            for n1pp in (p**i for i in range(lam + 1)):
                for m, mp in itertools.product(m_values, repeat=2):
                    if math.gcd(m, q) == 1 and math.gcd(mp, qp) == 1:
                        yield q, qp, n1p, n1pp, m, mp


def check_correlation(p: int, k: int, j: int, moduli, m_values, tol: float, vtol: float, C: float):
    """Factorization, vanishing and size of the correlation sum over every n1'' and |n2| <= p^lam.

    "Zero" means below tol times the trivial size max|F|^2 * (number of beta).
    """
    chi = DirichletCharacter.primitive(p, k, j)
    base = {"p": p, "k": k, "j": j}
    for lam in range(2, (2 * k) // 3 + 1):
        pl = p**lam
        n2s = np.arange(-pl, pl + 1)
        fact_worst = 0.0
        v1 = [0, 0.0]  # violations, largest relative size
        v2 = [0, 0.0]
        zero_ratio = nz_ratio = 0.0
        nz_arg = None
        cases = 0
        for eta in (1, -1):
            for q, qp, n1p, n1pp, m, mp in _instances(p, k, lam, moduli, m_values):
                s = CharSumParams(chi, lam, q, qp, n1p, n1pp, m, mp, eta=eta)
                M = s.qh * s.qph * s.ph
                mass = max(1.0, float(np.abs(frak_C_vector(s, M)).max()) ** 2 * M)
                cs = frak_C_star_many(s, n2s)
                prod = c1_star_many(s, n2s) * c2_star_many(s, n2s)
                fact_worst = max(fact_worst, float(np.abs(cs - prod).max()) / mass)
                cases += len(n2s)
                if n1pp != 1:
                    rel = float(np.abs(cs).max()) / mass
                    v1[0] += int(rel > vtol)
                    v1[1] = max(v1[1], rel)
                    continue
                for n2, val in zip(n2s.tolist(), cs):
                    ss = s.with_n2(n2)
                    ratio = abs(val) / c_star_bound(ss)
                    if n2 == 0:
                        if not zero_frequency_condition(ss):
                            rel = abs(val) / mass
                            v2[0] += int(rel > vtol)
                            v2[1] = max(v2[1], rel)
                        zero_ratio = max(zero_ratio, ratio)
                    elif ratio > nz_ratio:
                        nz_ratio = ratio
                        nz_arg = {"q": q, "qp": qp, "n1p": n1p, "m": m, "mp": mp, "n2": n2, "eta": eta}
        p_lam = {**base, "lam": lam}
        yield record(SUITE, f"charsum.factorization.p{p}.k{k}.j{j}.lam{lam}",
                     "correlation sum factors into its q-part and p-part",
                     {**p_lam, "cases": cases}, fact_worst, tol)
        yield record(SUITE, f"charsum.vanish_n1pp.p{p}.k{k}.j{j}.lam{lam}",
                     "correlation sum vanishes when n1'' != 1",
                     {**p_lam, "violations": v1[0]}, v1[1], vtol, passed=v1[0] == 0)
        yield record(SUITE, f"charsum.vanish_zero_freq.p{p}.k{k}.j{j}.lam{lam}",
                     "zero frequency vanishes unless q = q' and m qh^2 = m' qh'^2 mod p^mu",
                     {**p_lam, "violations": v2[0]}, v2[1], vtol, passed=v2[0] == 0)
        yield record(SUITE, f"charsum.bound_zero_freq.p{p}.k{k}.j{j}.lam{lam}",
                     "zero-frequency size qh^2 (qh, m-m') p^(3 lam + delta)",
                     p_lam, zero_ratio, C)
        yield record(SUITE, f"charsum.bound_nonzero_freq.p{p}.k{k}.j{j}.lam{lam}",
                     "nonzero-frequency size qh qh' (qh, qh', n2) p^(5 lam/2 + min(ell, mu) + 3 delta/2)",
                     {**p_lam, "max_ratio_at": nz_arg}, nz_ratio, C)


def check_c2(p: int, lam: int, moduli, m_values, C: float):
    """The p-part alone for larger lam; k is the least value with lam <= 2k/3."""
    k = max(3, math.ceil(3 * lam / 2))
    chi = DirichletCharacter.primitive(p, k, 1)
    pl = p**lam
    nonzero = [n for n in range(-pl, pl + 1) if n]
    r_nz = r_zero = 0.0
    for q, qp in itertools.product(moduli, repeat=2):
        for m, mp in itertools.product(m_values, repeat=2):
            if math.gcd(m, q) != 1 or math.gcd(mp, qp) != 1:
                continue
            s = CharSumParams(chi, lam, q, qp, 1, 1, m, mp)
            vals = c2_star_many(s, nonzero + [0])
            bounds = np.array([c2_bound_nonzero(s.with_n2(n)) for n in nonzero])
            r_nz = max(r_nz, float((np.abs(vals[:-1]) / bounds).max()))
            r_zero = max(r_zero, abs(vals[-1]) / c2_bound_zero(s))
    params = {"p": p, "k": k, "lam": lam}
    yield record(SUITE, f"charsum.c2_nonzero.p{p}.lam{lam}", "p-part size p^(5 lam/2 + min(ell, mu) + 3 delta/2)",
                 params, r_nz, C)
    yield record(SUITE, f"charsum.c2_zero.p{p}.lam{lam}", "p-part zero-frequency size p^(3 lam + delta)",
                 params, r_zero, C)


def _quintic_records(tag: str, cases, cap: int):
    """Largest root count mod p^nu1, with the count mod p alongside."""
    worst, worst_p, over, at = 0, 0, 0, None
    for p, nu, m, mp, qh, qph, xi in cases:
        c = quintic_root_count(p, nu, m, mp, qh, qph, xi)
        cp = quintic_root_count_mod_p(p, m, mp, qh, qph, xi, nu)
        over += int(c > cap)
        worst_p = max(worst_p, cp)
        if c > worst:
            worst, at = c, {"p": p, "nu1": nu, "m": m, "mp": mp, "qh": qh, "qph": qph, "xi": xi}
    yield record(SUITE, f"charsum.quintic.{tag}", "at most 5 roots of the quintic congruence mod p^nu1",
                 {"instances_over_cap": over, "worst": at}, float(worst), float(cap))
    yield record(SUITE, f"charsum.quintic_mod_p.{tag}", "roots of the same quintic reduced mod p",
                 {}, float(worst_p), float(cap))


def check_quintic_random(primes, count: int, seed: int, cap: int):
    rng = random.Random(seed)
    cases = []
    for _ in range(count):
        p = rng.choice(list(primes))
        nu = rng.choice([1, 2])
        units = [x for x in range(1, p**nu) if x % p]
        cases.append((p, nu, *(rng.choice(units) for _ in range(5))))
    yield from _quintic_records(f"random{count}", cases, cap)


def check_quintic_exhaustive(p: int, nu: int, cap: int):
    """Every unit tuple with qh = 1 (the congruence depends on qh, qh' only through their ratio)."""
    units = [x for x in range(1, p**nu) if x % p]
    cases = ((p, nu, m, mp, 1, qph, xi) for m, mp, qph, xi in itertools.product(units, repeat=4))
    yield from _quintic_records(f"p{p}.nu{nu}", cases, cap)


def check_gauss(modulus: int, tol: float):
    p, = prime_factors(modulus)
    k = valuation(modulus, p)
    worst, count = 0.0, 0
    for j in range(p ** (k - 1) * (p - 1)):
        if j % p == 0:
            continue
        tau = gauss_sum(DirichletCharacter.primitive(p, k, j)).value
        worst = max(worst, abs(abs(tau) ** 2 - modulus))
        count += 1
    yield record(SUITE, f"charsum.gauss.q{modulus}", "|tau(chi)|^2 = p^k for primitive chi",
                 {"modulus": modulus, "characters": count}, worst, tol)


def check_kloosterman(c_max: int, tol: float):
    """S(a, b; c1 c2) = S(a c2bar, b c2bar; c1) S(a c1bar, b c1bar; c2) for coprime c1, c2 > 1."""
    worst, count = 0.0, 0
    for c1 in range(2, c_max // 2 + 1):
        for c2 in range(c1 + 1, c_max // c1 + 1):
            if math.gcd(c1, c2) != 1:
                continue
            i1, i2 = mod_inv(c1, c2), mod_inv(c2, c1)
            for a, b in itertools.product(range(3), repeat=2):
                lhs = kloosterman_value(a, b, c1 * c2)
                rhs = kloosterman_value(a * i2, b * i2, c1) * kloosterman_value(a * i1, b * i1, c2)
                worst = max(worst, abs(lhs - rhs))
                count += 1
    yield record(SUITE, "charsum.kloosterman_multiplicativity", "twisted multiplicativity of Kloosterman sums",
                 {"c_max": c_max, "cases": count}, worst, tol)


def tasks(cfg: RunConfig) -> list[Task]:
    sw, tol = cfg.sweeps, cfg.tolerances
    C = tol["charsum.bound_constant"]
    cap = int(tol["charsum.quintic_max"])
    moduli, ms = sw["charsum.moduli"], sw["charsum.m_values"]
    out = []
    for p in sw["charsum.primes"]:
        for k in sw["charsum.k"]:
            for j in _char_indices(p, k):
                out.append(Task.make(3, "charsum", "check_correlation", p=p, k=k, j=j, moduli=moduli,
                                     m_values=ms, tol=tol["charsum.factorization"],
                                     vtol=tol["charsum.vanishing"], C=C))
        for lam in range(1, sw["charsum.c2_lam_max"] + 1):
            out.append(Task.make(3, "charsum", "check_c2", p=p, lam=lam, moduli=[1, 2], m_values=[1, 7], C=C))
    out.append(Task.make(3, "charsum", "check_quintic_random", primes=sw["charsum.quintic_primes"],
                         count=sw["charsum.quintic_random"], seed=cfg.seed, cap=cap))
    for p in sw["charsum.primes"]:
        for nu in (1, 2):
            out.append(Task.make(3, "charsum", "check_quintic_exhaustive", p=p, nu=nu, cap=cap))
    for q in sw["charsum.gauss_moduli"]:
        out.append(Task.make(4, "charsum", "check_gauss", modulus=q, tol=tol["charsum.gauss"]))
    out.append(Task.make(4, "charsum", "check_kloosterman", c_max=sw["charsum.kloosterman_max"],
                         tol=tol["charsum.kloosterman"]))
    return out
