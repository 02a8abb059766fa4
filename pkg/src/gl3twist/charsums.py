"""Composite character sums built from a primitive character mod p^k and Kloosterman sums.

Notation follows the usual delta-method bookkeeping: for moduli q, q' coprime
to p and divisors n1' | (q, q'), n1'' | p^lam we write

    qh = q / n1',   qph = q' / n1',   ph = p^lam / n1''.

``frak_C`` is the single sum F(m, a, q, n1', n1'', n2); ``frak_C_star`` is the
Poisson-dual correlation sum over beta mod qh*qph*ph, evaluated directly, and
``c1_star`` / ``c2_star`` are its two CRT factors, each evaluated directly as
well, so that ``frak_C_star == c1_star * c2_star`` is a genuine cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import InvalidCongruence, InvalidModulus, NoWitness
from .modarith import DirichletCharacter, mod_inv, unit_inverse_table, valuation


@dataclass(frozen=True)
class CharSumParams:
    chi: DirichletCharacter
    lam: int
    q: int
    qp: int
    n1p: int
    n1pp: int
    m: int
    mp: int
    n2: int = 0
    eta: int = 1
    a: int | None = None
    ap: int | None = None

    def __post_init__(self):
        p, k = self.p, self.k
        if not 1 <= self.lam <= k:
            raise InvalidModulus(f"lambda={self.lam} outside [1, {k}]")
        if self.eta not in (1, -1):
            raise ValueError("eta must be +1 or -1")
        for name, mod in (("q", self.q), ("q'", self.qp)):
            if mod < 1 or mod % p == 0:
                raise InvalidModulus(f"{name}={mod} must be a positive integer coprime to p")
        if self.n1p < 1 or self.q % self.n1p or self.qp % self.n1p:
            raise InvalidModulus("n1' must divide both q and q'")
        if self.n1pp < 1 or self.p_lam % self.n1pp:
            raise InvalidModulus("n1'' must divide p^lambda")
        if math.gcd(self.m, self.q) != 1 or math.gcd(self.mp, self.qp) != 1:
            raise InvalidCongruence("m, m' must be coprime to q, q' respectively")
        shift = pow(p, k - self.lam)
        a = _solve_a(self.m, self.q, shift) if self.a is None else self.a
        ap = _solve_a(self.mp, self.qp, shift) if self.ap is None else self.ap
        for mm, aa, mod in ((self.m, a, self.q), (self.mp, ap, self.qp)):
            if math.gcd(aa, mod) != 1 or (mm - aa * shift) % mod:
                raise InvalidCongruence(f"m={mm} is not congruent to a*p^(k-lam) with a={aa} mod {mod}")
        object.__setattr__(self, "a", a % self.q)
        object.__setattr__(self, "ap", ap % self.qp)

    @property
    def p(self) -> int:
        return self.chi.modulus.p

    @property
    def k(self) -> int:
        return self.chi.modulus.k

    @property
    def p_lam(self) -> int:
        return self.p**self.lam

    @property
    def qh(self) -> int:
        return self.q // self.n1p

    @property
    def qph(self) -> int:
        return self.qp // self.n1p

    @property
    def ph(self) -> int:
        return self.p_lam // self.n1pp

    @property
    def mu(self) -> int:
        return self.lam // 2

    @property
    def delta(self) -> int:
        return self.lam % 2

    @property
    def ell(self) -> int:
        """p-adic valuation of n2 (capped at lam for n2 = 0)."""
        return valuation(self.n2, self.p) if self.n2 else self.lam

    def with_n2(self, n2: int) -> "CharSumParams":
        return CharSumParams(self.chi, self.lam, self.q, self.qp, self.n1p, self.n1pp,
                             self.m, self.mp, n2, self.eta, self.a, self.ap)

    def swapped(self) -> "CharSumParams":
        """The primed data moved into the unprimed slots."""
        return CharSumParams(self.chi, self.lam, self.qp, self.q, self.n1p, self.n1pp,
                             self.mp, self.m, self.n2, self.eta, self.ap, self.a)


def _solve_a(m: int, q: int, shift: int) -> int:
    if q == 1:
        return 0
    return m * mod_inv(shift, q) % q


# -- building blocks ---------------------------------------------------------

def _kloosterman_rows(u: int, vs: np.ndarray, c: int) -> np.ndarray:
    """S(u, v; c) for every v in ``vs`` (fixed first argument)."""
    units, inv = unit_inverse_table(c)
    r = (u * units[None, :] + np.mod(vs, c)[:, None] * inv[None, :]) % c
    return np.exp(2j * np.pi * r / c).sum(axis=1)


def q_side(s: CharSumParams, betas: np.ndarray, primed: bool = False) -> np.ndarray:
    """S(abar * phbar, eta * beta * phbar; qh) for each beta."""
    a, q, qh = (s.ap, s.qp, s.qph) if primed else (s.a, s.q, s.qh)
    if qh == 1:
        return np.ones(len(betas), dtype=complex)
    phbar = mod_inv(s.ph, qh)
    abar = mod_inv(a, q) % qh
    vs = np.mod(s.eta * np.asarray(betas, dtype=np.int64) % qh * phbar, qh)
    return _kloosterman_rows(abar * phbar % qh, vs, qh)


def _p_side_profile(s: CharSumParams, primed: bool) -> np.ndarray:
    """G(x) = sum over units c mod p^lam of chibar(m - c p^(k-lam)) e(cbar qhbar x / ph).

    Indexed by the units x mod ph (in the order of ``unit_inverse_table(ph)``).
    """
    m, qh = (s.mp, s.qph) if primed else (s.m, s.qh)
    p_lam, ph = s.p_lam, s.ph
    shift = s.p ** (s.k - s.lam)
    cs, cinv = unit_inverse_table(p_lam)
    chibar = np.conj(s.chi.table()[np.mod(m - cs * shift, s.chi.q)])
    xs, _ = unit_inverse_table(ph)
    if ph == 1:
        return np.array([chibar.sum()])
    qhbar = mod_inv(qh, ph)
    r = (np.mod(cinv, ph)[:, None] * qhbar % ph) * xs[None, :] % ph
    return (chibar[:, None] * np.exp(2j * np.pi * r / ph)).sum(axis=0)


def p_side(s: CharSumParams, betas: np.ndarray, primed: bool = False) -> np.ndarray:
    """sum_c chibar(m - c p^(k-lam)) S(cbar qhbar, eta beta qhbar; ph) for each beta."""
    qh = s.qph if primed else s.qh
    ph = s.ph
    prof = _p_side_profile(s, primed)
    if ph == 1:
        return np.full(len(betas), prof[0], dtype=complex)
    xs, xinv = unit_inverse_table(ph)
    qhbar = mod_inv(qh, ph)
    bs = np.mod(s.eta * np.asarray(betas, dtype=np.int64) % ph * qhbar, ph)
    r = bs[:, None] * xinv[None, :] % ph
    return (np.exp(2j * np.pi * r / ph) * prof[None, :]).sum(axis=1)


# -- the sums ----------------------------------------------------------------

def frak_C(s: CharSumParams) -> complex:
    """F(m, a, q, n1', n1'', n2): q-side Kloosterman factor times the chi-twisted p-side sum."""
    b = np.array([s.n2], dtype=np.int64)
    return complex(q_side(s, b)[0] * p_side(s, b)[0])


def frak_C_vector(s: CharSumParams, modulus: int, primed: bool = False) -> np.ndarray:
    """F(..., beta) for beta = 0 .. modulus-1 (n2 slot replaced by beta)."""
    betas = np.arange(modulus, dtype=np.int64)
    return q_side(s, betas, primed) * p_side(s, betas, primed)


def frak_C_star_many(s: CharSumParams, n2s) -> np.ndarray:
    """C*(n2) for each n2, by direct summation over beta mod qh*qph*ph."""
    M = s.qh * s.qph * s.ph
    F = frak_C_vector(s, M)
    Fp = frak_C_vector(s, M, primed=True)
    w = F * np.conj(Fp)
    beta = np.arange(M, dtype=np.int64)
    n2s = np.atleast_1d(np.asarray(n2s, dtype=np.int64))
    r = np.mod(s.eta * n2s[:, None] % M * beta[None, :], M)
    return np.exp(2j * np.pi * r / M) @ w


def frak_C_star(s: CharSumParams) -> complex:
    return complex(frak_C_star_many(s, [s.n2])[0])


def c1_star_many(s: CharSumParams, n2s) -> np.ndarray:
    """q-side CRT factor: sum over b mod qh*qph of the two Kloosterman sums."""
    L = s.qh * s.qph
    b = np.arange(L, dtype=np.int64)
    w = q_side(s, b) * np.conj(q_side(s, b, primed=True))
    phbar = mod_inv(s.ph, L)
    n2s = np.atleast_1d(np.asarray(n2s, dtype=np.int64))
    r = np.mod(s.eta * n2s[:, None] % L * phbar % L * b[None, :], L)
    return np.exp(2j * np.pi * r / L) @ w


def c2_star_many(s: CharSumParams, n2s) -> np.ndarray:
    """p-side CRT factor: sum over b mod ph and c1, c2 mod p^lam."""
    ph = s.ph
    b = np.arange(ph, dtype=np.int64)
    w = p_side(s, b) * np.conj(p_side(s, b, primed=True))
    qqbar = mod_inv(s.qh * s.qph, ph)
    n2s = np.atleast_1d(np.asarray(n2s, dtype=np.int64))
    r = np.mod(s.eta * n2s[:, None] % ph * qqbar % ph * b[None, :], ph)
    return np.exp(2j * np.pi * r / ph) @ w


def c1_star(s: CharSumParams) -> complex:
    return complex(c1_star_many(s, [s.n2])[0])


def c2_star(s: CharSumParams) -> complex:
    return complex(c2_star_many(s, [s.n2])[0])


# -- bounds ------------------------------------------------------------------

def zero_frequency_condition(s: CharSumParams) -> bool:
    """q = q' and m qh^2 = m' qph^2 mod p^mu: the only zero-frequency case that may survive."""
    pm = s.p**s.mu
    return s.q == s.qp and (s.m * s.qh**2 - s.mp * s.qph**2) % pm == 0


def c1_bound(s: CharSumParams) -> float:
    return float(s.qh * s.qph * math.gcd(math.gcd(s.qh, s.qph), s.n2))


def c2_bound_nonzero(s: CharSumParams) -> float:
    """p^(5 lam/2 + min(ell, mu) + 3 delta/2)."""
    e = Fraction(5 * s.lam, 2) + min(s.ell, s.mu) + Fraction(3 * s.delta, 2)
    return float(s.p ** float(e))


def c2_bound_zero(s: CharSumParams, with_delta: bool = True) -> float:
    return float(s.p ** (3 * s.lam + (s.delta if with_delta else 0)))


def c_star_bound(s: CharSumParams) -> float:
    if s.n2 == 0:
        return s.qh**2 * math.gcd(s.qh, s.m - s.mp) * c2_bound_zero(s)
    return c1_bound(s) * c2_bound_nonzero(s)


# -- the additive-character witness --------------------------------------------

@dataclass(frozen=True)
class XiWitness:
    xi: int
    nu: int


def xi_of_char(chi: DirichletCharacter, nu: int) -> XiWitness:
    """The xi mod p^nu with chi(1 + z p^(k-nu)) = e(xi z / p^nu) for every z, verified exactly."""
    m = chi.modulus
    p, k, phi = m.p, m.k, m.phi
    if not 1 <= nu <= k - 1:
        raise NoWitness(f"nu={nu} outside [1, k-1]")
    pn = p**nu
    step = p ** (k - nu)
    a1 = chi.exponent(1 + step)
    # chi(1 + p^(k-nu)) = e(a1/phi) must equal e(xi/p^nu)
    if (a1 * pn) % phi:
        raise NoWitness("chi(1 + p^(k-nu)) is not a p^nu-th root of unity")
    xi = a1 * pn // phi % pn
    if xi % p == 0:
        raise NoWitness(f"xi={xi} is not a unit; chi restricted to 1 + p^(k-nu) Z is not faithful")
    for z in range(pn):
        az = chi.exponent(1 + z * step)
        if (az * pn - xi * z * phi) % (phi * pn):
            raise NoWitness(f"identity fails at z={z}: the restriction is not additive")
    return XiWitness(xi, nu)


def quintic_coefficients(p: int, nu1: int, m: int, mp: int, qh: int, qph: int, xi: int) -> list[int]:
    """Coefficients c0..c5 (mod p^nu1) of the degree-5 congruence in u = n2 b^2."""
    P = p**nu1
    mb, mpb, qpb = mod_inv(m, P), mod_inv(mp, P), mod_inv(qph, P)
    A = mb * xi * qh * qpb % P
    c2 = (4 * A**2 - mb * mpb * xi**2 * qh**4 * qpb**4) % P
    c1 = (A - mpb * xi * qh**3 * qpb**3) % P
    return [0, c1, c2, 6 * A**3 % P, 4 * A**4 % P, A**5 % P]


def quintic_root_count(p: int, nu1: int, m: int, mp: int, qh: int, qph: int, xi: int,
                       n2: int | None = None) -> int:
    """Number of u mod p^nu1 solving the congruence, by exhaustive search.

    ``n2`` is accepted for call-site symmetry; the congruence is stated in u
    and does not depend on it.
    """
    P = p**nu1
    coeffs = quintic_coefficients(p, nu1, m, mp, qh, qph, xi)
    u = np.arange(P, dtype=np.int64)
    acc = np.zeros(P, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * u + c) % P
    return int(np.count_nonzero(acc == 0))


def quintic_root_count_mod_p(p: int, m: int, mp: int, qh: int, qph: int, xi: int, nu1: int) -> int:
    """Roots of the same congruence reduced modulo p (a nonzero degree-5 polynomial over F_p)."""
    coeffs = [c % p for c in quintic_coefficients(p, nu1, m, mp, qh, qph, xi)]
    return sum(1 for u in range(p) if sum(c * pow(u, i, p) for i, c in enumerate(coeffs)) % p == 0)
