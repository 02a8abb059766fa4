"""The DFI delta symbol in exact-sum form, its p-adic refinement, and the g(q, x) kernel.

With a bump w supported in [Q/2, Q] and sum_{m>=1} w(m) = 1,

    delta(n) = sum_{q <= Q} c_q(n) Delta_q(n),
    Delta_q(u) = sum_{r >= 1} (q r)^{-1} (w(q r) - w(|u| / (q r))),

holds exactly: grouping m = q r and using sum_{q | m} c_q(n) = m [m | n] both
pieces collapse to sum_{d | n} w(d), which cancel unless n = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NotDivisible, OutOfRange, QuadratureFailure
from .modarith import prime_factors, unit_inverse_table


def _bump_profile(s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s, dtype=float)
    inside = np.abs(s) < 1
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


@dataclass(frozen=True)
class DeltaExpansion:
    Q: float
    p: int | None = None
    lam: int | None = None
    norm: float = field(init=False, repr=False)

    def __post_init__(self):
        if self.Q < 4:
            raise OutOfRange("Q must be >= 4")
        ms = np.arange(1, int(math.floor(self.Q)) + 1, dtype=float)
        total = float(self._raw(ms).sum())
        object.__setattr__(self, "norm", 1.0 / total)

    def _raw(self, x):
        s = (4.0 * np.asarray(x, dtype=float) - 3.0 * self.Q) / self.Q
        return _bump_profile(s)

    def w(self, x):
        """The normalized bump; vectorized, zero outside (Q/2, Q)."""
        return self.norm * self._raw(x)

    @property
    def qmax(self) -> int:
        return int(math.floor(self.Q))

    def Delta(self, q: int, u) -> np.ndarray:
        """Delta_q(u) for real u with |u| < Q^2/4 (vectorized in u)."""
        u = np.abs(np.atleast_1d(np.asarray(u, dtype=float)))
        r = np.arange(1, self.qmax // q + 1, dtype=float)
        qr = q * r
        const = float((self.w(qr) / qr).sum())
        moving = (self.w(u[:, None] / qr[None, :]) / qr[None, :]).sum(axis=1)
        return const - moving


# -- Ramanujan sums ----------------------------------------------------------

@lru_cache(maxsize=4096)
def _mobius_divisor_pairs(q: int) -> tuple[tuple[int, int], ...]:
    """(d, mu(q/d)) for the divisors d of q with mu(q/d) != 0."""
    pairs = [(1, 1)]
    n = q
    for p in prime_factors(q):
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        pk = p**a
        nxt = []
        for d, mu in pairs:
            nxt.append((d * pk, mu))
            nxt.append((d * pk // p, -mu))
        pairs = nxt
    return tuple(pairs)


def ramanujan_exact(q: int, n) -> np.ndarray:
    """c_q(n) as exact integers via sum_{d | (q, n)} mu(q/d) d (vectorized in n)."""
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    out = np.zeros(n.shape, dtype=np.int64)
    for d, mu in _mobius_divisor_pairs(q):
        out += np.where(n % d == 0, mu * d, 0)
    return out


def ramanujan_enumerated(q: int, n) -> np.ndarray:
    """c_q(n) by summing e(a n / q) over units a (vectorized in n)."""
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    units, _ = unit_inverse_table(q)
    r = np.mod(np.mod(n, q)[:, None] * units[None, :], q)
    return np.cos(2 * np.pi * r / q).sum(axis=1)


# -- delta evaluators --------------------------------------------------------

def _check_range(exp: DeltaExpansion, n: np.ndarray) -> None:
    if n.size and np.abs(n).max() >= exp.Q**2 / 4:
        raise OutOfRange(f"|n| must be < Q^2/4 = {exp.Q**2 / 4}")


def delta_exact_many(exp: DeltaExpansion, ns) -> np.ndarray:
    ns = np.atleast_1d(np.asarray(ns, dtype=np.int64))
    _check_range(exp, ns)
    total = np.zeros(ns.shape, dtype=float)
    for q in range(1, exp.qmax + 1):
        total += ramanujan_exact(q, ns) * exp.Delta(q, ns)
    return total


def delta_exact(exp: DeltaExpansion, n: int) -> float:
    return float(delta_exact_many(exp, [n])[0])


def residue_recombination_check(q: int, p: int, lam: int, n: int) -> tuple[complex, complex]:
    """Both sides of sum_{c mod q p^lam, (c,q)=1} e(nc/(q p^lam)) = sum_{r=0}^{lam} c_{q p^(lam-r)}(n)."""
    if math.gcd(q, p) != 1:
        raise ValueError("q must be coprime to p")
    M = q * p**lam
    c = np.arange(M, dtype=np.int64)
    c = c[np.gcd(c, q) == 1]
    lhs = complex(np.exp(2j * np.pi * np.mod(n * c, M) / M).sum())
    rhs = 0j
    for r in range(lam + 1):
        Mr = q * p ** (lam - r)
        units, _ = unit_inverse_table(Mr)
        rhs += complex(np.exp(2j * np.pi * np.mod(n * units, Mr) / Mr).sum())
    return lhs, rhs


def _s_max(Q: float, p: int) -> int:
    s = 0
    while p ** (s + 1) <= Q:
        s += 1
    return s


def delta_padic_many(exp: DeltaExpansion, ns) -> np.ndarray:
    """delta(n / p^lam) through the r-family (moduli q p^(lam-r)) and s-family (moduli q p^(lam+s))."""
    p, lam = exp.p, exp.lam
    if p is None or lam is None:
        raise ValueError("expansion needs p and lam for the p-adic form")
    ns = np.atleast_1d(np.asarray(ns, dtype=np.int64))
    pl = p**lam
    if np.any(ns % pl):
        raise NotDivisible(f"p^lam = {pl} must divide every n")
    reduced = ns // pl
    _check_range(exp, reduced)
    total = np.zeros(ns.shape, dtype=float)
    for q in range(1, exp.qmax + 1):
        if q % p == 0:
            continue
        csum = sum(ramanujan_exact(q * p ** (lam - r), ns) for r in range(lam + 1))
        total += csum / pl * exp.Delta(q, reduced)
    for s in range(1, _s_max(exp.Q, p) + 1):
        ps = p**s
        for q in range(1, int(exp.Q // ps) + 1):
            if q % p == 0:
                continue
            total += ramanujan_exact(q * p ** (lam + s), ns) / pl * exp.Delta(ps * q, reduced)
    return total


def delta_padic(exp: DeltaExpansion, n: int) -> float:
    return float(delta_padic_many(exp, [n])[0])


# -- the g kernel --------------------------------------------------------------

_S_NODES, _S_WEIGHTS = np.polynomial.legendre.leggauss(40)


def _bump_cosine_moments(exp: DeltaExpansion, freqs: np.ndarray, panels: int) -> np.ndarray:
    """int w(v) cos(2 pi f v) dv over [Q/2, Q] for each f, by composite Gauss-Legendre."""
    Q = exp.Q
    edges = np.linspace(Q / 2, Q, panels + 1)
    half = 0.5 * np.diff(edges)
    v = (0.5 * (edges[:-1] + edges[1:]))[:, None] + half[:, None] * _S_NODES[None, :]
    wv = (exp.w(v) * _S_WEIGHTS[None, :] * half[:, None]).ravel()
    v = v.ravel()
    out = np.empty(len(freqs))
    for i in range(0, len(freqs), 256):
        f = freqs[i:i + 256]
        out[i:i + 256] = np.cos(2 * np.pi * f[:, None] * v[None, :]) @ wv
    return out


def w_integral(exp: DeltaExpansion) -> float:
    """The continuous integral of w (equal to 1 up to an Euler-Maclaurin remainder)."""
    return float(_bump_cosine_moments(exp, np.zeros(1), 64)[0])


def g_kernel(exp: DeltaExpansion, q: int, x: float, tol: float = 1e-10) -> float:
    """Regular part of g(q, x), the Fourier dual of Delta_q(u) in the normalization

        Delta_q(u) = (qQ)^{-1} int g(q, x) e(u x / (qQ)) dx.

    The u-constant piece of Delta_q transforms to a point mass at x = 0 and is
    left out.  What remains is -2 sum_{r >= 1} int w(v) cos(2 pi r v x / Q) dv,
    summed until the bump's Fourier tail is below double precision.
    """
    if not 1 <= q <= exp.Q:
        raise OutOfRange("need 1 <= q <= Q")
    ax = abs(x)
    if ax < 1e-2:
        raise OutOfRange("|x| must be >= 1e-2 (the x = 0 point mass is not represented)")
    # the r-th term is the bump transform at about r|x|/4 cycles per unit of s in (-1, 1);
    # exp(-1/(1-s^2)) has transform ~ exp(-sqrt(2 omega)), negligible once r|x| > 500
    rmax = int(math.ceil(500.0 / ax))
    freqs = np.arange(1, rmax + 1) * ax / exp.Q
    cycles = freqs[-1] * exp.Q / 2
    panels = max(16, int(math.ceil(cycles / 4)))
    coarse = _bump_cosine_moments(exp, freqs, panels).sum()
    fine = _bump_cosine_moments(exp, freqs, 2 * panels).sum()
    if abs(coarse - fine) > tol * max(1.0, abs(fine)):
        raise QuadratureFailure(f"g_kernel: panel refinement disagrees by {abs(coarse - fine):.3e}")
    return -2.0 * float(fine)


def g_kernel_poisson(exp: DeltaExpansion, x: float) -> float:
    """The same regular part through Poisson summation in r: int w - (Q/|x|) sum_{k>=1} w(kQ/|x|)."""
    ax = abs(x)
    k = np.arange(1, int(ax) + 2, dtype=float)
    return w_integral(exp) - (exp.Q / ax) * float(exp.w(k * exp.Q / ax).sum())
