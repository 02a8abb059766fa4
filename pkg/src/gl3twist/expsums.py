"""Complete exponential sums by direct summation: Ramanujan, Gauss, Kloosterman."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modarith import DirichletCharacter, prime_factors, unit_inverse_table


@dataclass(frozen=True)
class ExpSumResult:
    value: complex
    terms: int
    abs_bound: float

    @property
    def within_bound(self) -> bool:
        return abs(self.value) <= self.abs_bound + 1e-9


def divisor_count(n: int) -> int:
    n = abs(n)
    count = 1
    for p in prime_factors(n):
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        count *= a + 1
    return count


def _phase_sum(numerators: np.ndarray, c: int) -> complex:
    # reduce exactly before scaling so large products do not lose bits
    r = np.mod(numerators, c)
    return complex(np.exp(2j * np.pi * r / c).sum())


def ramanujan_sum(q: int, n: int) -> ExpSumResult:
    """c_q(n) = sum over a mod q, (a, q) = 1, of e(n a / q)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    units, _ = unit_inverse_table(q)
    value = _phase_sum(units * (n % q), q)
    return ExpSumResult(value, len(units), float(math.gcd(n, q) * divisor_count(q)))


def gauss_sum(chi: DirichletCharacter) -> ExpSumResult:
    """tau(chi) = sum over a mod p^k of chi(a) e(a / p^k)."""
    q = chi.q
    vals = chi.table()
    a = np.arange(q)
    value = complex((vals * np.exp(2j * np.pi * a / q)).sum())
    return ExpSumResult(value, q, math.sqrt(q))


def kloosterman(a: int, b: int, c: int) -> ExpSumResult:
    """S(a, b; c) = sum over x mod c, (x, c) = 1, of e((a x + b xbar) / c)."""
    if c < 1:
        raise ValueError("c must be >= 1")
    units, inv = unit_inverse_table(c)
    value = _phase_sum((a % c) * units + (b % c) * inv, c)
    g = math.gcd(math.gcd(a, b), c)
    bound = divisor_count(c) * math.sqrt(g) * math.sqrt(c)
    return ExpSumResult(value, len(units), bound)


def kloosterman_value(a: int, b: int, c: int) -> complex:
    return kloosterman(a, b, c).value
