"""Arithmetic in (Z/p^k Z)* and primitive Dirichlet characters of prime-power conductor.

Characters are realized through a full discrete-log table, so moduli are capped
at ``MAX_MODULUS``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidModulus, NonInvertible, NotAUnit

MAX_MODULUS = 10**7


def e(x):
    """Additive character e(x) = exp(2 pi i x); accepts scalars or arrays."""
    return np.exp(2j * np.pi * np.asarray(x, dtype=float))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n >= 1, increasing."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer; 0 maps to infinity-like large value."""
    if n == 0:
        return 10**9
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def mod_inv(x: int, m: int) -> int:
    """Inverse of x modulo m, in [0, m).  Modulus 1 maps everything to 0."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return 0
    if math.gcd(x, m) != 1:
        raise NonInvertible(f"{x} is not invertible mod {m}")
    return pow(x, -1, m)


@lru_cache(maxsize=256)
def unit_inverse_table(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Units of Z/mZ and their inverses, as int64 arrays (m=1 gives ([0],[0]))."""
    if m == 1:
        z = np.zeros(1, dtype=np.int64)
        return z, z
    xs = [x for x in range(m) if math.gcd(x, m) == 1]
    inv = [pow(x, -1, m) for x in xs]
    units = np.array(xs, dtype=np.int64)
    inverses = np.array(inv, dtype=np.int64)
    units.setflags(write=False)
    inverses.setflags(write=False)
    return units, inverses


def multiplicative_order(g: int, m: int, phi: int) -> int:
    order = phi
    for f in prime_factors(phi):
        while order % f == 0 and pow(g, order // f, m) == 1:
            order //= f
    return order


@dataclass(frozen=True)
class PrimePowerModulus:
    """The modulus q = p^k for an odd prime p, with phi(q) and the least primitive root."""

    p: int
    k: int
    q: int = field(init=False)
    phi: int = field(init=False)
    g: int = field(init=False)

    def __post_init__(self):
        p, k = self.p, self.k
        if k < 1:
            raise InvalidModulus("exponent k must be >= 1")
        if p == 2 or not is_prime(p):
            raise InvalidModulus(f"p={p} must be an odd prime")
        q = p**k
        if q > MAX_MODULUS:
            raise InvalidModulus(f"p^k = {q} exceeds the table cap {MAX_MODULUS}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "phi", p ** (k - 1) * (p - 1))
        object.__setattr__(self, "g", _least_primitive_root(p, k))

    def is_unit(self, n: int) -> bool:
        return n % self.p != 0


@lru_cache(maxsize=64)
def _least_primitive_root(p: int, k: int) -> int:
    q = p**k
    phi = p ** (k - 1) * (p - 1)
    for g in range(2, q):
        if g % p and multiplicative_order(g, q, phi) == phi:
            return g
    raise InvalidModulus(f"no primitive root mod {q}")  # unreachable for odd p


def primitive_root(m: PrimePowerModulus) -> int:
    """Smallest g >= 2 of multiplicative order phi(p^k) modulo p^k."""
    return m.g


@lru_cache(maxsize=32)
def _dlog_table(p: int, k: int) -> np.ndarray:
    m = PrimePowerModulus(p, k)
    table = np.full(m.q, -1, dtype=np.int64)
    x = 1
    for i in range(m.phi):
        table[x] = i
        x = x * m.g % m.q
    table.setflags(write=False)
    return table


def dlog_table(m: PrimePowerModulus) -> np.ndarray:
    """Array t with g^t[u] = u mod q for units u, and -1 at non-units."""
    return _dlog_table(m.p, m.k)


def discrete_log(u: int, m: PrimePowerModulus) -> int:
    if u % m.p == 0:
        raise NotAUnit(f"{u} is not a unit mod {m.q}")
    return int(dlog_table(m)[u % m.q])


@dataclass(frozen=True)
class DirichletCharacter:
    """chi(u) = e(j * dlog(u) / phi) on units, 0 on multiples of p."""

    modulus: PrimePowerModulus
    j: int

    def __post_init__(self):
        object.__setattr__(self, "j", self.j % self.modulus.phi)

    @classmethod
    def primitive(cls, p: int, k: int, j: int) -> "DirichletCharacter":
        m = PrimePowerModulus(p, k)
        if (j % m.phi) % p == 0:
            raise InvalidModulus(f"index j={j} is divisible by p={p}; character is imprimitive")
        return cls(m, j)

    @property
    def is_primitive(self) -> bool:
        return self.j % self.modulus.p != 0

    @property
    def q(self) -> int:
        return self.modulus.q

    def exponent(self, n: int) -> int | None:
        """Integer a with chi(n) = e(a/phi), or None for a non-unit."""
        m = self.modulus
        if n % m.p == 0:
            return None
        return self.j * int(dlog_table(m)[n % m.q]) % m.phi

    def __call__(self, n: int) -> complex:
        return char_eval(self, n)

    def table(self) -> np.ndarray:
        return _char_table(self.modulus.p, self.modulus.k, self.j)

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, -self.j)


@lru_cache(maxsize=64)
def _char_table(p: int, k: int, j: int) -> np.ndarray:
    m = PrimePowerModulus(p, k)
    d = _dlog_table(p, k)
    unit = d >= 0
    vals = np.zeros(m.q, dtype=complex)
    idx = (j * d[unit]) % m.phi
    vals[unit] = np.exp(2j * np.pi * idx / m.phi)
    vals.setflags(write=False)
    return vals


def char_eval(chi: DirichletCharacter, n: int) -> complex:
    """chi(n): a unit-modulus complex number for units, exactly 0 otherwise."""
    a = chi.exponent(n)
    if a is None:
        return 0j
    if a == 0:
        return 1 + 0j
    return complex(np.exp(2j * np.pi * a / chi.modulus.phi))
