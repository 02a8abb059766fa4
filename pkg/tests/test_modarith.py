import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl3twist.errors import InvalidModulus, NonInvertible, NotAUnit
from gl3twist.modarith import (DirichletCharacter, PrimePowerModulus, char_eval, discrete_log, e, is_prime,
                               mod_inv, prime_factors, primitive_root, valuation)


def test_mod_inv_examples():
    assert mod_inv(3, 10) == 7
    assert mod_inv(1, 97) == 1
    assert mod_inv(2, 9) == 5


def test_mod_inv_rejects_non_units():
    with pytest.raises(NonInvertible):
        mod_inv(6, 9)


@pytest.mark.parametrize("p,k,g", [(3, 2, 2), (5, 1, 2), (3, 3, 2)])
def test_primitive_root_examples(p, k, g):
    assert primitive_root(PrimePowerModulus(p, k)) == g


def test_primitive_root_matches_brute_force_order():
    for p, k in [(3, 4), (5, 3), (7, 2), (11, 2), (13, 1)]:
        m = PrimePowerModulus(p, k)
        g = primitive_root(m)
        seen = {pow(g, i, m.q) for i in range(m.phi)}
        assert len(seen) == m.phi
        # no smaller candidate generates the unit group
        for h in range(2, g):
            if h % p and len({pow(h, i, m.q) for i in range(m.phi)}) == m.phi:
                pytest.fail(f"{h} < {g} is also a generator mod {m.q}")


def test_modulus_invariants():
    with pytest.raises(InvalidModulus):
        PrimePowerModulus(2, 3)
    with pytest.raises(InvalidModulus):
        PrimePowerModulus(9, 1)


def test_discrete_log_examples():
    m = PrimePowerModulus(3, 2)
    assert discrete_log(1, m) == 0
    assert discrete_log(m.g, m) == 1
    assert discrete_log(7, m) == 4
    with pytest.raises(NotAUnit):
        discrete_log(3, m)


def test_char_eval_examples():
    chi = DirichletCharacter.primitive(3, 2, 1)
    assert char_eval(chi, 1) == pytest.approx(1)
    assert char_eval(chi, 3) == 0
    assert char_eval(chi, 7) == pytest.approx(cmath.exp(2j * math.pi * 4 / 6), abs=1e-14)


def test_imprimitive_index_rejected():
    with pytest.raises(InvalidModulus):
        DirichletCharacter.primitive(3, 3, 3)


def test_helpers():
    assert is_prime(343) is False and is_prime(7919)
    assert prime_factors(360) == [2, 3, 5]
    assert valuation(250, 5) == 3
    assert e(0.25) == pytest.approx(1j)


units_27 = st.integers(0, 26).filter(lambda u: u % 3)


@settings(max_examples=200, deadline=None)
@given(units_27, units_27, st.integers(1, 17).filter(lambda j: j % 3))
def test_multiplicative_on_units(u, v, j):
    chi = DirichletCharacter.primitive(3, 3, j)
    assert abs(char_eval(chi, u * v) - char_eval(chi, u) * char_eval(chi, v)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(-10**6, 10**6))
def test_periodic(n):
    chi = DirichletCharacter.primitive(5, 2, 3)
    assert char_eval(chi, n + 25) == char_eval(chi, n)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10**4), st.integers(2, 10**4))
def test_inverse_is_involution(x, m):
    if math.gcd(x, m) != 1:
        return
    assert mod_inv(mod_inv(x, m), m) == x % m


@pytest.mark.parametrize("p,k", [(3, 3), (5, 2), (7, 2)])
def test_primitivity_witness(p, k):
    """Primitive characters are non-trivial on 1 + p^(k-1) Z; imprimitive ones are trivial there."""
    phi = p ** (k - 1) * (p - 1)
    step = p ** (k - 1)
    for j in range(phi):
        chi = DirichletCharacter(PrimePowerModulus(p, k), j)
        nontrivial = any(abs(char_eval(chi, 1 + z * step) - 1) > 1e-12 for z in range(p))
        assert nontrivial == (j % p != 0)


def test_table_agrees_with_pointwise():
    chi = DirichletCharacter.primitive(7, 2, 5)
    tab = chi.table()
    assert np.allclose([char_eval(chi, n) for n in range(49)], tab)
