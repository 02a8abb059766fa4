import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl3twist.expsums import gauss_sum, kloosterman, ramanujan_sum
from gl3twist.modarith import DirichletCharacter, PrimePowerModulus, mod_inv


def brute_kloosterman(a, b, c):
    return sum(np.exp(2j * np.pi * (a * x + b * mod_inv(x, c)) / c) for x in range(1, c + 1) if math.gcd(x, c) == 1)


@pytest.mark.parametrize("q,n,val", [(6, 1, 1), (3, 3, 2), (4, 2, -2)])
def test_ramanujan_examples(q, n, val):
    assert ramanujan_sum(q, n).value == pytest.approx(val, abs=1e-12)


def test_kloosterman_examples():
    assert kloosterman(1, 1, 3).value == pytest.approx(-1, abs=1e-12)
    assert kloosterman(1, 2, 5).value == pytest.approx(-(1 + math.sqrt(5)), abs=1e-12)
    for c in (7, 12, 25):
        assert kloosterman(0, 5, c).value == pytest.approx(ramanujan_sum(c, 5).value, abs=1e-10)


def test_kloosterman_counts_every_unit():
    r = kloosterman(2, 3, 35)
    assert r.terms == 24


@pytest.mark.parametrize("q", [9, 27])
def test_gauss_modulus_primitive(q):
    p, k = 3, round(math.log(q, 3))
    for j in (1, 2, 5):
        assert abs(gauss_sum(DirichletCharacter.primitive(p, k, j)).value) == pytest.approx(math.sqrt(q), abs=1e-10)


def test_gauss_imprimitive_matches_direct_sum():
    chi = DirichletCharacter(PrimePowerModulus(3, 3), 3)
    direct = sum(chi(a) * np.exp(2j * np.pi * a / 27) for a in range(27))
    assert gauss_sum(chi).value == pytest.approx(direct, abs=1e-10)


@settings(max_examples=150, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 200))
def test_weil_bound_and_symmetry(a, b, c):
    r = kloosterman(a, b, c)
    assert r.within_bound
    assert abs(r.value - kloosterman(b, a, c).value) < 1e-10
    assert abs(r.value - brute_kloosterman(a, b, c)) < 1e-9
