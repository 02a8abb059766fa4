import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gl3twist.deltacore import (DeltaExpansion, delta_exact, delta_exact_many, delta_padic, g_kernel,
                                g_kernel_poisson, ramanujan_enumerated, ramanujan_exact,
                                residue_recombination_check, w_integral)
from gl3twist.errors import NotDivisible, OutOfRange


@pytest.mark.parametrize("n,Q,expected", [(0, 20, 1.0), (7, 20, 0.0), (-12, 30, 0.0)])
def test_delta_exact_examples(n, Q, expected):
    assert delta_exact(DeltaExpansion(Q), n) == pytest.approx(expected, abs=1e-10)


def test_delta_exact_whole_range_q50():
    ns = np.arange(-624, 625)
    err = delta_exact_many(DeltaExpansion(50), ns) - (ns == 0)
    assert np.abs(err).max() < 1e-10


def test_small_Q_rejected():
    with pytest.raises(Exception):
        DeltaExpansion(3)


@pytest.mark.parametrize("q,p,lam,n,expected", [(1, 3, 2, 0, 9), (2, 3, 1, 1, 0)])
def test_recombination_examples(q, p, lam, n, expected):
    lhs, rhs = residue_recombination_check(q, p, lam, n)
    assert lhs == pytest.approx(expected, abs=1e-9)
    assert rhs == pytest.approx(expected, abs=1e-9)


def test_recombination_sides_agree():
    lhs, rhs = residue_recombination_check(4, 5, 2, 10)
    assert abs(lhs - rhs) < 1e-9


@given(st.integers(1, 40), st.integers(-500, 500))
def test_ramanujan_closed_form_matches_enumeration(q, n):
    assert np.asarray(ramanujan_exact(q, n)).item() == pytest.approx(np.asarray(ramanujan_enumerated(q, n)).item(), abs=1e-9)


def test_delta_padic_examples():
    e = DeltaExpansion(15, 3, 2)
    assert delta_padic(e, 0) == pytest.approx(1.0, abs=1e-9)
    assert delta_padic(e, 9) == pytest.approx(0.0, abs=1e-9)
    assert delta_padic(e, 18) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(NotDivisible):
        delta_padic(e, 15)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(1, 3), st.integers(-200, 200))
def test_padic_equals_plain(p, lam, n):
    assert delta_padic(DeltaExpansion(30, p, lam), n * p**lam) == pytest.approx(
        delta_exact(DeltaExpansion(30), n), abs=1e-9)


def test_bump_normalized():
    e = DeltaExpansion(100)
    assert math.fsum(e.w(np.arange(1, 200)).tolist()) == pytest.approx(1.0, abs=1e-12)
    assert abs(w_integral(e) - 1) < 1e-6


@pytest.mark.parametrize("Q", [20, 100])
@pytest.mark.parametrize("x", [0.5, 3.0, 16.0, 64.0, -40.0])
def test_g_kernel_two_routes(Q, x):
    e = DeltaExpansion(Q)
    assert g_kernel(e, Q // 2, x) == pytest.approx(g_kernel_poisson(e, x), abs=1e-12)


def test_g_kernel_near_one_for_small_x():
    assert g_kernel(DeltaExpansion(100), 50, 0.5) == pytest.approx(1.0, abs=1e-5)


def test_g_kernel_decay_at_three():
    assert abs(g_kernel(DeltaExpansion(100), 50, 3.0)) <= 10 * 3.0**-4


@pytest.mark.parametrize("Q", [20, 100])
def test_g_kernel_effective_support(Q):
    e = DeltaExpansion(Q)
    x0 = 10 * Q**0.1
    xs = x0 * np.linspace(1, 20, 60)
    assert max(abs(g_kernel(e, Q // 2, x)) for x in xs) <= 1e-2


def test_g_kernel_envelope_shrinks_over_doublings():
    e = DeltaExpansion(100)
    sups = []
    for X in (3, 6, 12, 24, 48, 96):
        xs = np.linspace(X, 4 * X, 40)
        sups.append(max(abs(g_kernel(e, 50, x)) for x in xs))
    assert all(b < a for a, b in zip(sups, sups[1:]))


@pytest.mark.xfail(strict=True, reason="regular part does not decay like 10|x|^-4 at moderate x")
def test_g_kernel_fourth_power_decay_at_moderate_x():
    e = DeltaExpansion(100)
    assert all(abs(g_kernel(e, 50, x)) <= 10 * x**-4 for x in (8.0, 16.0, 32.0))


def test_g_kernel_domain():
    e = DeltaExpansion(100)
    with pytest.raises(OutOfRange):
        g_kernel(e, 0, 3.0)
    with pytest.raises(OutOfRange):
        g_kernel(e, 50, 1e-3)
