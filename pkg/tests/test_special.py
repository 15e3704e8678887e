import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracentropy.special import EULER_GAMMA, d_alpha, exp_integral, riemann_zeta


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0, 3.7, 10.0])
@pytest.mark.parametrize("beta", [1e-3, 0.1, 1.0, 2.5, 20.0, 200.0])
def test_exp_integral_matches_mpmath(alpha, beta):
    ref = float(mpmath.expint(alpha, beta))
    assert exp_integral(alpha, beta) == pytest.approx(ref, rel=1e-11)


def _continued_fraction(alpha, beta, terms=400):
    # E_a(b) = e^-b / (b + a - 1 a / (b + a + 2 - 2 (a+1) / (b + a + 4 - ...)))
    f = 0.0
    for k in range(terms, 0, -1):
        f = k * (alpha + k - 1) / (beta + alpha + 2 * k - f)
    return math.exp(-beta) / (beta + alpha - f)


@pytest.mark.parametrize("alpha,beta", [(0.5, 1.0), (2.0, 3.0), (1.5, 10.0), (4.0, 0.7)])
def test_exp_integral_matches_continued_fraction(alpha, beta):
    assert exp_integral(alpha, beta) == pytest.approx(_continued_fraction(alpha, beta), rel=1e-9)


@given(st.floats(0.0, 6.0), st.floats(0.05, 30.0))
@settings(max_examples=60, deadline=None)
def test_exp_integral_recurrence(alpha, beta):
    # a E_{a+1}(b) = e^-b - b E_a(b)
    lhs = alpha * exp_integral(alpha + 1.0, beta)
    rhs = math.exp(-beta) - beta * exp_integral(alpha, beta)
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-14)


def test_exp_integral_domain():
    with pytest.raises(ValueError):
        exp_integral(0.5, 0.0)
    with pytest.raises(ValueError):
        exp_integral(0.5, -1.0)


@pytest.mark.parametrize("s", [1.01, 1.3, 1.5, 2.0, 3.0, 4.5, 5.0, 11.0, 40.0])
def test_zeta_matches_mpmath(s):
    assert riemann_zeta(s) == pytest.approx(float(mpmath.zeta(s)), rel=1e-12)


def test_zeta_known_values():
    assert riemann_zeta(2.0) == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert riemann_zeta(4.0) == pytest.approx(math.pi**4 / 90, rel=1e-14)


def test_zeta_rejects_pole_and_below():
    for s in (1.0, 0.5, -2.0):
        with pytest.raises(ValueError):
            riemann_zeta(s)


@pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0, 2.0, 5.0])
def test_d_alpha_matches_defining_integral(alpha):
    # D_a = exp(int_0^1 ln(u (-ln u)^a) du)
    with mpmath.workdps(25):
        val = mpmath.quad(lambda u: mpmath.log(u) + alpha * mpmath.log(-mpmath.log(u)), [0, 0.5, 1])
    assert d_alpha(alpha) == pytest.approx(float(mpmath.exp(val)), rel=1e-12)


def test_d_one_value():
    assert d_alpha(1.0) == pytest.approx(math.exp(-1.0 - EULER_GAMMA), rel=1e-15)
    assert round(d_alpha(1.0), 5) == 0.20655


def test_euler_gamma():
    assert EULER_GAMMA == pytest.approx(float(mpmath.euler), rel=1e-15)
    assert np.isfinite(EULER_GAMMA)
