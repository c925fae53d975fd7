import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from degenwave.core.errors import DomainError
from degenwave.services.specfun import (
    bessel_j,
    bessel_j_prime,
    bessel_zeros,
    gamma,
    gauss_legendre,
    mcmahon_guess,
)

# Bessel orders that occur for alpha in {0, 0.3, 0.5, 1.0, 1.5, 1.9}
ORDERS = (0.5, 0.7 / 1.7, 1.0 / 3.0, 0.0, 1.0, 9.0)


# --- Gamma ---
@pytest.mark.parametrize("x", [0.05, 0.3, 0.5, 1.0, 1.5, 2.5, 7.25, 20.0, 100.5, 170.0])
def test_gamma_matches_reference(x):
    assert gamma(x) == pytest.approx(sp.gamma(x), rel=1e-12)


def test_gamma_known_values():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    for n in range(1, 12):
        assert gamma(float(n)) == pytest.approx(math.factorial(n - 1), rel=1e-13)


def test_gamma_vectorized():
    x = np.array([0.25, 1.75, 4.0])
    np.testing.assert_allclose(gamma(x), sp.gamma(x), rtol=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5, math.inf, math.nan])
def test_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        gamma(x)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.1, max_value=30.0))
def test_gamma_recurrence(x):
    assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-11)


# --- Bessel J ---
@pytest.mark.parametrize("mu", ORDERS)
def test_bessel_j_matches_reference(mu):
    x = np.linspace(0.0, 80.0, 801)
    np.testing.assert_allclose(bessel_j(mu, x), sp.jv(mu, x), rtol=0.0, atol=1e-10)


def test_bessel_j_at_origin():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(0.5, 0.0) == 0.0
    assert bessel_j(1.0 / 3.0, 0.0) == 0.0


def test_bessel_half_order_closed_form():
    x = np.linspace(0.1, 40.0, 200)
    np.testing.assert_allclose(bessel_j(0.5, x), np.sqrt(2.0 / (np.pi * x)) * np.sin(x), atol=1e-12)


def test_bessel_j_large_order_uses_accurate_branch():
    x = np.array([12.5, 15.0, 25.0, 40.0])
    np.testing.assert_allclose(bessel_j(19.0, x), sp.jv(19.0, x), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=1.0, max_value=5.0), st.floats(min_value=0.5, max_value=40.0))
def test_bessel_three_term_recurrence(mu, x):
    lhs = bessel_j(mu - 1.0, x) + bessel_j(mu + 1.0, x)
    assert lhs == pytest.approx(2.0 * mu / x * bessel_j(mu, x), abs=1e-9)


@pytest.mark.parametrize("mu", ORDERS)
def test_bessel_j_prime_matches_reference(mu):
    x = np.linspace(0.05, 60.0, 400)
    np.testing.assert_allclose(bessel_j_prime(mu, x), sp.jvp(mu, x), rtol=0.0, atol=1e-10)


def test_bessel_domain_errors():
    with pytest.raises(DomainError):
        bessel_j(-0.5, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0.5, -1.0)
    with pytest.raises(DomainError):
        bessel_j_prime(0.5, 0.0)


# --- Zeros ---
@pytest.mark.parametrize("mu", [0.0, 1.0, 2.0])
def test_integer_order_zeros_match_reference(mu):
    np.testing.assert_allclose(bessel_zeros(mu, 30), sp.jn_zeros(int(mu), 30), rtol=1e-12)


def test_half_order_zeros_are_multiples_of_pi():
    np.testing.assert_allclose(bessel_zeros(0.5, 20), np.pi * np.arange(1, 21), rtol=1e-13)


@pytest.mark.parametrize("mu", ORDERS)
def test_zeros_are_roots_and_none_are_skipped(mu):
    zeros = bessel_zeros(mu, 25)
    assert np.all(np.diff(zeros) > 0.0)
    np.testing.assert_allclose(sp.jv(mu, zeros), 0.0, atol=1e-11)
    x = np.linspace(1e-3, zeros[-1] + 0.5, 20000)
    values = sp.jv(mu, x)
    assert np.count_nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0) == zeros.size


@pytest.mark.parametrize("mu", [0.7 / 1.7, 1.0 / 3.0, 0.0, 1.0])
def test_zero_gaps_tend_to_pi(mu):
    zeros = bessel_zeros(mu, 51)
    assert abs((zeros[50] - zeros[49]) - math.pi) < 1e-2


def test_mcmahon_guess_is_close():
    n = np.arange(1, 11, dtype=float)
    assert np.max(np.abs(mcmahon_guess(1.0, n) - sp.jn_zeros(1, 10))) < 0.05


def test_zeros_domain_errors():
    with pytest.raises(DomainError):
        bessel_zeros(0.5, 0)
    with pytest.raises(DomainError):
        bessel_zeros(-1.0, 5)


def test_gauss_legendre_is_cached_and_exact():
    nodes, weights = gauss_legendre(6)
    assert gauss_legendre(6)[0] is nodes
    assert not nodes.flags.writeable
    # exact for polynomials of degree 2n - 1
    assert weights @ nodes**10 == pytest.approx(2.0 / 11.0, rel=1e-14)


@pytest.mark.parametrize("mu", [0.0, 0.25, 1.0 / 3.0, 0.5, 1.0])
def test_zeros_interlace_with_next_order(mu):
    lower = bessel_zeros(mu, 51)
    upper = bessel_zeros(mu + 1.0, 50)
    assert np.all(lower[:-1] < upper)
    assert np.all(upper < lower[1:])


@pytest.mark.parametrize("mu", [0.0, 0.25, 1.0 / 3.0, 0.5, 1.0])
def test_derivative_alternates_in_sign_at_zeros(mu):
    zeros = bessel_zeros(mu, 30)
    n = np.arange(1, 31)
    np.testing.assert_array_equal(np.sign(bessel_j_prime(mu, zeros)), (-1.0) ** n)


@pytest.mark.parametrize("mu", [0.0, 0.25, 1.0])
def test_zero_gap_defect_shrinks_monotonically(mu):
    zeros = bessel_zeros(mu, 51)
    defect = np.abs(np.diff(zeros[9:]) - math.pi)
    assert np.all(np.diff(defect) < 0.0)
    assert defect[-1] < 1e-2
