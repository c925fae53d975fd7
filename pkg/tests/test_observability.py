import math

import numpy as np
import pytest

from degenwave.core.errors import DegenerateInputError, DomainError, ResolutionError
from degenwave.models.domain import ModalState
from degenwave.services.observability import (
    bracket_critical_time,
    characteristic_travel_time,
    controllability_time,
    counting_density,
    d_plus,
    exponent_gram_spectrum,
    frequency_gaps,
    gram_min_eigenvalue,
    gram_sweep,
    hidden_regularity_constant,
    ingham_two_sided_check,
    jacobi_eigenvalues,
    observability_ratio,
    observability_report,
)
from degenwave.services.spectral_basis import build_basis
from degenwave.services.specfun import bessel_zeros
from tests.conftest import TEST_ALPHAS


def test_classical_controllability_time_is_twice_the_length():
    assert controllability_time(0.0, 1.0) == 2.0
    assert controllability_time(0.0, 3.0) == 6.0
    assert controllability_time(1.0, 1.0) == 4.0


def test_controllability_time_rejects_alpha_two():
    with pytest.raises(DomainError):
        controllability_time(2.0, 1.0)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0, 1.5, 1.9])
@pytest.mark.parametrize("length_l", [0.5, 1.0, 2.0])
def test_travel_time_is_half_the_controllability_time(alpha, length_l):
    t_alpha = controllability_time(alpha, length_l)
    assert characteristic_travel_time(alpha, length_l) == pytest.approx(0.5 * t_alpha, rel=1e-10)


def test_travel_time_diverges_from_alpha_two():
    assert characteristic_travel_time(2.0, 1.0) == math.inf
    assert characteristic_travel_time(3.0, 1.0) == math.inf


@pytest.mark.parametrize("alpha", TEST_ALPHAS + (0.0, 1.9))
@pytest.mark.parametrize("length_l", [0.5, 1.0, 2.0])
def test_density_identity(alpha, length_l):
    assert 2.0 * math.pi * d_plus(alpha, length_l) == pytest.approx(controllability_time(alpha, length_l), rel=1e-12)


@pytest.mark.parametrize("alpha", TEST_ALPHAS)
def test_empirical_counting_density(alpha):
    rho = 1.0 - 0.5 * alpha
    mu = build_basis(alpha, 1.0, 1).params.mu
    density = counting_density(bessel_zeros(mu, 500), rho, 1.0)
    assert density == pytest.approx(d_plus(alpha, 1.0), rel=0.02)


def test_counting_density_needs_enough_zeros():
    with pytest.raises(ResolutionError) as excinfo:
        counting_density(bessel_zeros(0.5, 20), 1.0, 1.0)
    assert excinfo.value.required == 100


def test_frequency_gaps_approach_uniform_spacing():
    basis = build_basis(0.5, 1.0, 40)
    gaps = frequency_gaps(basis)
    assert np.all(gaps > 0.0)
    assert gaps[-1] == pytest.approx(0.75 * math.pi, rel=1e-3)


# --- Jacobi ---
@pytest.mark.parametrize("size, seed", [(2, 0), (5, 1), (12, 2), (30, 3)])
def test_jacobi_matches_lapack(size, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    hermitian = a + a.conj().T
    expected = np.linalg.eigvalsh(hermitian)
    np.testing.assert_allclose(jacobi_eigenvalues(hermitian), expected, atol=1e-10 * np.abs(expected).max())


def test_jacobi_real_symmetric_and_diagonal():
    np.testing.assert_allclose(jacobi_eigenvalues(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0])
    np.testing.assert_allclose(jacobi_eigenvalues([[2.0, 1.0], [1.0, 2.0]]), [1.0, 3.0], atol=1e-14)


def test_jacobi_rejects_non_hermitian():
    with pytest.raises(DomainError):
        jacobi_eigenvalues([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(DomainError):
        jacobi_eigenvalues(np.ones((2, 3)))


def test_duplicate_exponents_are_rejected():
    with pytest.raises(DegenerateInputError):
        exponent_gram_spectrum([1.0, 2.0, 1.0], 3.0)


# --- Ingham regime split ---
def test_gram_minimum_is_stable_above_threshold():
    basis = build_basis(1.0, 1.0, 40)
    small = gram_min_eigenvalue(basis, 4.8, 10)
    large = gram_min_eigenvalue(basis, 4.8, 40)
    assert large > 0.0
    assert small / large <= 2.0


def test_gram_minimum_collapses_below_threshold():
    basis = build_basis(1.0, 1.0, 40)
    small = gram_min_eigenvalue(basis, 3.2, 10)
    large = gram_min_eigenvalue(basis, 3.2, 40)
    assert large < small / 10.0


def test_bracket_critical_time_narrows_bracket():
    t_alpha = controllability_time(1.0, 1.0)
    low, high = bracket_critical_time(1.0, 1.0, 10, 40, 0.8 * t_alpha, 1.2 * t_alpha, iterations=5)
    assert 0.8 * t_alpha <= low < high <= 1.2 * t_alpha
    assert high - low == pytest.approx(0.4 * t_alpha / 32)


def test_bracket_critical_time_requires_a_crossing():
    with pytest.raises(DomainError):
        bracket_critical_time(1.0, 1.0, 10, 40, 4.8, 6.0, iterations=2)


def test_gram_sweep_rows():
    rows = gram_sweep(0.5, 1.0, [2.0, 4.0], [4, 8], jobs=1)
    assert [(r.horizon_t, r.n) for r in rows] == [(2.0, 4), (2.0, 8), (4.0, 4), (4.0, 8)]
    assert all(r.lambda_min > 0.0 for r in rows)
    # adding exponents can only lower the smallest eigenvalue
    assert rows[1].lambda_min <= rows[0].lambda_min * (1.0 + 1e-9)
    assert rows[3].lambda_min <= rows[2].lambda_min * (1.0 + 1e-9)


# --- Observability experiments ---
def test_ingham_bounds_bracket_quotients(basis_half):
    t = 1.2 * controllability_time(0.5, 1.0)
    bounds = ingham_two_sided_check(basis_half, t, trials=200, seed=3, count=8)
    tol = 1e-9 * bounds.gram_max
    assert bounds.gram_min - tol <= bounds.c_low <= bounds.c_high <= bounds.gram_max + tol
    assert bounds.gram_min > 0.0


def test_ingham_check_needs_trials(basis_half):
    with pytest.raises(DomainError):
        ingham_two_sided_check(basis_half, 3.0, trials=5)


def test_observability_ratio_of_zero_state(basis_half):
    zero = ModalState(np.zeros(4), np.zeros(4), basis_half)
    with pytest.raises(DegenerateInputError):
        observability_ratio(zero, 3.0)


def test_hidden_regularity_constant_is_stable():
    basis = build_basis(0.5, 1.0, 10)
    t = 1.2 * controllability_time(0.5, 1.0)
    first = hidden_regularity_constant(basis, t, trials=100, seed=1)
    second = hidden_regularity_constant(basis, t, trials=100, seed=2)
    assert abs(first - second) <= 0.5 * max(first, second)


def test_observability_report_fields():
    basis = build_basis(0.5, 1.0, 6)
    t_alpha = controllability_time(0.5, 1.0)
    report = observability_report(basis, 1.2 * t_alpha, trials=20, seed=0)
    assert report.t_alpha == pytest.approx(t_alpha)
    assert report.travel_time == pytest.approx(0.5 * t_alpha, rel=1e-10)
    assert 2.0 * math.pi * report.d_plus == pytest.approx(t_alpha)
    assert report.mode_count == 6
    assert 0.0 < report.ratio_stats.min <= report.ratio_stats.mean <= report.ratio_stats.max
    assert report.hidden_regularity_constant > 0.0
