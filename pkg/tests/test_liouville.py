import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degenwave.core.errors import DomainError, TruncationError
from degenwave.models.domain import GridFunction
from degenwave.services.liouville import (
    gauge_factor,
    halfline_problem,
    inverse_transform_coords,
    polynomial_bump,
    potential,
    simulate_halfline,
    transform_coords,
    translated_bump_quotient,
)


def test_alpha_two_potential_is_constant():
    x = np.linspace(0.0, 50.0, 11)
    np.testing.assert_array_equal(potential(2.0, 1.0, x), 0.25)
    assert potential(2.0, 3.0, 7.0) == 0.25


@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0, 6.0])
@pytest.mark.parametrize("length_l", [0.5, 1.0, 2.0])
def test_potential_is_positive_and_finite_on_the_half_line(alpha, length_l):
    values = potential(alpha, length_l, np.linspace(0.0, 100.0, 1001))
    assert np.all(np.isfinite(values))
    assert np.all(values > 0.0)
    assert np.all(np.diff(values) < 0.0)


def test_alpha_four_potential_closed_form():
    x = np.linspace(0.0, 5.0, 6)
    np.testing.assert_allclose(potential(4.0, 1.0, x), 2.0 / (1.0 + x) ** 2)


def test_transform_endpoints():
    assert transform_coords(2.0, 1.0, 1.0) == 0.0
    assert transform_coords(2.0, 1.0, math.exp(-3.0)) == pytest.approx(3.0)
    assert transform_coords(4.0, 1.0, 0.5) == pytest.approx(1.0)
    assert inverse_transform_coords(4.0, 1.0, 1.0) == pytest.approx(0.5)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2.0, 2.5, 4.0]), st.floats(min_value=1e-3, max_value=1.0))
def test_transform_inverts(alpha, x):
    assert inverse_transform_coords(alpha, 1.0, transform_coords(alpha, 1.0, x)) == pytest.approx(x, rel=1e-10)


def test_transform_is_decreasing_and_unbounded():
    x = np.array([1e-6, 1e-3, 0.1, 0.5, 1.0])
    big_x = transform_coords(3.0, 1.0, x)
    assert np.all(np.diff(big_x) < 0.0)
    assert big_x[0] > 1e2


def test_transform_domain_errors():
    with pytest.raises(DomainError):
        transform_coords(1.5, 1.0, 0.5)
    with pytest.raises(DomainError):
        transform_coords(3.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        inverse_transform_coords(3.0, 1.0, -1.0)
    with pytest.raises(DomainError):
        gauge_factor(3.0, 0.0)


def test_gauge_factor():
    assert gauge_factor(4.0, 0.25) == pytest.approx(0.25)


def test_polynomial_bump():
    r = np.array([-1.5, -1.0, 0.0, 0.5, 1.0])
    np.testing.assert_allclose(polynomial_bump(r), [0.0, 0.0, 1.0, 0.421875, 0.0])


def _bump_data(problem, shift: float, cells: int, radius: float = 0.5):
    x = np.linspace(0.0, problem.x_max, cells + 1)
    r = (x - shift) / radius
    psi0 = polynomial_bump(r)
    dpsi0 = np.where(np.abs(r) < 1.0, -6.0 * r * (1.0 - r * r) ** 2 / radius, 0.0)
    return x, psi0, dpsi0


def test_incoming_pulse_reaches_the_boundary_on_time():
    problem = halfline_problem(4.0, 1.0, 8.0, free=True)
    x, psi0, dpsi0 = _bump_data(problem, 2.0, 1600)
    # psi1 = psi0' makes the pulse travel towards X = 0
    trace, _ = simulate_halfline(problem, GridFunction(x, psi0), GridFunction(x, dpsi0), 4.0, 1600)
    peak = trace.times[np.argmax(np.abs(trace.values))]
    assert 1.5 <= peak <= 2.5
    assert np.max(np.abs(trace.values[trace.times < 1.4])) < 1e-4 * np.max(np.abs(trace.values))


@pytest.mark.parametrize("free", [True, False])
def test_halfline_energy_is_conserved(free):
    problem = halfline_problem(4.0, 1.0, 8.0, free=free)
    x, psi0, _ = _bump_data(problem, 3.0, 1600)
    _, energy = simulate_halfline(problem, GridFunction(x, psi0), GridFunction(x, np.zeros_like(x)), 4.0, 1600)
    assert np.max(np.abs(energy.energy - energy.energy[0])) <= 1e-9 * energy.energy[0]


def test_data_too_close_to_truncation_is_rejected():
    problem = halfline_problem(4.0, 1.0, 8.0)
    x, psi0, _ = _bump_data(problem, 6.0, 800)
    zero = GridFunction(x, np.zeros_like(x))
    with pytest.raises(TruncationError):
        simulate_halfline(problem, GridFunction(x, psi0), zero, 4.0, 800)


def test_halfline_problem_validation():
    with pytest.raises(DomainError):
        halfline_problem(1.5, 1.0, 10.0)
    with pytest.raises(DomainError):
        halfline_problem(3.0, 1.0, 0.0)
    assert halfline_problem(3.0, 1.0, 10.0).label == "liouville"
    assert halfline_problem(3.0, 1.0, 10.0, free=True).label == "free"


def test_translated_bump_quotient_grows():
    rows = translated_bump_quotient(4.0, 1.0, 4.0, [1, 2, 3, 4, 5])
    quotients = np.array([r.quotient for r in rows])
    assert [r.shift for r in rows] == [1, 2, 3, 4, 5]
    # equal numerators: the same profile is translated
    assert np.ptp([r.numerator for r in rows]) <= 1e-12 * rows[0].numerator
    assert quotients[4] >= 10.0 * quotients[0]
    assert quotients[4] > quotients[3] > quotients[2]
    assert np.max(quotients[:3]) <= 1.25 * np.min(quotients[:3])


def test_free_quotient_is_flat_while_the_pulse_arrives():
    rows = translated_bump_quotient(4.0, 1.0, 4.0, [1, 2, 3], free=True)
    quotients = np.array([r.quotient for r in rows])
    np.testing.assert_allclose(quotients, quotients[0], rtol=1e-2)


def test_translated_bump_quotient_rejects_bad_shifts():
    with pytest.raises(DomainError):
        translated_bump_quotient(4.0, 1.0, 4.0, [2, 1])
    with pytest.raises(DomainError):
        translated_bump_quotient(4.0, 1.0, 4.0, [])


@pytest.mark.parametrize("alpha", [2.0, 2.5, 4.0])
def test_transform_derivative(alpha):
    x = np.array([0.05, 0.2, 0.5, 0.9])
    h = 1e-6 * x
    slope = (transform_coords(alpha, 1.0, x + h) - transform_coords(alpha, 1.0, x - h)) / (2.0 * h)
    np.testing.assert_allclose(slope, -(x ** (-0.5 * alpha)), rtol=1e-6)


@pytest.mark.parametrize("alpha", [3.0, 4.0, 6.0])
def test_potential_decays_like_inverse_square(alpha):
    limit = alpha * (3.0 * alpha - 4.0) / (4.0 * (alpha - 2.0) ** 2)
    assert potential(alpha, 1.0, 1e3) * 1e3**2 == pytest.approx(limit, rel=1e-2)
