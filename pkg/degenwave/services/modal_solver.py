"""Exact-in-time evolution of the free equation in eigen-coordinates."""

import numpy as np

from degenwave.core.errors import DomainError
from degenwave.models.domain import ComplexModeAmps, EnergyTrace, GridFunction, ModalState, SpectralBasis
from degenwave.services.spectral_basis import synthesize


def modal_state(v0, v1, basis: SpectralBasis) -> ModalState:
    return ModalState(np.asarray(v0, dtype=float), np.asarray(v1, dtype=float), basis)


def _omega(state: ModalState) -> np.ndarray:
    omega = state.basis.frequencies[: state.size]
    if np.any(omega <= 0.0):
        raise DomainError("eigenvalues must be positive")
    return omega


def to_amplitudes(state: ModalState) -> ComplexModeAmps:
    """c_{+-n} = (v0 +- v1 / (i sqrt(lambda_n))) / 2."""
    omega = _omega(state)
    c_plus = 0.5 * (state.v0 + state.v1 / (1j * omega))
    return ComplexModeAmps(c_plus=c_plus, c_minus=np.conj(c_plus))


def from_amplitudes(amps: ComplexModeAmps, basis: SpectralBasis) -> ModalState:
    n = amps.c_plus.size
    omega = basis.frequencies[:n]
    v0 = (amps.c_plus + amps.c_minus).real
    v1 = (1j * omega * (amps.c_plus - amps.c_minus)).real
    return ModalState(v0, v1, basis)


def evolve(state: ModalState, t: float) -> ModalState:
    if not np.isfinite(t):
        raise DomainError(f"evolve: time must be finite, got {t}")
    omega = _omega(state)
    c, s = np.cos(omega * t), np.sin(omega * t)
    return ModalState(
        v0=state.v0 * c + state.v1 * s / omega,
        v1=-state.v0 * omega * s + state.v1 * c,
        basis=state.basis,
    )


def mode_history(state: ModalState, times) -> np.ndarray:
    """v_n(t) for all modes, shape (len(times), N)."""
    omega = _omega(state)
    wt = np.outer(np.asarray(times, dtype=float), omega)
    return state.v0 * np.cos(wt) + (state.v1 / omega) * np.sin(wt)


def energy(state: ModalState) -> float:
    """E = 1/2 sum(lambda_n v0_n^2 + v1_n^2)."""
    lam = state.basis.eigenvalues[: state.size]
    return float(0.5 * np.sum(lam * state.v0**2 + state.v1**2))


def energy_trace(state: ModalState, times) -> EnergyTrace:
    times = np.asarray(times, dtype=float)
    values = np.array([energy(evolve(state, t)) for t in times])
    return EnergyTrace(times=times, energy=values)


def boundary_trace(state: ModalState, times) -> np.ndarray:
    """v_x(L, t) = sum_n Phi_n'(L) v_n(t)."""
    return mode_history(state, times) @ state.basis.boundary_flux[: state.size]


def synthesize_state(state: ModalState, x_grid) -> tuple[GridFunction, GridFunction]:
    return synthesize(state.v0, state.basis, x_grid), synthesize(state.v1, state.basis, x_grid)


# --- Exponential sums ---
def signed_exponents(basis: SpectralBasis, count: int | None = None) -> np.ndarray:
    """(+sqrt(lambda_1..N), -sqrt(lambda_1..N))."""
    omega = basis.frequencies[: count or basis.mode_count]
    return np.concatenate((omega, -omega))


def exponential_gram(exponents, horizon_t: float, harmonics: tuple[float, ...] = (1.0,)) -> np.ndarray:
    """G_jk = int_0^T w(t) e^{i (eta_j - eta_k) t} dt.

    The weight is w(t) = sum_{|p| <= P} c_|p| e^{i p 2 pi t / T} with harmonics = (c_0, ..., c_P).
    """
    if not horizon_t > 0.0:
        raise DomainError(f"horizon T must be > 0, got {horizon_t}")
    eta = np.asarray(exponents, dtype=float)
    diff = eta[:, None] - eta[None, :]
    gram = np.zeros(diff.shape, dtype=complex)
    base = 2.0 * np.pi / horizon_t
    for p, c in enumerate(harmonics):
        for shift in {p, -p}:
            d = diff + shift * base
            # int_0^T e^{i d t} dt = T e^{i d T/2} sinc(d T / 2 pi)
            gram += c * horizon_t * np.exp(0.5j * d * horizon_t) * np.sinc(d * horizon_t / (2.0 * np.pi))
    return gram


def trace_l2_norm_sq(state: ModalState, horizon_t: float) -> float:
    """int_0^T v_x(L, t)^2 dt in closed form."""
    amps = to_amplitudes(state)
    flux = state.basis.boundary_flux[: state.size]
    b = np.concatenate((flux * amps.c_plus, flux * amps.c_minus))
    gram = exponential_gram(signed_exponents(state.basis, state.size), horizon_t)
    # v_x(L,t) = sum_k b_k e^{i eta_k t}
    return float(np.real(np.conj(b) @ gram.T @ b))
