"""Boundary null controls from the finite moment problem, and their FD verification.

Moment convention (duality against v = Phi_n e^{i eta t}, eta = +-sqrt(lambda_n)):

    int_0^T theta(t) e^{i eta_k t} dt = (w1_n - i eta_k w0_n) / (L^alpha Phi_n'(L)) = m_k

with theta(t) = w(t) sum_k a_k e^{-i eta_k t}, so that G a = m for the w-weighted Gram matrix.
"""

import math

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import cho_factor, cho_solve, eigh
from scipy.sparse.linalg import LinearOperator, cg

from degenwave.core.constants import (
    CG_TOL,
    CHOLESKY_MAX_SIZE,
    GRAM_PD_FLOOR,
    IMAG_RESIDUE_TOL,
    SAMPLES_PER_MODE,
    TIKHONOV_SCALE,
)
from degenwave.core.errors import DomainError, ResolutionError
from degenwave.core.logging import logger
from degenwave.models.domain import ControlSignal, GridFunction, MomentSystem, SpectralBasis
from degenwave.models.schemas import DecayReport, FDConfig, NormSweepRow
from degenwave.services.fd_solver import grid_nodes, simulate_controlled, state_norm_sq, time_step
from degenwave.services.modal_solver import exponential_gram, signed_exponents
from degenwave.services.observability import controllability_time
from degenwave.services.spectral_basis import build_basis, synthesize

WEIGHTS: dict[str, tuple[float, ...]] = {
    "uniform": (1.0,),
    "smooth": (0.5, -0.25),  # sin^2(pi t / T)
}


def square_harmonics(harmonics: tuple[float, ...]) -> tuple[float, ...]:
    """Harmonics of w(t)^2 from those of w(t)."""
    full = np.concatenate((harmonics[:0:-1], harmonics))
    squared = np.convolve(full, full)
    return tuple(float(c) for c in squared[squared.size // 2 :])


def weight_values(harmonics: tuple[float, ...], times, horizon_t: float) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    values = np.full_like(times, harmonics[0])
    for p, c in enumerate(harmonics[1:], start=1):
        values += 2.0 * c * np.cos(2.0 * np.pi * p * times / horizon_t)
    return values


def build_moment_system(
    w0n,
    w1n,
    basis: SpectralBasis,
    horizon_t: float,
    control_modes: int | None = None,
    weight: str = "uniform",
) -> MomentSystem:
    """Moment system for steering modal data (w0n, w1n) to rest at T through w(L, t) = theta(t)."""
    if not horizon_t > 0.0:
        raise DomainError(f"control horizon T must be > 0, got {horizon_t}")
    if weight not in WEIGHTS:
        raise DomainError(f"unknown control weight {weight!r}")
    w0n = np.asarray(w0n, dtype=float)
    w1n = np.asarray(w1n, dtype=float)
    if w0n.shape != w1n.shape:
        raise DomainError("w0 and w1 coefficient lists must have equal lengths")
    modes = control_modes or w0n.size
    if modes < w0n.size:
        raise DomainError(f"{w0n.size} data modes exceed the {modes} control modes")
    if modes > basis.mode_count:
        raise DomainError(f"{modes} control modes exceed the basis size {basis.mode_count}")

    p = basis.params
    t_alpha = controllability_time(p.alpha, p.length_l)
    if horizon_t <= t_alpha:
        logger.warning(f"T={horizon_t:.6g} <= T_alpha={t_alpha:.6g}: moment problem is not uniformly solvable in N")

    pad = modes - w0n.size
    v0 = np.pad(w0n, (0, pad))
    v1 = np.pad(w1n, (0, pad))
    eta = signed_exponents(basis, modes)
    flux = p.length_l**p.alpha * basis.boundary_flux[:modes]
    flux_weights = np.concatenate((flux, flux))
    rhs = (np.concatenate((v1, v1)) - 1j * eta * np.concatenate((v0, v0))) / flux_weights
    harmonics = WEIGHTS[weight]
    return MomentSystem(
        basis=basis,
        exponents=eta,
        gram=exponential_gram(eta, horizon_t, harmonics),
        rhs=rhs,
        flux_weights=flux_weights,
        horizon_t=horizon_t,
        harmonics=harmonics,
        data_modes=w0n.size,
    )


def _tikhonov(system: MomentSystem) -> np.ndarray:
    reg = TIKHONOV_SCALE * system.horizon_t
    logger.warning(f"Gram matrix not safely positive definite; Tikhonov solve with mu={reg:.3e}")
    factor = cho_factor(system.gram + reg * np.eye(system.size))
    return cho_solve(factor, system.rhs)


def solve_min_norm(system: MomentSystem) -> np.ndarray:
    """Coefficients a with G a = m (theta then lies in the span of the weighted exponentials)."""
    if not np.any(system.rhs):
        return np.zeros(system.size, dtype=complex)
    lam_min = eigh(system.gram, eigvals_only=True, subset_by_index=[0, 0])[0]
    if lam_min <= GRAM_PD_FLOOR * system.horizon_t:
        return _tikhonov(system)
    if system.size <= CHOLESKY_MAX_SIZE:
        return cho_solve(cho_factor(system.gram), system.rhs)

    inv_diag = 1.0 / system.gram.diagonal().real
    precond = LinearOperator(system.gram.shape, matvec=lambda v: inv_diag * v, dtype=complex)
    coeffs, info = cg(system.gram, system.rhs, rtol=CG_TOL, atol=0.0, M=precond, maxiter=20 * system.size)
    if info != 0:
        logger.warning(f"CG did not converge (info={info}); falling back to a regularized direct solve")
        return _tikhonov(system)
    return coeffs


def moment_residual(system: MomentSystem, coeffs: np.ndarray) -> float:
    """||G a - m|| / ||m|| (0 for zero moments)."""
    norm = np.linalg.norm(system.rhs)
    if norm == 0.0:
        return float(np.linalg.norm(coeffs))
    return float(np.linalg.norm(system.gram @ coeffs - system.rhs) / norm)


def control_norm(coeffs: np.ndarray, system: MomentSystem) -> float:
    """||theta||_{L2(0,T)} = sqrt(a^H G_{w^2} a)."""
    gram_sq = exponential_gram(system.exponents, system.horizon_t, square_harmonics(system.harmonics))
    return float(math.sqrt(max(np.real(np.conj(coeffs) @ gram_sq @ coeffs), 0.0)))


def synthesize_control(coeffs: np.ndarray, system: MomentSystem, sample_count: int) -> ControlSignal:
    modes = system.size // 2
    required = SAMPLES_PER_MODE * modes
    if sample_count < required:
        raise ResolutionError(
            f"{sample_count} control samples under-resolve {modes} modes; need at least {required}",
            required=required,
        )
    times = np.linspace(0.0, system.horizon_t, sample_count)
    values = weight_values(system.harmonics, times, system.horizon_t) * (
        np.exp(-1j * np.outer(times, system.exponents)) @ coeffs
    )
    scale = max(1.0, float(np.abs(values).max()))
    residue = float(np.abs(values.imag).max())
    if residue > IMAG_RESIDUE_TOL * scale:
        raise DomainError(f"control has imaginary residue {residue:.3e}; moments are not conjugate-symmetric")
    return ControlSignal(times=times, theta=values.real.copy())


def control_norm_quadrature(signal: ControlSignal) -> float:
    return float(math.sqrt(trapezoid(signal.theta**2, signal.times)))


def verify_control(w0: GridFunction, w1: GridFunction, theta: ControlSignal, cfg: FDConfig) -> DecayReport:
    """Run the controlled FD problem and compare (L2, H*) state norms at 0 and T."""
    run = simulate_controlled(w0, w1, theta, cfg)
    x = grid_nodes(cfg)
    initial = state_norm_sq(cfg, np.interp(x, w0.x, w0.values), np.interp(x, w1.x, w1.values))
    final = state_norm_sq(cfg, run.w_final.values, run.wt_final.values)
    ratio = 0.0 if initial == 0.0 else final / initial
    logger.info(f"Control verification: final/initial = {ratio:.3e} (M={cfg.cells_m})")
    return DecayReport(initial_energy=initial, final_energy=final, ratio=ratio, horizon_t=cfg.horizon_t)


def synthesize_and_verify(
    w0n,
    w1n,
    basis: SpectralBasis,
    cfg: FDConfig,
    control_modes: int | None = None,
    weight: str = "uniform",
    samples_per_mode: int = SAMPLES_PER_MODE,
) -> tuple[ControlSignal, DecayReport]:
    """Whole pipeline: moments, min-norm solve, sampling, FD verification."""
    system = build_moment_system(w0n, w1n, basis, cfg.horizon_t, control_modes, weight)
    coeffs = solve_min_norm(system)
    # one sample per FD step, so linear interpolation of theta is exact at the time levels
    _, steps = time_step(cfg)
    signal = synthesize_control(coeffs, system, max(samples_per_mode * (system.size // 2) + 1, steps + 1))
    x = grid_nodes(cfg)
    w0 = synthesize(np.asarray(w0n, dtype=float), basis, x)
    w1 = synthesize(np.asarray(w1n, dtype=float), basis, x)
    report = verify_control(w0, w1, signal, cfg)
    p = basis.params
    t_alpha = controllability_time(p.alpha, p.length_l)
    report = report.model_copy(
        update={
            "control_norm": control_norm(coeffs, system),
            "control_norm_quadrature": control_norm_quadrature(signal),
            "moment_residual": moment_residual(system, coeffs),
            "t_alpha": t_alpha,
            "below_threshold": cfg.horizon_t <= t_alpha,
            "control_modes": system.size // 2,
            "weight": weight,
        }
    )
    return signal, report


def control_norm_sweep(
    w0n, w1n, alpha: float, length_l: float, horizon_t: float, counts: list[int], weight: str = "uniform"
) -> list[NormSweepRow]:
    """Min-norm ||theta|| as the number of controlled modes grows (data truncated to each count)."""
    basis = build_basis(alpha, length_l, max(counts))
    w0n = np.asarray(w0n, dtype=float)
    w1n = np.asarray(w1n, dtype=float)
    rows = []
    for n in counts:
        k = min(n, w0n.size)
        system = build_moment_system(w0n[:k], w1n[:k], basis, horizon_t, n, weight)
        rows.append(NormSweepRow(control_modes=n, control_norm=control_norm(solve_min_norm(system), system)))
    return rows
