"""Controllability time, counting density, Gram spectra and observability ratios."""

import math

import numpy as np

from degenwave.core.constants import CRITICAL_RATIO, JACOBI_MAX_SWEEPS, JACOBI_TOL, MIN_DENSITY_ZEROS
from degenwave.core.errors import DegenerateInputError, DomainError, ResolutionError
from degenwave.core.logging import logger
from degenwave.models.domain import BasisParams, ModalState, SpectralBasis
from degenwave.models.schemas import GramSweepRow, InghamBounds, ObservabilityReport, RatioStats
from degenwave.services.modal_solver import energy, exponential_gram, signed_exponents, trace_l2_norm_sq
from degenwave.services.spectral_basis import build_basis, quadrature_rule
from degenwave.services.workers import run_parallel


def _check_alpha(alpha: float, length_l: float) -> None:
    if not 0.0 <= alpha < 2.0:
        raise DomainError(f"alpha must be in [0, 2) (T_alpha is infinite for alpha >= 2), got {alpha}")
    if not length_l > 0.0:
        raise DomainError(f"L must be > 0, got {length_l}")


def controllability_time(alpha: float, length_l: float) -> float:
    """T_alpha = 4/(2 - alpha) L^{(2 - alpha)/2}."""
    _check_alpha(alpha, length_l)
    return 4.0 / (2.0 - alpha) * length_l ** (0.5 * (2.0 - alpha))


def characteristic_travel_time(alpha: float, length_l: float) -> float:
    """int_0^L x^{-alpha/2} dx by graded Gauss-Legendre; inf for alpha >= 2."""
    if alpha >= 2.0:
        logger.warning(f"travel time diverges for alpha={alpha} >= 2")
        return math.inf
    _check_alpha(alpha, length_l)
    quad = quadrature_rule(BasisParams.for_alpha(alpha, length_l), 1)
    return float(quad.integrate(quad.nodes ** (-0.5 * alpha)))


def d_plus(alpha: float, length_l: float) -> float:
    """Closed-form counting density L^rho / (rho pi)."""
    _check_alpha(alpha, length_l)
    rho = 0.5 * (2.0 - alpha)
    return length_l**rho / (rho * math.pi)


def counting_density(zeros, rho: float, length_l: float) -> float:
    """Empirical frequencies per unit length of eta_n = rho j_n / L^rho."""
    zeros = np.asarray(zeros, dtype=float)
    if zeros.size < MIN_DENSITY_ZEROS:
        raise ResolutionError(
            f"counting density needs at least {MIN_DENSITY_ZEROS} zeros, got {zeros.size}",
            required=MIN_DENSITY_ZEROS,
        )
    eta = rho * zeros / length_l**rho
    return float((eta.size - 1) / (eta[-1] - eta[0]))


def frequency_gaps(basis: SpectralBasis) -> np.ndarray:
    return np.diff(basis.frequencies)


# --- Hermitian eigenvalues ---
def jacobi_eigenvalues(matrix, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.

    Each (p, q) pair is first made real by a diagonal phase, then annihilated by a
    real rotation. Off-diagonal entries are skipped once |a_pq| <= tol sqrt(|a_pp a_qq|).
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.conj().T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise DomainError("jacobi_eigenvalues needs a square Hermitian matrix")
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol * math.sqrt(abs(a[p, p].real * a[q, q].real)):
                    continue
                rotated = True
                phase = apq / abs(apq)
                a[:, q] *= np.conj(phase)
                a[q, :] *= phase
                off = abs(apq)
                diff = a[q, q].real - a[p, p].real
                phi = diff / (2.0 * off)
                t = 1.0 / (abs(phi) + math.sqrt(phi * phi + 1.0))
                if phi < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = col_p - s * (col_q + tau * col_p)
                a[:, q] = col_q + s * (col_p - tau * col_q)
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = row_p - s * (row_q + tau * row_p)
                a[q, :] = row_q + s * (row_p - tau * row_q)
                a[p, q] = a[q, p] = 0.0
        if not rotated:
            logger.debug(f"Jacobi converged after {sweep + 1} sweeps (n={n})")
            break
    else:
        logger.warning(f"Jacobi hit the sweep limit ({max_sweeps}) for n={n}")
    return np.sort(a.diagonal().real)


# --- Gram spectra ---
def _check_distinct(exponents: np.ndarray) -> None:
    ordered = np.sort(exponents)
    if np.any(np.diff(ordered) <= 0.0):
        raise DegenerateInputError("exponent family has duplicate entries")


def exponent_gram_spectrum(exponents, horizon_t: float) -> np.ndarray:
    exponents = np.asarray(exponents, dtype=float)
    _check_distinct(exponents)
    return jacobi_eigenvalues(exponential_gram(exponents, horizon_t))


def gram_min_eigenvalue(basis: SpectralBasis, horizon_t: float, count: int | None = None) -> float:
    """Smallest eigenvalue of the Gram matrix of {e^{+-i sqrt(lambda_n) t}, n <= N} on (0, T)."""
    return float(exponent_gram_spectrum(signed_exponents(basis, count), horizon_t)[0])


def _gram_point(args: tuple[float, float, np.ndarray]) -> float:
    horizon_t, _, exponents = args
    return float(exponent_gram_spectrum(exponents, horizon_t)[0])


def gram_sweep(
    alpha: float, length_l: float, horizons: list[float], counts: list[int], jobs: int | None = None
) -> list[GramSweepRow]:
    basis = build_basis(alpha, length_l, max(counts))
    points = [(t, n, signed_exponents(basis, n)) for t in horizons for n in counts]
    values = run_parallel(_gram_point, points, jobs)
    return [
        GramSweepRow(alpha=alpha, horizon_t=t, n=n, lambda_min=v) for (t, n, _), v in zip(points, values)
    ]


def bracket_critical_time(
    alpha: float,
    length_l: float,
    small_n: int,
    large_n: int,
    t_low: float,
    t_high: float,
    iterations: int = 10,
) -> tuple[float, float]:
    """Bisect for the T where lambda_min(large_n) / lambda_min(small_n) crosses CRITICAL_RATIO."""
    basis = build_basis(alpha, length_l, large_n)

    def ratio(t: float) -> float:
        return gram_min_eigenvalue(basis, t, large_n) / gram_min_eigenvalue(basis, t, small_n)

    if not (ratio(t_low) < CRITICAL_RATIO <= ratio(t_high)):
        raise DomainError(f"[{t_low}, {t_high}] does not bracket the Gram ratio crossing")
    for _ in range(iterations):
        mid = 0.5 * (t_low + t_high)
        if ratio(mid) < CRITICAL_RATIO:
            t_low = mid
        else:
            t_high = mid
    return t_low, t_high


# --- Observability experiments ---
def random_state(basis: SpectralBasis, rng: np.random.Generator, count: int | None = None) -> ModalState:
    """Random state with equal expected energy per mode."""
    n = count or basis.mode_count
    v0 = rng.standard_normal(n) / basis.frequencies[:n]
    v1 = rng.standard_normal(n)
    return ModalState(v0, v1, basis)


def observability_ratio(state: ModalState, horizon_t: float) -> float:
    """2 E(0) / int_0^T v_x(L, t)^2 dt."""
    lam = state.basis.eigenvalues[: state.size]
    numerator = float(np.sum(lam * state.v0**2) + np.sum(state.v1**2))
    if numerator == 0.0:
        raise DegenerateInputError("observability_ratio: zero state")
    return numerator / trace_l2_norm_sq(state, horizon_t)


def ingham_two_sided_check(
    basis: SpectralBasis, horizon_t: float, trials: int, seed: int = 0, count: int | None = None
) -> InghamBounds:
    """Empirical extremes of int|sum a_k e^{i eta_k t}|^2 / sum|a_k|^2 next to the exact Gram extremes."""
    if trials < 10:
        raise DomainError(f"ingham check needs at least 10 trials, got {trials}")
    exponents = signed_exponents(basis, count)
    _check_distinct(exponents)
    gram = exponential_gram(exponents, horizon_t)
    spectrum = jacobi_eigenvalues(gram)
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal((trials, exponents.size)) + 1j * rng.standard_normal((trials, exponents.size))
    draws /= np.linalg.norm(draws, axis=1, keepdims=True)
    quotients = np.einsum("ij,jk,ik->i", draws, gram, draws.conj()).real
    return InghamBounds(
        c_low=float(quotients.min()),
        c_high=float(quotients.max()),
        gram_min=float(spectrum[0]),
        gram_max=float(spectrum[-1]),
    )


def trace_energy_ratios(basis: SpectralBasis, horizon_t: float, trials: int, seed: int = 0) -> np.ndarray:
    """int_0^T v_x(L, t)^2 dt / E(0) over random states."""
    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(trials):
        state = random_state(basis, rng)
        ratios.append(trace_l2_norm_sq(state, horizon_t) / energy(state))
    return np.asarray(ratios)


def hidden_regularity_constant(basis: SpectralBasis, horizon_t: float, trials: int, seed: int = 0) -> float:
    """Empirical C in int_0^T v_x(L, t)^2 dt <= C E(0)."""
    return float(trace_energy_ratios(basis, horizon_t, trials, seed).max())


def observability_report(basis: SpectralBasis, horizon_t: float, trials: int, seed: int = 0) -> ObservabilityReport:
    p = basis.params
    t_alpha = controllability_time(p.alpha, p.length_l)
    if horizon_t <= t_alpha:
        logger.warning(f"T={horizon_t:.6g} <= T_alpha={t_alpha:.6g}: observability constant not uniform in N")
    rng = np.random.default_rng(seed)
    ratios = np.array([observability_ratio(random_state(basis, rng), horizon_t) for _ in range(trials)])
    report = ObservabilityReport(
        alpha=p.alpha,
        length_l=p.length_l,
        horizon_t=horizon_t,
        t_alpha=t_alpha,
        travel_time=characteristic_travel_time(p.alpha, p.length_l),
        d_plus=d_plus(p.alpha, p.length_l),
        mode_count=basis.mode_count,
        gram_min_eigenvalue=gram_min_eigenvalue(basis, horizon_t),
        ratio_stats=RatioStats(min=float(ratios.min()), max=float(ratios.max()), mean=float(ratios.mean())),
        ingham=ingham_two_sided_check(basis, horizon_t, max(trials, 10), seed),
        hidden_regularity_constant=hidden_regularity_constant(basis, horizon_t, trials, seed),
    )
    logger.info(f"Observability report: T_alpha={t_alpha:.6g}, lambda_min={report.gram_min_eigenvalue:.3e}")
    return report
