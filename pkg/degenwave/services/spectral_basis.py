"""Eigenpairs of -(x^alpha u')' on (0, L) and projection/synthesis in that basis.

Regimes:
  alpha in [0, 1): u(0) = u(L) = 0, Bessel order mu = (1 - alpha)/(2 - alpha)
  alpha in [1, 2): (x^alpha u')(0) = u(L) = 0, Bessel order mu = (alpha - 1)/(2 - alpha)

Phi_n(x) = C_n x^{(1-alpha)/2} J_mu(j_{mu,n} (x/L)^rho), rho = (2 - alpha)/2,
lambda_n = (rho j_{mu,n} / L^rho)^2.
"""

from collections.abc import Callable

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline

from degenwave.core.constants import (
    POINTS_PER_OSCILLATION,
    QUAD_GEOMETRIC_LEVELS,
    QUAD_GEOMETRIC_RATIO,
    QUAD_MIN_PANELS,
    QUAD_ORDER,
    QUAD_PANELS_PER_MODE,
)
from degenwave.core.errors import DegenerateInputError, DomainError, ResolutionError, UnsupportedRegimeError
from degenwave.core.logging import logger
from degenwave.models.domain import BasisParams, GridFunction, QuadratureRule, Regime, SpectralBasis
from degenwave.models.schemas import EigenRow
from degenwave.services.specfun import bessel_j, bessel_j_prime, bessel_zeros, gamma, gauss_legendre


def basis_params(alpha: float, length_l: float) -> BasisParams:
    if alpha >= 2.0:
        raise UnsupportedRegimeError(
            f"alpha={alpha} >= 2 has no discrete spectrum on (0, L); use the liouville module instead"
        )
    if not alpha >= 0.0:
        raise DomainError(f"alpha must be in [0, 2), got {alpha}")
    if not length_l > 0.0:
        raise DomainError(f"L must be > 0, got {length_l}")
    return BasisParams.for_alpha(alpha, length_l)


def quadrature_rule(params: BasisParams, mode_count: int) -> QuadratureRule:
    """Composite Gauss-Legendre in s = (x/L)^rho, with the first panel refined geometrically.

    In s the Bessel argument is linear and the weight x^{1-alpha} dx becomes s ds.
    """
    panels = max(QUAD_MIN_PANELS, QUAD_PANELS_PER_MODE * mode_count)
    breaks = np.linspace(0.0, 1.0, panels + 1)[1:]
    first = breaks[0] * QUAD_GEOMETRIC_RATIO ** np.arange(QUAD_GEOMETRIC_LEVELS + 1)
    edges = np.concatenate(([0.0], first[::-1], breaks[1:]))

    t, w = gauss_legendre(QUAD_ORDER)
    lo, hi = edges[:-1, None], edges[1:, None]
    s = (0.5 * (hi - lo) * (t[None, :] + 1.0) + lo).ravel()
    ws = (0.5 * (hi - lo) * w[None, :]).ravel()

    inv_rho = 1.0 / params.rho
    nodes = params.length_l * s**inv_rho
    weights = ws * (params.length_l * inv_rho) * s ** (inv_rho - 1.0)
    return QuadratureRule(nodes=nodes, weights=weights)


def _mode_values(params: BasisParams, zeros: np.ndarray, norms: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Phi_n(x) for all given modes, shape (len(zeros), len(x)); x > 0 only."""
    s = (x / params.length_l) ** params.rho
    envelope = x ** (0.5 * (1.0 - params.alpha))
    return norms[:, None] * envelope[None, :] * np.asarray(bessel_j(params.mu, zeros[:, None] * s[None, :]))


def build_basis(alpha: float, length_l: float, mode_count: int) -> SpectralBasis:
    if mode_count < 1:
        raise DomainError(f"mode count must be >= 1, got {mode_count}")
    params = basis_params(alpha, length_l)
    zeros = bessel_zeros(params.mu, mode_count)
    jp = np.asarray(bessel_j_prime(params.mu, zeros))
    rho, lr = params.rho, length_l**params.rho

    eigenvalues = (rho * zeros / lr) ** 2
    norms = np.sqrt(2.0 * rho) / (lr * np.abs(jp))
    flux = length_l**-1.5 * rho * np.sqrt(2.0 * rho) * zeros * np.sign(jp)
    quad = quadrature_rule(params, mode_count)
    nodal = _mode_values(params, zeros, norms, quad.nodes)

    logger.info(
        f"Built basis alpha={alpha} L={length_l} N={mode_count} "
        f"({params.regime.value}, mu={params.mu:.6g}, {quad.nodes.size} quadrature nodes)"
    )
    return SpectralBasis(
        params=params,
        zeros=zeros,
        eigenvalues=eigenvalues,
        boundary_flux=flux,
        norm_consts=norms,
        quadrature=quad,
        modes_at_nodes=nodal,
    )


def _check_mode(basis: SpectralBasis, n: int) -> None:
    if not 1 <= n <= basis.mode_count:
        raise DomainError(f"mode index {n} outside 1..{basis.mode_count}")


def _origin_values(basis: SpectralBasis) -> np.ndarray:
    p = basis.params
    if p.regime is Regime.DIRICHLET_AT_ZERO:
        return np.zeros(basis.mode_count)
    lead = (basis.zeros / (2.0 * p.length_l**p.rho)) ** p.mu / gamma(p.mu + 1.0)
    return basis.norm_consts * lead


def eigenfunction_matrix(basis: SpectralBasis, x, allow_origin: bool = False) -> np.ndarray:
    """Phi_n(x_i) for n = 1..N, shape (N, len(x))."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lower_ok = x >= 0.0 if allow_origin else x > 0.0
    if not (np.all(lower_ok) and np.all(x <= basis.params.length_l * (1.0 + 1e-14))):
        raise DomainError(f"eigenfunctions are defined on (0, {basis.params.length_l}]")
    x = np.minimum(x, basis.params.length_l)
    out = np.empty((basis.mode_count, x.size))
    origin = x == 0.0
    if origin.any():
        out[:, origin] = _origin_values(basis)[:, None]
    inner = ~origin
    out[:, inner] = _mode_values(basis.params, basis.zeros, basis.norm_consts, x[inner])
    return out


def eval_eigenfunction(basis: SpectralBasis, n: int, x, allow_origin: bool = False):
    _check_mode(basis, n)
    values = eigenfunction_matrix(basis, x, allow_origin)[n - 1]
    return float(values[0]) if np.ndim(x) == 0 else values


def eval_eigenfunction_derivative(basis: SpectralBasis, n: int, x):
    """Phi_n'(x) in closed form, x in (0, L]."""
    _check_mode(basis, n)
    p = basis.params
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if not (np.all(xa > 0.0) and np.all(xa <= p.length_l * (1.0 + 1e-14))):
        raise DomainError(f"eigenfunction derivative is defined on (0, {p.length_l}]")
    j = basis.zeros[n - 1]
    z = j * (xa / p.length_l) ** p.rho
    a = 0.5 * (1.0 - p.alpha)
    values = basis.norm_consts[n - 1] * (
        a * xa ** (a - 1.0) * np.asarray(bessel_j(p.mu, z))
        + xa ** (0.5 - p.alpha) * np.asarray(bessel_j_prime(p.mu, z)) * j * p.rho / p.length_l**p.rho
    )
    return float(values[0]) if np.ndim(x) == 0 else values


def eigen_boundary_flux(basis: SpectralBasis, n: int) -> float:
    _check_mode(basis, n)
    return float(basis.boundary_flux[n - 1])


def check_resolution(grid: GridFunction, basis: SpectralBasis) -> None:
    """Require POINTS_PER_OSCILLATION samples on every full oscillation of Phi_N."""
    p = basis.params
    x = grid.x
    phase = basis.zeros[-1] * (np.clip(x, 0.0, p.length_l) / p.length_l) ** p.rho
    full = int(basis.zeros[-1] // (2.0 * np.pi))
    if full == 0:
        widths = np.array([1.0])
        counts = np.array([x.size])
    else:
        bins = np.floor(phase / (2.0 * np.pi)).astype(int)
        counts = np.bincount(bins[bins < full], minlength=full)
        marks = p.length_l * (2.0 * np.pi * np.arange(full + 1) / basis.zeros[-1]) ** (1.0 / p.rho)
        widths = np.diff(marks) / p.length_l
    if counts.min() < POINTS_PER_OSCILLATION:
        required = int(np.ceil(POINTS_PER_OSCILLATION / widths.min())) + 1
        raise ResolutionError(
            f"grid of {x.size} samples under-resolves mode {basis.mode_count}; "
            f"a uniform grid needs at least {required} samples",
            required=required,
        )


def project(f: Callable[[np.ndarray], np.ndarray] | GridFunction, basis: SpectralBasis) -> np.ndarray:
    """Coefficients f_n = int_0^L f Phi_n dx, n = 1..N."""
    nodes = basis.quadrature.nodes
    if isinstance(f, GridFunction):
        check_resolution(f, basis)
        values = CubicSpline(f.x, f.values)(nodes)
    else:
        values = np.asarray(f(nodes), dtype=float)
    return basis.modes_at_nodes @ (values * basis.quadrature.weights)


def synthesize(coeffs, basis: SpectralBasis, x_grid) -> GridFunction:
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size > basis.mode_count:
        raise DomainError(f"{coeffs.size} coefficients for a basis of {basis.mode_count} modes")
    x = np.asarray(x_grid, dtype=float)
    matrix = eigenfunction_matrix(basis, x, allow_origin=True)[: coeffs.size]
    return GridFunction(x=x, values=coeffs @ matrix)


# --- Norms ---
def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha < 2.0:
        raise DomainError(f"alpha must be in [0, 2), got {alpha}")


def _modal_norms_sq(u: GridFunction, alpha: float, basis: SpectralBasis) -> tuple[float, float]:
    """(||u||^2, ||x^{alpha/2} u'||^2) of the expansion of u in `basis`."""
    if basis.params.alpha != alpha:
        raise DomainError(f"basis is built for alpha={basis.params.alpha}, not {alpha}")
    coeffs = project(u, basis)
    return float(coeffs @ coeffs), float(basis.eigenvalues @ coeffs**2)


def weighted_seminorm(u: GridFunction, alpha: float, basis: SpectralBasis | None = None) -> float:
    """||x^{alpha/2} u'||_{L2}.

    Finite differences on the sample grid, which converge slowly where u behaves like
    x^(1-alpha). With a basis the norm is sum lambda_n u_n^2, exact for band-limited u.
    """
    _check_alpha(alpha)
    if basis is not None:
        return float(np.sqrt(_modal_norms_sq(u, alpha, basis)[1]))
    du = np.gradient(u.values, u.x, edge_order=2)
    return float(np.sqrt(trapezoid(u.x**alpha * du**2, u.x)))


def h1_alpha_norm(u: GridFunction, alpha: float, basis: SpectralBasis | None = None) -> float:
    """Full H^1_alpha norm, including the L2 part."""
    _check_alpha(alpha)
    if basis is not None:
        return float(np.sqrt(sum(_modal_norms_sq(u, alpha, basis))))
    return float(np.sqrt(trapezoid(u.values**2, u.x) + weighted_seminorm(u, alpha) ** 2))


def hardy_poincare_ratio(u: GridFunction, alpha: float, basis: SpectralBasis | None = None) -> float:
    """||u||_{L2} / ||x^{alpha/2} u'||_{L2}, alpha in (0, 2)."""
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"hardy_poincare_ratio needs alpha in (0, 2), got {alpha}")
    if basis is not None:
        l2_sq, semi_sq = _modal_norms_sq(u, alpha, basis)
    else:
        l2_sq, semi_sq = trapezoid(u.values**2, u.x), weighted_seminorm(u, alpha) ** 2
    if semi_sq == 0.0:
        raise DegenerateInputError("hardy_poincare_ratio: zero derivative energy")
    return float(np.sqrt(l2_sq / semi_sq))


def basis_table(basis: SpectralBasis) -> list[EigenRow]:
    return [
        EigenRow(n=n, j_mu_n=float(j), lambda_n=float(lam), flux_l=float(flux))
        for n, (j, lam, flux) in enumerate(zip(basis.zeros, basis.eigenvalues, basis.boundary_flux), start=1)
    ]
