"""Gamma, Bessel J of real nonnegative order, its derivative and its positive zeros."""

import math
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from degenwave.core.constants import (
    BESSEL_ASYMPTOTIC_TOL,
    BESSEL_INTEGRAL_TAIL,
    BESSEL_SERIES_SWITCH,
    BESSEL_SERIES_TOL,
    LANCZOS_COEFFS,
    LANCZOS_G,
    NEWTON_MAX_ITER,
    NEWTON_STEP_TOL,
    SQRT_2PI,
    ZERO_SCAN_POINTS,
)
from degenwave.core.errors import DomainError
from degenwave.core.logging import logger

_SERIES_MAX_TERMS = 400
_HANKEL_MAX_TERMS = 120
_SCAN_STEP = 0.1


def _as_output(values: np.ndarray):
    return float(values) if values.ndim == 0 else values


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1] (read-only, cached)."""
    nodes, weights = leggauss(n)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


# --- Gamma ---
def gamma(x):
    """Gamma function for x > 0 (Lanczos, g = 7, with one recurrence step below 0.5)."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
        raise DomainError("gamma: argument must be finite and > 0")
    small = x < 0.5
    z = np.where(small, x + 1.0, x) - 1.0
    acc = np.full_like(z, LANCZOS_COEFFS[0])
    for k, c in enumerate(LANCZOS_COEFFS[1:], start=1):
        acc = acc + c / (z + k)
    t = z + LANCZOS_G + 0.5
    # t**(z+0.5) split in halves so that arguments up to ~171 do not overflow
    half = t ** (0.5 * (z + 0.5))
    result = SQRT_2PI * half * (half * np.exp(-t)) * acc
    result = np.where(small, result / x, result)
    return _as_output(result)


def _log_gamma_scalar(x: float) -> float:
    return math.log(gamma(x))


# --- Bessel J ---
def _series(mu: float, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0.0
    if not pos.any():
        return out
    xp = x[pos]
    term = np.exp(mu * np.log(0.5 * xp) - _log_gamma_scalar(mu + 1.0))
    total = term.copy()
    q = -0.25 * xp * xp
    for m in range(_SERIES_MAX_TERMS):
        term = term * q / ((m + 1.0) * (m + mu + 1.0))
        total += term
        if np.all(np.abs(term) <= BESSEL_SERIES_TOL * np.maximum(np.abs(total), 1e-300)) and m > 0.5 * xp.max():
            break
    out[pos] = total
    return out


def _hankel(mu: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Large-argument expansion, truncated before terms start to grow.

    Returns the values and the size of the smallest term used, which bounds the error.
    """
    four_mu2 = 4.0 * mu * mu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    smallest = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, _HANKEL_MAX_TERMS):
        new = term * (four_mu2 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        active &= np.abs(new) <= np.abs(term)
        if not active.any():
            break
        contrib = np.where(active, new, 0.0)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * contrib
        else:
            q += sign * contrib
        term = np.where(active, new, term)
        smallest = np.minimum(smallest, np.abs(term))
        active &= np.abs(new) > BESSEL_ASYMPTOTIC_TOL
    omega = x - 0.5 * mu * np.pi - 0.25 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(omega) - q * np.sin(omega)), smallest


def _integral(mu: float, x: np.ndarray) -> np.ndarray:
    """Schlaefli integral representation, valid for x > 0."""
    n = int(2.0 * (x.max() + mu)) + 40
    s, w = gauss_legendre(n)
    theta = 0.5 * np.pi * (s + 1.0)
    main = (0.5 * np.pi * w) @ np.cos(mu * theta[:, None] - np.sin(theta)[:, None] * x[None, :])
    result = main / np.pi
    sin_mu_pi = math.sin(mu * math.pi)
    if abs(sin_mu_pi) > 0.0:
        t_max = np.arcsinh(BESSEL_INTEGRAL_TAIL / x)
        t = 0.5 * t_max[None, :] * (s[:, None] + 1.0)
        tail = (0.5 * t_max) * (w @ np.exp(-x[None, :] * np.sinh(t) - mu * t))
        result = result - sin_mu_pi / np.pi * tail
    return result


def bessel_j(mu: float, x):
    """J_mu(x) for mu >= 0 and x >= 0."""
    if not math.isfinite(mu) or mu < 0.0:
        raise DomainError(f"bessel_j: order must be finite and >= 0, got {mu}")
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < 0.0):
        raise DomainError("bessel_j: argument must be finite and >= 0")
    flat = x.reshape(-1)
    out = np.empty_like(flat)

    near = flat <= BESSEL_SERIES_SWITCH
    if near.any():
        out[near] = _series(mu, flat[near])
        if mu == 0.0:
            out[near & (flat == 0.0)] = 1.0

    far = ~near
    if far.any():
        values, smallest = _hankel(mu, flat[far])
        ok = smallest <= BESSEL_ASYMPTOTIC_TOL
        if not ok.all():
            far_idx = np.flatnonzero(far)
            values[~ok] = _integral(mu, flat[far_idx[~ok]])
        out[far] = values
    return _as_output(out.reshape(x.shape))


def bessel_j_prime(mu: float, x):
    """J_mu'(x) for x > 0, via J_mu' = (mu/x) J_mu - J_{mu+1}."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("bessel_j_prime: argument must be > 0")
    values = (mu / x) * np.asarray(bessel_j(mu, x)) - np.asarray(bessel_j(mu + 1.0, x))
    return _as_output(np.asarray(values))


# --- Zeros ---
def mcmahon_guess(mu: float, n: np.ndarray) -> np.ndarray:
    beta = (n + 0.5 * mu - 0.25) * np.pi
    return beta - (4.0 * mu * mu - 1.0) / (8.0 * beta)


def _newton(mu: float, guess: np.ndarray) -> np.ndarray:
    roots = guess.copy()
    for _ in range(NEWTON_MAX_ITER):
        if not np.all(np.isfinite(roots)) or np.any(roots <= 0.0):
            break
        step = np.asarray(bessel_j(mu, roots)) / np.asarray(bessel_j_prime(mu, roots))
        roots = roots - step
        if np.all(np.abs(step) <= np.maximum(NEWTON_STEP_TOL, 4.0 * np.finfo(float).eps * roots)):
            break
    return roots


def _zeros_valid(mu: float, roots: np.ndarray) -> bool:
    if not np.all(np.isfinite(roots)) or roots[0] <= 0.0:
        return False
    if roots.size > 1 and np.any(np.diff(roots) <= 0.0):
        return False
    if np.any(np.abs(np.asarray(bessel_j(mu, roots))) > 1e-10):
        return False
    # no sign change may hide between consecutive roots (or before the first)
    edges = np.concatenate(([0.0], roots))
    frac = np.linspace(0.0, 1.0, ZERO_SCAN_POINTS + 2)[1:-1]
    probes = edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * frac[None, :]
    signs = np.sign(np.asarray(bessel_j(mu, probes)))
    return not np.any(signs[:, :-1] * signs[:, 1:] < 0.0)


def _zeros_by_scan(mu: float, count: int) -> np.ndarray:
    roots: list[float] = []
    lo = _SCAN_STEP
    while len(roots) < count:
        grid = lo + _SCAN_STEP * np.arange(4096)
        values = np.asarray(bessel_j(mu, grid))
        changes = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
        for i in changes:
            roots.append(brentq(lambda t: float(bessel_j(mu, t)), grid[i], grid[i + 1], xtol=1e-15, rtol=4e-16))
            if len(roots) == count:
                break
        lo = grid[-1]
    return np.asarray(roots)


def bessel_zeros(mu: float, count: int) -> np.ndarray:
    """First `count` positive zeros of J_mu, ascending."""
    if count < 1:
        raise DomainError(f"bessel_zeros: count must be >= 1, got {count}")
    if not math.isfinite(mu) or mu < 0.0:
        raise DomainError(f"bessel_zeros: order must be finite and >= 0, got {mu}")
    n = np.arange(1, count + 1, dtype=float)
    roots = _newton(mu, mcmahon_guess(mu, n))
    if _zeros_valid(mu, roots):
        return roots
    logger.debug(f"McMahon/Newton zeros rejected for mu={mu:.6g}, falling back to bracketing")
    roots = _zeros_by_scan(mu, count)
    return roots
