"""alpha >= 2: half-line reformulation and the translated-bump demonstration.

X = int_x^L y^{-alpha/2} dy, W = x^{alpha/4} w turns the degenerate equation into
psi_tt - psi_XX + M(X) psi = 0 on X > 0 with psi(0, t) = 0.
"""

import math

import numpy as np
from scipy.integrate import trapezoid

from degenwave.core.constants import DEFAULT_BUMP_RADIUS, DEFAULT_CELLS_PER_UNIT, HALFLINE_CFL
from degenwave.core.errors import DomainError, TruncationError
from degenwave.core.logging import logger
from degenwave.models.domain import BoundaryTrace, EnergyTrace, GridFunction, HalfLineProblem
from degenwave.models.schemas import QuotientRow
from degenwave.services.workers import run_parallel


def _check_alpha(alpha: float) -> None:
    if alpha < 2.0:
        raise DomainError(f"the half-line transform applies to alpha >= 2, got {alpha}")


def transform_coords(alpha: float, length_l: float, x):
    _check_alpha(alpha)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0.0) or np.any(xa > length_l):
        raise DomainError(f"x must lie in (0, {length_l}]")
    if alpha == 2.0:
        values = np.log(length_l / xa)
    else:
        e = 0.5 * (2.0 - alpha)
        values = 2.0 / (alpha - 2.0) * (xa**e - length_l**e)
    return float(values) if values.ndim == 0 else values


def inverse_transform_coords(alpha: float, length_l: float, big_x):
    _check_alpha(alpha)
    xa = np.asarray(big_x, dtype=float)
    if np.any(xa < 0.0):
        raise DomainError("X must be >= 0")
    if alpha == 2.0:
        values = length_l * np.exp(-xa)
    else:
        e = 0.5 * (2.0 - alpha)
        values = (0.5 * (alpha - 2.0) * xa + length_l**e) ** (1.0 / e)
    return float(values) if values.ndim == 0 else values


def gauge_factor(alpha: float, x):
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0.0):
        raise DomainError("gauge factor needs x > 0")
    values = xa ** (0.25 * alpha)
    return float(values) if values.ndim == 0 else values


def potential(alpha: float, length_l: float, big_x):
    """M(X); identically 1/4 for alpha = 2."""
    _check_alpha(alpha)
    xa = np.asarray(big_x, dtype=float)
    if alpha == 2.0:
        values = np.full_like(xa, 0.25)
    else:
        denom = 4.0 * length_l ** (0.5 * (2.0 - alpha)) - 2.0 * (2.0 - alpha) * xa
        values = alpha * (3.0 * alpha - 4.0) / denom**2
    return float(values) if values.ndim == 0 else values


def _zero_potential(big_x: np.ndarray) -> np.ndarray:
    return np.zeros_like(big_x)


class _Potential:
    """Picklable M(X) for a fixed (alpha, L)."""

    def __init__(self, alpha: float, length_l: float):
        self.alpha = alpha
        self.length_l = length_l

    def __call__(self, big_x: np.ndarray) -> np.ndarray:
        return np.asarray(potential(self.alpha, self.length_l, big_x))


def halfline_problem(alpha: float, length_l: float, x_max: float, free: bool = False) -> HalfLineProblem:
    _check_alpha(alpha)
    if not x_max > 0.0:
        raise DomainError(f"truncation Xmax must be > 0, got {x_max}")
    if free:
        return HalfLineProblem(alpha, length_l, _zero_potential, x_max, label="free")
    return HalfLineProblem(alpha, length_l, _Potential(alpha, length_l), x_max, label="liouville")


def polynomial_bump(r) -> np.ndarray:
    """(1 - r^2)^3 on |r| < 1, zero outside."""
    r = np.asarray(r, dtype=float)
    return np.where(np.abs(r) < 1.0, (1.0 - r * r) ** 3, 0.0)


def _support(values: np.ndarray, big_x: np.ndarray) -> tuple[float, float] | None:
    nz = np.flatnonzero(values)
    if nz.size == 0:
        return None
    return float(big_x[nz[0]]), float(big_x[nz[-1]])


def simulate_halfline(
    problem: HalfLineProblem,
    psi0: GridFunction,
    psi1: GridFunction,
    horizon_t: float,
    cells: int,
    cfl: float = HALFLINE_CFL,
) -> tuple[BoundaryTrace, EnergyTrace]:
    """Leapfrog for psi_tt - psi_XX + M psi = 0 on [0, Xmax], psi = 0 at both ends; returns psi_X(0, t)."""
    if not horizon_t > 0.0:
        raise DomainError(f"horizon T must be > 0, got {horizon_t}")
    big_x = np.linspace(0.0, problem.x_max, cells + 1)
    dx = problem.x_max / cells
    u0 = np.interp(big_x, psi0.x, psi0.values, left=0.0, right=0.0)
    u1 = np.interp(big_x, psi1.x, psi1.values, left=0.0, right=0.0)

    for support in (_support(u0, big_x), _support(u1, big_x)):
        if support is None:
            continue
        lo, hi = support
        if lo <= 0.0 or hi + horizon_t >= problem.x_max:
            raise TruncationError(
                f"data supported on [{lo:.4g}, {hi:.4g}] needs Xmax > {hi + horizon_t:.4g} "
                f"(got {problem.x_max}) and support away from X = 0"
            )

    m = problem.potential(big_x)
    steps = max(1, math.ceil(horizon_t / (cfl * dx)))
    dt = horizon_t / steps

    def accel(u: np.ndarray) -> np.ndarray:
        out = np.zeros_like(u)
        out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / dx**2 - m[1:-1] * u[1:-1]
        return out

    def energy(prev: np.ndarray, curr: np.ndarray) -> float:
        kinetic = np.sum(((curr - prev) / dt) ** 2) * dx
        strain = np.sum(np.diff(curr) * np.diff(prev)) / dx
        pot = np.sum(m * curr * prev) * dx
        return 0.5 * float(kinetic + strain + pot)

    def trace(u: np.ndarray) -> float:
        return float((4.0 * u[1] - u[2]) / (2.0 * dx))

    prev = u0.copy()
    prev[0] = prev[-1] = 0.0
    curr = prev + dt * u1 + 0.5 * dt**2 * accel(prev)
    curr[0] = curr[-1] = 0.0
    traces = [trace(prev), trace(curr)]
    energies = [energy(prev, curr)]
    for _ in range(1, steps):
        prev, curr = curr, 2.0 * curr - prev + dt**2 * accel(curr)
        traces.append(trace(curr))
        energies.append(energy(prev, curr))

    return (
        BoundaryTrace(times=dt * np.arange(steps + 1), values=np.asarray(traces)),
        EnergyTrace(times=dt * (np.arange(steps) + 0.5), energy=np.asarray(energies)),
    )


def _quotient_point(args: tuple[HalfLineProblem, int, float, int, float]) -> QuotientRow:
    problem, shift, radius, cells_per_unit, horizon_t = args
    cells = int(round(problem.x_max * cells_per_unit))
    dx = 1.0 / cells_per_unit
    half_width = int(math.ceil(radius * cells_per_unit))
    offsets = np.arange(-half_width, half_width + 1)
    profile = polynomial_bump(offsets * dx / radius)

    values = np.zeros(cells + 1)
    values[shift * cells_per_unit + offsets] = profile
    big_x = np.linspace(0.0, problem.x_max, cells + 1)
    psi0 = GridFunction(big_x, values)
    psi1 = GridFunction(big_x, np.zeros_like(values))

    numerator = float(np.sum(profile**2) * dx + np.sum(np.diff(profile) ** 2) / dx)
    trace, _ = simulate_halfline(problem, psi0, psi1, horizon_t, cells)
    denominator = float(trapezoid(trace.values**2, trace.times))
    quotient = numerator / denominator if denominator > 0.0 else math.inf
    return QuotientRow(shift=shift, numerator=numerator, denominator=denominator, quotient=quotient)


def translated_bump_quotient(
    alpha: float,
    length_l: float,
    horizon_t: float,
    shifts: list[int],
    bump_radius: float = DEFAULT_BUMP_RADIUS,
    cells_per_unit: int = DEFAULT_CELLS_PER_UNIT,
    free: bool = False,
    jobs: int | None = None,
) -> list[QuotientRow]:
    """Q_n = (||psi0(. - n)||_{H1}^2 + ||psi1||^2) / int_0^T psi_X(0, t)^2 dt for integer shifts n."""
    if not shifts or any(s2 <= s1 for s1, s2 in zip(shifts, shifts[1:])):
        raise DomainError("shifts must be a non-empty increasing list")
    if any(int(s) != s for s in shifts) or min(shifts) - bump_radius <= 0.0:
        raise DomainError(f"shifts must be integers with the bump (radius {bump_radius}) clear of X = 0")
    x_max = float(math.ceil(max(shifts) + bump_radius + horizon_t) + 1)
    problem = halfline_problem(alpha, length_l, x_max, free=free)
    points = [(problem, int(s), bump_radius, cells_per_unit, horizon_t) for s in shifts]
    rows = run_parallel(_quotient_point, points, jobs)
    logger.info(
        f"Translated-bump quotients ({problem.label}, alpha={alpha}, T={horizon_t}): "
        + ", ".join(f"{r.shift}:{r.quotient:.3g}" for r in rows)
    )
    return rows
