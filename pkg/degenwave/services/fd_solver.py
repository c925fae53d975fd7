"""Leapfrog finite differences for w_tt - ((x^alpha + eps) w_x)_x = h on (0, L).

Left end: w = 0 for alpha < 1, zero flux (half cell at node 0) for alpha >= 1.
Right end: w(L, t) = theta(t), zero for free runs.
"""

import math
from collections.abc import Callable

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from degenwave.core.constants import MIN_CELLS
from degenwave.core.errors import ConfigError, InstabilityError
from degenwave.core.logging import logger
from degenwave.models.domain import (
    BoundaryTrace,
    ControlledRun,
    ControlSignal,
    EnergyTrace,
    FDRun,
    FDState,
    GridFunction,
    ModalState,
    Trajectory,
)
from degenwave.models.schemas import ConvergenceRow, FDConfig
from degenwave.services.modal_solver import evolve
from degenwave.services.spectral_basis import synthesize

Forcing = Callable[[np.ndarray, float], np.ndarray]


def validate_config(cfg: FDConfig) -> None:
    if cfg.cells_m < MIN_CELLS:
        raise ConfigError(f"fd: cells_m must be >= {MIN_CELLS}, got {cfg.cells_m}")
    if not 0.0 < cfg.cfl < 1.0:
        raise ConfigError(f"fd: cfl must be in (0, 1), got {cfg.cfl}")
    if cfg.epsilon is not None and cfg.epsilon < 0.0:
        raise ConfigError(f"fd: epsilon must be >= 0, got {cfg.epsilon}")
    if not 0.0 <= cfg.alpha < 2.0:
        raise ConfigError(f"fd: alpha must be in [0, 2), got {cfg.alpha}")
    if not cfg.length_l > 0.0:
        raise ConfigError(f"fd: L must be > 0, got {cfg.length_l}")
    if not cfg.horizon_t > 0.0:
        raise ConfigError(f"fd: horizon T must be > 0, got {cfg.horizon_t}")
    if cfg.snapshot_stride < 0:
        raise ConfigError(f"fd: snapshot_stride must be >= 0, got {cfg.snapshot_stride}")


def grid_nodes(cfg: FDConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.length_l, cfg.cells_m + 1)


def half_coefficients(cfg: FDConfig) -> np.ndarray:
    """Face coefficients a_{j+1/2} + eps, j = 0..M-1.

    Each face carries the cell average of x^alpha that makes the two-point flux
    exact for the leading behaviour at x = 0: x^(1-alpha) (harmonic mean) for
    alpha < 1, x^(2-alpha) for alpha >= 1. Both reduce to x_{j+1/2}^alpha up to
    O(dx^2) away from the degenerate end.
    """
    m, dx, alpha = cfg.cells_m, cfg.dx, cfg.alpha
    left = np.arange(m) * dx
    right = left + dx
    if alpha == 0.0:
        base = np.ones(m)
    elif _flux_regime(cfg):
        p = 2.0 - alpha
        base = p * (left + 0.5 * dx) * dx / (right**p - left**p)
    else:
        p = 1.0 - alpha
        base = p * dx / (right**p - left**p)
    return base + cfg.regularization


def time_step(cfg: FDConfig) -> tuple[float, int]:
    """dt <= cfl dx / sqrt(max a), shrunk so that an integer number of steps lands on T."""
    validate_config(cfg)
    dt = cfg.cfl * cfg.dx / math.sqrt(half_coefficients(cfg).max())
    steps = max(1, math.ceil(cfg.horizon_t / dt))
    return cfg.horizon_t / steps, steps


def _flux_regime(cfg: FDConfig) -> bool:
    return cfg.alpha >= 1.0


def _masses(cfg: FDConfig) -> np.ndarray:
    """Nodal masses of the dynamic unknowns (zero on Dirichlet nodes)."""
    m = np.ones(cfg.cells_m + 1)
    m[0] = 0.5 if _flux_regime(cfg) else 0.0
    m[-1] = 0.0
    return m


def _on_grid(g: GridFunction, x: np.ndarray) -> np.ndarray:
    if g.x.shape == x.shape and np.allclose(g.x, x, rtol=0.0, atol=1e-12):
        return g.values.astype(float, copy=True)
    return CubicSpline(g.x, g.values)(x)


def fd_energy(cfg: FDConfig, w_prev: np.ndarray, w_curr: np.ndarray, dt: float) -> float:
    """Staggered discrete energy at t_{n+1/2}; exactly conserved by the free scheme."""
    a = half_coefficients(cfg)
    kinetic = np.sum(_masses(cfg) * ((w_curr - w_prev) / dt) ** 2) * cfg.dx
    potential = np.sum(a * np.diff(w_curr) * np.diff(w_prev)) / cfg.dx
    return float(0.5 * (kinetic + potential))


def boundary_flux(w: np.ndarray, dx: float) -> float:
    return float((3.0 * w[-1] - 4.0 * w[-2] + w[-3]) / (2.0 * dx))


def l2_norm_sq(cfg: FDConfig, g: np.ndarray) -> float:
    return float(trapezoid(g**2, dx=cfg.dx))


def hstar_norm_sq(cfg: FDConfig, g: np.ndarray) -> float:
    """<g, u> with -(a u')' = g under the regime boundary conditions (discrete H* proxy)."""
    a = half_coefficients(cfg)
    inv_dx2 = 1.0 / cfg.dx**2
    m = _masses(cfg)
    first = 0 if _flux_regime(cfg) else 1
    idx = np.arange(first, cfg.cells_m)
    diag = (a[idx] + np.where(idx > 0, a[idx - 1], 0.0)) * inv_dx2
    upper = -a[idx[:-1]] * inv_dx2
    ab = np.zeros((3, idx.size))
    ab[0, 1:] = upper
    ab[1] = diag
    ab[2, :-1] = upper
    rhs = m[idx] * g[idx]
    u = solve_banded((1, 1), ab, rhs)
    return float(np.dot(rhs, u) * cfg.dx)


def state_norm_sq(cfg: FDConfig, w: np.ndarray, wt: np.ndarray) -> float:
    """||w||_{L2}^2 + ||w_t||_{H*}^2."""
    return l2_norm_sq(cfg, w) + hstar_norm_sq(cfg, wt)


def _run(
    w0: GridFunction,
    w1: GridFunction,
    cfg: FDConfig,
    forcing: Forcing | None = None,
    theta: Callable[[float], float] | None = None,
) -> tuple[FDRun, np.ndarray]:
    dt, steps = time_step(cfg)
    x = grid_nodes(cfg)
    a = half_coefficients(cfg)
    inv_dx2 = 1.0 / cfg.dx**2
    flux_left = _flux_regime(cfg)
    stride = cfg.snapshot_stride

    def accel(w: np.ndarray, t: float) -> np.ndarray:
        out = np.zeros_like(w)
        face = a * np.diff(w)
        out[1:-1] = (face[1:] - face[:-1]) * inv_dx2
        if flux_left:
            out[0] = 2.0 * face[0] * inv_dx2
        if forcing is not None:
            out += forcing(x, t)
        return out

    def apply_bc(w: np.ndarray, t: float) -> None:
        if not flux_left:
            w[0] = 0.0
        w[-1] = float(theta(t)) if theta is not None else 0.0

    w_prev = _on_grid(w0, x)
    w_curr = w_prev + dt * _on_grid(w1, x) + 0.5 * dt**2 * accel(w_prev, 0.0)
    apply_bc(w_curr, dt)
    w_older = w_prev

    energies = [fd_energy(cfg, w_prev, w_curr, dt)]
    fluxes = [boundary_flux(w_prev, cfg.dx), boundary_flux(w_curr, cfg.dx)]
    snap_times, snaps = [0.0], [w_prev.copy()]
    if stride and stride == 1:
        snap_times.append(dt)
        snaps.append(w_curr.copy())
    forcing_norms = []
    if forcing is not None:
        forcing_norms = [math.sqrt(l2_norm_sq(cfg, forcing(x, 0.0))), math.sqrt(l2_norm_sq(cfg, forcing(x, dt)))]

    for n in range(1, steps):
        t = n * dt
        w_next = 2.0 * w_curr - w_prev + dt**2 * accel(w_curr, t)
        apply_bc(w_next, t + dt)
        if not np.all(np.isfinite(w_next)):
            raise InstabilityError(f"non-finite values at step {n + 1} (t={t + dt:.6g})", step=n + 1)
        w_older, w_prev, w_curr = w_prev, w_curr, w_next
        energies.append(fd_energy(cfg, w_prev, w_curr, dt))
        fluxes.append(boundary_flux(w_curr, cfg.dx))
        if forcing is not None:
            forcing_norms.append(math.sqrt(l2_norm_sq(cfg, forcing(x, t + dt))))
        if stride and (n + 1) % stride == 0 and n + 1 < steps:
            snap_times.append(t + dt)
            snaps.append(w_curr.copy())
    if snap_times[-1] != steps * dt:
        snap_times.append(steps * dt)
        snaps.append(w_curr.copy())

    if steps >= 2:
        wt_final = (3.0 * w_curr - 4.0 * w_prev + w_older) / (2.0 * dt)
    else:
        wt_final = (w_curr - w_prev) / dt

    times = dt * np.arange(steps + 1)
    run = FDRun(
        x=x,
        dt=dt,
        state=FDState(w_prev=w_prev, w_curr=w_curr, time_index=steps),
        trajectory=Trajectory(x=x, times=np.asarray(snap_times), snapshots=np.vstack(snaps)),
        energy=EnergyTrace(times=dt * (np.arange(steps) + 0.5), energy=np.asarray(energies)),
        flux=BoundaryTrace(times=times, values=np.asarray(fluxes)),
        forcing_norm_integral=float(trapezoid(forcing_norms, times)) if forcing is not None else 0.0,
    )
    logger.debug(f"FD run: M={cfg.cells_m} steps={steps} dt={dt:.3e} eps={cfg.regularization:.3e}")
    return run, wt_final


def simulate_free(w0: GridFunction, w1: GridFunction, cfg: FDConfig, forcing: Forcing | None = None) -> FDRun:
    run, _ = _run(w0, w1, cfg, forcing=forcing)
    return run


def simulate_controlled(w0: GridFunction, w1: GridFunction, theta: ControlSignal, cfg: FDConfig) -> ControlledRun:
    run, wt_final = _run(w0, w1, cfg, theta=theta)
    return ControlledRun(
        w_final=run.final,
        wt_final=GridFunction(run.x, wt_final),
        energy=run.energy,
        flux=run.flux,
    )


def energy_drift(trace: EnergyTrace) -> float:
    e0 = trace.energy[0]
    if e0 == 0.0:
        return 0.0
    return float(np.max(np.abs(trace.energy - e0)) / e0)


def trace_l2_norm_sq(run: FDRun) -> float:
    return float(trapezoid(run.flux.values**2, run.flux.times))


def hidden_regularity_ratio(run: FDRun) -> float:
    """int_0^T w_x(L,t)^2 dt / (E(0) + (int_0^T ||h|| dt)^2)."""
    return trace_l2_norm_sq(run) / (run.energy.energy[0] + run.forcing_norm_integral**2)


def compare_with_modal(state: ModalState, cfg: FDConfig) -> tuple[float, FDRun]:
    """L2 distance at T between the FD run and exact modal evolution of the same data."""
    x = grid_nodes(cfg)
    w0 = synthesize(state.v0, state.basis, x)
    w1 = synthesize(state.v1, state.basis, x)
    run = simulate_free(w0, w1, cfg)
    exact = synthesize(evolve(state, cfg.horizon_t).v0, state.basis, x)
    diff = run.state.w_curr - exact.values
    return math.sqrt(l2_norm_sq(cfg, diff)), run


def convergence_study(
    state: ModalState,
    horizon_t: float,
    epsilons: list[float | None],
    cells: list[int],
    cfl: float = 0.5,
) -> list[ConvergenceRow]:
    """Error against the modal oracle for every (epsilon, M); orders are taken along M."""
    p = state.basis.params
    rows: list[ConvergenceRow] = []
    for eps in epsilons:
        previous: tuple[int, float] | None = None
        for m in cells:
            cfg = FDConfig(alpha=p.alpha, length_l=p.length_l, horizon_t=horizon_t, cells_m=m, epsilon=eps, cfl=cfl)
            error, _ = compare_with_modal(state, cfg)
            order = None
            if previous is not None and error > 0.0 and previous[1] > 0.0:
                order = math.log(previous[1] / error) / math.log(m / previous[0])
            rows.append(ConvergenceRow(epsilon=cfg.regularization, cells_m=m, error=error, order=order))
            previous = (m, error)
    logger.info(f"Convergence study: {len(rows)} runs at alpha={p.alpha}")
    return rows
