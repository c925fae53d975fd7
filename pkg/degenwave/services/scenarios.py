"""Command runners shared by the CLI and the HTTP routers."""

from dataclasses import dataclass

import numpy as np

from degenwave.core.constants import SAMPLES_PER_MODE
from degenwave.core.errors import ConfigError, UnsupportedRegimeError
from degenwave.core.logging import logger
from degenwave.models.domain import (
    BoundaryTrace,
    ControlSignal,
    EnergyTrace,
    GridFunction,
    ModalState,
    SpectralBasis,
    Trajectory,
)
from degenwave.models.schemas import (
    CounterexampleReport,
    DecayReport,
    EigenReport,
    GramSweepRow,
    ObservabilityReport,
    Scenario,
    SolveReport,
)
from degenwave.services import control_synth, fd_solver, liouville, modal_solver, observability, spectral_basis

COMMANDS = ("eigen", "solve", "observe", "control", "counterexample")
ENGINES = ("modal", "fd")


@dataclass(frozen=True)
class SolveResult:
    report: SolveReport
    trajectory: Trajectory
    energy: EnergyTrace
    trace: BoundaryTrace


# --- Validation ---
def validate_scenario(scenario: Scenario, command: str) -> None:
    """Check every module precondition for `command` before anything runs."""
    if command not in COMMANDS:
        raise ConfigError(f"cli: unknown command {command!r}")
    problems: list[str] = []
    s = scenario

    if command == "counterexample":
        if s.alpha < 2.0:
            problems.append(f"liouville: alpha={s.alpha} < 2; the half-line counterexample needs alpha >= 2")
        c = s.counterexample
        if not c.shifts or any(b <= a for a, b in zip(c.shifts, c.shifts[1:])):
            problems.append("liouville: shifts must be a non-empty increasing list")
        elif min(c.shifts) - c.bump_radius <= 0.0:
            problems.append(f"liouville: bump of radius {c.bump_radius} at shift {min(c.shifts)} touches X = 0")
        if not c.bump_radius > 0.0:
            problems.append(f"liouville: bump_radius must be > 0, got {c.bump_radius}")
        if c.cells_per_unit < 10:
            problems.append(f"liouville: cells_per_unit must be >= 10, got {c.cells_per_unit}")
    elif s.alpha >= 2.0:
        raise UnsupportedRegimeError(
            f"spectral_basis: alpha={s.alpha} >= 2 has no discrete spectrum on (0, L); "
            "use the counterexample command (liouville module)"
        )

    if not s.horizon_t > 0.0:
        problems.append(f"cli: horizon_t must be > 0, got {s.horizon_t}")

    if command in ("solve", "control"):
        try:
            fd_solver.validate_config(s.fd_config())
        except ConfigError as e:
            problems.append(str(e))
        d = s.data
        if d.modes < 1 or d.modes > s.mode_count_n:
            problems.append(f"cli: data.modes must be in 1..{s.mode_count_n}, got {d.modes}")
        if d.kind == "single" and not 1 <= d.mode_index <= d.modes:
            problems.append(f"cli: data.mode_index must be in 1..{d.modes}, got {d.mode_index}")

    if command == "control":
        if s.control_modes < s.data.modes:
            problems.append(f"control_synth: control_modes={s.control_modes} below the {s.data.modes} data modes")
        if s.control.samples_per_mode < SAMPLES_PER_MODE:
            problems.append(f"control_synth: samples_per_mode must be >= {SAMPLES_PER_MODE}")
        if not s.control.norm_sweep or min(s.control.norm_sweep) < 1:
            problems.append("control_synth: norm_sweep needs positive mode counts")

    if command == "observe":
        o = s.observe
        if o.trials < 10:
            problems.append(f"observability: trials must be >= 10, got {o.trials}")
        if not o.n_values or min(o.n_values) < 1:
            problems.append("observability: n_values needs positive mode counts")
        if not o.t_factors or min(o.t_factors) <= 0.0:
            problems.append("observability: t_factors must be > 0")

    if problems:
        raise ConfigError("; ".join(problems))

    if command in ("solve", "control"):
        # FD grid must carry the data modes
        basis = spectral_basis.build_basis(s.alpha, s.length_l, s.data.modes)
        x = fd_solver.grid_nodes(s.fd_config())
        spectral_basis.check_resolution(GridFunction(x, np.zeros_like(x)), basis)


# --- Initial data ---
def initial_modal_data(scenario: Scenario, basis: SpectralBasis) -> tuple[np.ndarray, np.ndarray]:
    d = scenario.data
    n = np.arange(1, d.modes + 1, dtype=float)
    if d.kind == "zero":
        return np.zeros(d.modes), np.zeros(d.modes)
    if d.kind == "single":
        v0 = np.zeros(d.modes)
        v0[d.mode_index - 1] = d.amplitude
        return v0, np.zeros(d.modes)
    if d.kind == "smooth":
        signs = (-1.0) ** (n + 1.0)
        return d.amplitude * signs / n**d.decay, d.velocity * d.amplitude / n**d.decay
    rng = np.random.default_rng(scenario.seed)
    v0 = d.amplitude * rng.standard_normal(d.modes) / n**d.decay
    v1 = d.velocity * d.amplitude * rng.standard_normal(d.modes) / n**d.decay
    return v0, v1


# --- Runners ---
def run_eigen(scenario: Scenario) -> EigenReport:
    validate_scenario(scenario, "eigen")
    basis = spectral_basis.build_basis(scenario.alpha, scenario.length_l, scenario.mode_count_n)
    p = basis.params
    return EigenReport(
        name=scenario.name,
        alpha=p.alpha,
        length_l=p.length_l,
        regime=p.regime.value,
        mu=p.mu,
        rho=p.rho,
        t_alpha=observability.controllability_time(p.alpha, p.length_l),
        rows=spectral_basis.basis_table(basis),
    )


def run_solve(scenario: Scenario, engine: str = "modal") -> SolveResult:
    """Evolve the scenario data with both engines; outputs follow `engine`."""
    if engine not in ENGINES:
        raise ConfigError(f"cli: engine must be one of {ENGINES}, got {engine!r}")
    validate_scenario(scenario, "solve")
    cfg = scenario.fd_config()
    basis = spectral_basis.build_basis(scenario.alpha, scenario.length_l, scenario.data.modes)
    v0, v1 = initial_modal_data(scenario, basis)
    state = ModalState(v0, v1, basis)

    l2_diff, run = fd_solver.compare_with_modal(state, cfg)
    modal_times = run.trajectory.times
    modal_energy = modal_solver.energy_trace(state, modal_times)
    e0 = modal_solver.energy(state)
    modal_drift = 0.0 if e0 == 0.0 else float(np.max(np.abs(modal_energy.energy - e0)) / e0)

    report = SolveReport(
        name=scenario.name,
        alpha=scenario.alpha,
        horizon_t=cfg.horizon_t,
        mode_count=basis.mode_count,
        cells_m=cfg.cells_m,
        l2_difference=l2_diff,
        modal_energy_drift=modal_drift,
        fd_energy_drift=fd_solver.energy_drift(run.energy),
        initial_energy=e0,
    )
    logger.info(f"Solve '{scenario.name}': modal/FD L2 difference {l2_diff:.3e}")

    if engine == "fd":
        return SolveResult(report=report, trajectory=run.trajectory, energy=run.energy, trace=run.flux)
    snapshots = np.vstack(
        [spectral_basis.synthesize(modal_solver.evolve(state, t).v0, basis, run.x).values for t in modal_times]
    )
    trace = BoundaryTrace(times=run.flux.times, values=modal_solver.boundary_trace(state, run.flux.times))
    return SolveResult(
        report=report,
        trajectory=Trajectory(x=run.x, times=modal_times, snapshots=snapshots),
        energy=modal_energy,
        trace=trace,
    )


def run_observe(scenario: Scenario, jobs: int | None = None) -> tuple[ObservabilityReport, list[GramSweepRow]]:
    validate_scenario(scenario, "observe")
    s = scenario
    basis = spectral_basis.build_basis(s.alpha, s.length_l, s.mode_count_n)
    report = observability.observability_report(basis, s.horizon_t, s.observe.trials, s.seed)
    t_alpha = observability.controllability_time(s.alpha, s.length_l)
    sweep = observability.gram_sweep(
        s.alpha, s.length_l, [f * t_alpha for f in s.observe.t_factors], s.observe.n_values, jobs
    )
    return report, sweep


def run_control(scenario: Scenario) -> tuple[ControlSignal, DecayReport]:
    validate_scenario(scenario, "control")
    s = scenario
    basis = spectral_basis.build_basis(s.alpha, s.length_l, s.control_modes)
    v0, v1 = initial_modal_data(s, basis)
    signal, report = control_synth.synthesize_and_verify(
        v0,
        v1,
        basis,
        s.fd_config(),
        control_modes=s.control_modes,
        weight=s.control_weight,
        samples_per_mode=s.control.samples_per_mode,
    )
    sweep = control_synth.control_norm_sweep(
        v0, v1, s.alpha, s.length_l, s.horizon_t, s.control.norm_sweep, s.control_weight
    )
    return signal, report.model_copy(update={"norm_sweep": sweep})


def run_counterexample(scenario: Scenario, jobs: int | None = None) -> CounterexampleReport:
    validate_scenario(scenario, "counterexample")
    s = scenario
    c = s.counterexample
    rows = liouville.translated_bump_quotient(
        s.alpha,
        s.length_l,
        s.horizon_t,
        c.shifts,
        bump_radius=c.bump_radius,
        cells_per_unit=c.cells_per_unit,
        free=c.potential == "free",
        jobs=jobs,
    )
    return CounterexampleReport(
        alpha=s.alpha, length_l=s.length_l, horizon_t=s.horizon_t, potential=c.potential, rows=rows
    )
