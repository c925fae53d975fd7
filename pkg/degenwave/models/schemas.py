"""Pydantic schemas for scenarios, reports and API request/response models."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from degenwave.core.constants import (
    DEFAULT_BUMP_RADIUS,
    DEFAULT_CELLS_PER_UNIT,
    DEFAULT_CFL,
    SAMPLES_PER_MODE,
)


def _split_list(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


# --- Finite differences ---
class FDConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: float
    length_l: float
    horizon_t: float
    cells_m: int = 2000
    epsilon: float | None = None  # None: epsilon = dx^2
    cfl: float = DEFAULT_CFL
    snapshot_stride: int = 0  # 0: initial and final snapshots only

    @property
    def dx(self) -> float:
        return self.length_l / self.cells_m

    @property
    def regularization(self) -> float:
        return self.dx**2 if self.epsilon is None else self.epsilon


# --- Scenario sections ---
class FDSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cells_m: int = 2000
    epsilon: float | None = None
    cfl: float = DEFAULT_CFL
    snapshot_stride: int = 0


class DataSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["zero", "single", "smooth", "random"] = "smooth"
    modes: int | None = None  # defaults to mode_count_n
    mode_index: int = 1
    decay: float = 2.0
    amplitude: float = 1.0
    velocity: float = 0.5


class ObserveSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t_factors: list[float] = [0.8, 1.0, 1.2, 1.5]
    n_values: list[int] = [10, 20, 40]
    trials: int = 100

    @field_validator("t_factors", "n_values", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)


class ControlSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    samples_per_mode: int = SAMPLES_PER_MODE
    norm_sweep: list[int] = [8, 16, 24]

    @field_validator("norm_sweep", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)


class CounterexampleSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    shifts: list[int] = [1, 2, 3, 4, 5]
    bump_radius: float = DEFAULT_BUMP_RADIUS
    cells_per_unit: int = DEFAULT_CELLS_PER_UNIT
    potential: Literal["liouville", "free"] = "liouville"

    @field_validator("shifts", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)


# --- Scenario ---
class Scenario(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "scenario"
    alpha: float = Field(0.5, ge=0.0)
    length_l: float = Field(1.0, gt=0.0)
    horizon_t: float | None = None
    mode_count_n: int = Field(8, ge=1)
    control_modes: int | None = None
    control_weight: Literal["uniform", "smooth"] = "smooth"
    seed: int = 0
    output_dir: str = "out"

    fd: FDSection = Field(default_factory=FDSection)
    data: DataSection = Field(default_factory=DataSection)
    observe: ObserveSection = Field(default_factory=ObserveSection)
    control: ControlSection = Field(default_factory=ControlSection)
    counterexample: CounterexampleSection = Field(default_factory=CounterexampleSection)

    @model_validator(mode="after")
    def fill_defaults(self) -> "Scenario":
        if self.horizon_t is None:
            if self.alpha < 2.0:
                from degenwave.services.observability import controllability_time

                self.horizon_t = 1.2 * controllability_time(self.alpha, self.length_l)
            else:
                self.horizon_t = 4.0
        if self.control_modes is None:
            self.control_modes = 2 * self.mode_count_n
        if self.data.modes is None:
            self.data.modes = self.mode_count_n
        return self

    def fd_config(self) -> FDConfig:
        return FDConfig(
            alpha=self.alpha,
            length_l=self.length_l,
            horizon_t=self.horizon_t,
            cells_m=self.fd.cells_m,
            epsilon=self.fd.epsilon,
            cfl=self.fd.cfl,
            snapshot_stride=self.fd.snapshot_stride,
        )


# --- Eigen ---
class EigenRow(BaseModel):
    n: int
    j_mu_n: float
    lambda_n: float
    flux_l: float


class EigenReport(BaseModel):
    name: str
    alpha: float
    length_l: float
    regime: str
    mu: float
    rho: float
    t_alpha: float
    rows: list[EigenRow]


# --- Solve ---
class ConvergenceRow(BaseModel):
    epsilon: float
    cells_m: int
    error: float
    order: float | None = None


class SolveReport(BaseModel):
    name: str
    alpha: float
    horizon_t: float
    mode_count: int
    cells_m: int
    l2_difference: float  # modal vs FD at the final time
    modal_energy_drift: float
    fd_energy_drift: float
    initial_energy: float


# --- Observability ---
class RatioStats(BaseModel):
    min: float
    max: float
    mean: float


class InghamBounds(BaseModel):
    c_low: float
    c_high: float
    gram_min: float
    gram_max: float


class GramSweepRow(BaseModel):
    alpha: float
    horizon_t: float
    n: int
    lambda_min: float


class ObservabilityReport(BaseModel):
    alpha: float
    length_l: float
    horizon_t: float
    t_alpha: float
    travel_time: float
    d_plus: float
    mode_count: int
    gram_min_eigenvalue: float
    ratio_stats: RatioStats
    ingham: InghamBounds
    hidden_regularity_constant: float


# --- Control ---
class NormSweepRow(BaseModel):
    control_modes: int
    control_norm: float


class DecayReport(BaseModel):
    initial_energy: float
    final_energy: float
    ratio: float
    control_norm: float = 0.0
    control_norm_quadrature: float = 0.0
    moment_residual: float = 0.0
    horizon_t: float = 0.0
    t_alpha: float = 0.0
    below_threshold: bool = False
    control_modes: int = 0
    weight: str = "uniform"
    norm_sweep: list[NormSweepRow] = []


# --- Counterexample ---
class QuotientRow(BaseModel):
    shift: int
    numerator: float
    denominator: float
    quotient: float


class CounterexampleReport(BaseModel):
    alpha: float
    length_l: float
    horizon_t: float
    potential: str
    rows: list[QuotientRow]


# --- Health ---
class HealthResponse(BaseModel):
    status: str
    version: str


# --- API responses ---
class ObserveResponse(BaseModel):
    report: ObservabilityReport
    sweep: list[GramSweepRow]


class ControlResponse(BaseModel):
    report: DecayReport
    times: list[float]
    theta: list[float]
