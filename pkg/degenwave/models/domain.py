"""Immutable numeric containers passed between the services."""

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Regime(str, Enum):
    DIRICHLET_AT_ZERO = "dirichlet_at_zero"  # alpha in [0, 1): w(0) = 0
    FLUX_AT_ZERO = "flux_at_zero"  # alpha in [1, 2): (x^alpha w_x)(0) = 0


@dataclass(frozen=True)
class BasisParams:
    alpha: float
    length_l: float
    regime: Regime
    mu: float
    rho: float

    @classmethod
    def for_alpha(cls, alpha: float, length_l: float) -> "BasisParams":
        rho = (2.0 - alpha) / 2.0
        if alpha < 1.0:
            return cls(alpha, length_l, Regime.DIRICHLET_AT_ZERO, (1.0 - alpha) / (2.0 - alpha), rho)
        return cls(alpha, length_l, Regime.FLUX_AT_ZERO, (alpha - 1.0) / (2.0 - alpha), rho)


@dataclass(frozen=True)
class GridFunction:
    x: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.x.shape != self.values.shape:
            raise ValueError(f"grid has {self.x.size} nodes but {self.values.size} values")


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Integrate along the last axis."""
        return values @ self.weights


@dataclass(frozen=True)
class SpectralBasis:
    params: BasisParams
    zeros: np.ndarray  # j_{mu,n}
    eigenvalues: np.ndarray  # lambda_n
    boundary_flux: np.ndarray  # Phi_n'(L)
    norm_consts: np.ndarray  # sqrt(2 rho) / (L^rho |J_mu'(j_{mu,n})|)
    quadrature: QuadratureRule
    modes_at_nodes: np.ndarray  # Phi_n at the quadrature nodes, shape (N, nodes)

    @property
    def mode_count(self) -> int:
        return int(self.zeros.size)

    @property
    def frequencies(self) -> np.ndarray:
        return np.sqrt(self.eigenvalues)


@dataclass(frozen=True)
class ModalState:
    v0: np.ndarray
    v1: np.ndarray
    basis: SpectralBasis

    def __post_init__(self):
        if self.v0.shape != self.v1.shape:
            raise ValueError("v0 and v1 must have equal lengths")
        if self.v0.size > self.basis.mode_count:
            raise ValueError(f"state has {self.v0.size} modes, basis only {self.basis.mode_count}")
        if not (np.all(np.isfinite(self.v0)) and np.all(np.isfinite(self.v1))):
            raise ValueError("modal coefficients must be finite")

    @property
    def size(self) -> int:
        return int(self.v0.size)


@dataclass(frozen=True)
class ComplexModeAmps:
    c_plus: np.ndarray
    c_minus: np.ndarray


@dataclass(frozen=True)
class EnergyTrace:
    times: np.ndarray
    energy: np.ndarray


@dataclass(frozen=True)
class BoundaryTrace:
    times: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class FDState:
    w_prev: np.ndarray
    w_curr: np.ndarray
    time_index: int


@dataclass(frozen=True)
class Trajectory:
    x: np.ndarray
    times: np.ndarray
    snapshots: np.ndarray  # shape (len(times), len(x))


@dataclass(frozen=True)
class FDRun:
    x: np.ndarray
    dt: float
    state: FDState
    trajectory: Trajectory
    energy: EnergyTrace
    flux: BoundaryTrace
    forcing_norm_integral: float = 0.0  # int_0^T ||h(t)||_{L2} dt

    @property
    def final(self) -> GridFunction:
        return GridFunction(self.x, self.state.w_curr.copy())


@dataclass(frozen=True)
class ControlledRun:
    w_final: GridFunction
    wt_final: GridFunction
    energy: EnergyTrace
    flux: BoundaryTrace


@dataclass(frozen=True)
class ControlSignal:
    times: np.ndarray
    theta: np.ndarray

    def __call__(self, t):
        return np.interp(t, self.times, self.theta)


@dataclass(frozen=True)
class MomentSystem:
    basis: SpectralBasis
    exponents: np.ndarray  # eta_k, ordered (+1..+N, -1..-N)
    gram: np.ndarray
    rhs: np.ndarray
    flux_weights: np.ndarray  # L^alpha Phi_n'(L), per signed exponent
    horizon_t: float
    harmonics: tuple[float, ...] = (1.0,)  # time weight sum_p c_|p| e^{i p 2 pi t / T}
    data_modes: int = 0

    @property
    def size(self) -> int:
        return int(self.exponents.size)


@dataclass(frozen=True)
class HalfLineProblem:
    alpha: float
    length_l: float
    potential: Callable[[np.ndarray], np.ndarray]
    x_max: float
    label: str = field(default="")
