import logging

import numpy as np
import pytest

from degenwave.models.schemas import FDConfig
from degenwave.services.observability import controllability_time
from degenwave.services.spectral_basis import build_basis

TEST_ALPHAS = (0.3, 0.5, 1.0, 1.5)


@pytest.fixture(autouse=True)
def _drop_stdout_handlers():
    """setup_logging binds a handler to the captured stdout of the test that called it."""
    yield
    root = logging.getLogger()
    for handler in [h for h in root.handlers if type(h) is logging.StreamHandler]:
        root.removeHandler(handler)


@pytest.fixture(scope="session")
def basis_half():
    """alpha = 0.5, L = 1, 16 modes (Dirichlet regime)."""
    return build_basis(0.5, 1.0, 16)


@pytest.fixture(scope="session")
def basis_flux():
    """alpha = 1.5, L = 1, 10 modes (flux regime)."""
    return build_basis(1.5, 1.0, 10)


@pytest.fixture(scope="session")
def basis_classical():
    return build_basis(0.0, 1.0, 8)


def smooth_data(count: int) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(1, count + 1, dtype=float)
    return (-1.0) ** (n + 1.0) / n**2, 0.5 / n**2


@pytest.fixture
def fd_config_half():
    return FDConfig(alpha=0.5, length_l=1.0, horizon_t=controllability_time(0.5, 1.0), cells_m=2000)
