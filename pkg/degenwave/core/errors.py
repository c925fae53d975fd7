"""Exception hierarchy shared by the numerical services, the CLI and the API."""


class DegenwaveError(Exception):
    """Base class for every error raised by degenwave."""


class DomainError(DegenwaveError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UnsupportedRegimeError(DomainError):
    """alpha >= 2 requested from a module that only covers (0, L) with alpha < 2."""


class ResolutionError(DegenwaveError, ValueError):
    """Not enough samples, zeros or cells to resolve the requested quantity."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class DegenerateInputError(DegenwaveError, ValueError):
    """Zero state, zero energy or a degenerate exponent family."""


class ConfigError(DegenwaveError, ValueError):
    """Scenario or solver configuration rejected."""


class InstabilityError(DegenwaveError, RuntimeError):
    """Time stepping produced non-finite values."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class TruncationError(DegenwaveError, RuntimeError):
    """Half-line data too close to the truncation boundary for the horizon."""
