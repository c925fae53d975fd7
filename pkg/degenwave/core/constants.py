"""Numerical constants, tolerances and defaults."""

import math

# Lanczos approximation, g = 7, nine coefficients.
LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
SQRT_2PI = math.sqrt(2.0 * math.pi)

# Bessel J evaluation
BESSEL_SERIES_SWITCH = 12.0  # power series for x <= 12
BESSEL_SERIES_TOL = 1e-17  # relative size of the last series term
BESSEL_ASYMPTOTIC_TOL = 1e-15  # Hankel accepted once its smallest term is below this; Schlaefli integral otherwise
BESSEL_INTEGRAL_TAIL = 42.0  # exponent where the Schlaefli tail integrand is negligible

# Zero finding
NEWTON_STEP_TOL = 1e-13
NEWTON_MAX_ITER = 60
ZERO_SCAN_POINTS = 16  # samples between consecutive zeros when checking for skipped roots

# Quadrature on (0, L)
QUAD_MIN_PANELS = 64
QUAD_PANELS_PER_MODE = 16
QUAD_ORDER = 8
QUAD_GEOMETRIC_RATIO = 0.15
QUAD_GEOMETRIC_LEVELS = 24
POINTS_PER_OSCILLATION = 8

# Observability
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 60
MIN_DENSITY_ZEROS = 100
CRITICAL_RATIO = 0.25

# Control synthesis
GRAM_PD_FLOOR = 1e-12  # lambda_min must exceed this times T
TIKHONOV_SCALE = 1e-12  # regularization mu_reg = TIKHONOV_SCALE * T
CHOLESKY_MAX_SIZE = 200
CG_TOL = 1e-13
SAMPLES_PER_MODE = 20
IMAG_RESIDUE_TOL = 1e-10

# FD solver
DEFAULT_CFL = 0.5
MIN_CELLS = 16

# Liouville half-line
DEFAULT_BUMP_RADIUS = 0.5
DEFAULT_CELLS_PER_UNIT = 200
HALFLINE_CFL = 0.5

# Output
FLOAT_FORMAT = "{:.17g}"
