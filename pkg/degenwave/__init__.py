"""Spectral analysis, observability and boundary control of the degenerate wave equation."""

__version__ = "1.0.0"
