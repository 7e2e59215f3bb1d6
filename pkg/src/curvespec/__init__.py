"""Curvature potentials of closed curves and the spectra they bound."""

__version__ = "0.1.0"
