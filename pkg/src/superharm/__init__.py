"""Exact harmonic analysis on the superspace R^{m|2n}."""

__version__ = "0.1.0"
