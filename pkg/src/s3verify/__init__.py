"""Numerical verification toolkit for a symmetric family of surfaces in the 3-sphere."""

__version__ = "0.1.0"
