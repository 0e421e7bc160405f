"""Numerical verification toolkit for the L^1 Bergman space of the upper half-plane and its Bloch-type predual."""

__version__ = "0.1.0"
