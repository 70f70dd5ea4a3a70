"""Finite-dimensional Yang-Baxter solutions by reduction and fusion."""

__version__ = "0.1.0"
