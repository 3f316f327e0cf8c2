"""Steenrod algebra arithmetic, Adams E2 computations and stable stem tables."""

__version__ = "0.1.0"
