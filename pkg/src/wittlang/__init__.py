"""Exact finite-level models of the universal groups for covers of the affine line."""

__version__ = "0.1.0"
