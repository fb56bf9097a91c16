"""Influence maximization under the linear threshold model."""

__version__ = "0.1.0"
