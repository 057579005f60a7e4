"""Quantum amplitude estimation for catastrophe excess-of-loss pricing."""

__version__ = "0.1.0"
