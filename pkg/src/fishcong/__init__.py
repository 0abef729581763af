"""Generalized Fishburn numbers and their prime-power congruences."""

__version__ = "0.1.0"
