"""Polynomial lattice point sets over F_b((x^{-1})) and their net quality."""

__version__ = "0.1.0"
