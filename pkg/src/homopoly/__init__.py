"""Homomorphism polynomials with exact arithmetic and checked reductions."""

__version__ = "0.1.0"
