"""Exact Fourier-side construction and verification of dyadic Parseval frame MRA wavelets."""

__version__ = "0.1.0"
