"""Fuzzy hypersphere gamma matrices, Zeeman-Dirac coherent states and the
geometry of the associated Bloch balls."""

__version__ = "0.1.0"
