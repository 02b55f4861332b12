"""Exact checks for refinements of crystalline filtered phi-modules,
nested permutation sequences, deformation-dimension ledgers and the
elliptic-curve unobstructedness pipeline."""

__version__ = "0.1.0"
